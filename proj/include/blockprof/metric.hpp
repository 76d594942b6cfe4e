#pragma once

#include <functional>
#include <memory>
#include <string>
#include <string_view>
#include <utility>

#include "blockprof/design_space.hpp"

namespace blockprof {

enum class Direction { Maximize, Minimize };

std::string_view to_string(Direction direction);
Direction parse_direction(std::string_view text);

/// Maps an architecture of one declared space to a scalar. Implementations
/// are immutable after construction and safe to call from many threads.
class MetricEvaluator {
 public:
  MetricEvaluator(std::string name, Direction direction, std::string units = "")
      : name_(std::move(name)), units_(std::move(units)), direction_(direction) {}
  virtual ~MetricEvaluator() = default;

  const std::string& name() const { return name_; }
  const std::string& units() const { return units_; }
  Direction direction() const { return direction_; }

  virtual double evaluate(const Architecture& arch) const = 0;

  /// False when the metric ignores the input resolution (profilers then
  /// skip per-resolution grids).
  virtual bool resolution_sensitive() const { return true; }

  /// Stable text describing the evaluator's parameters; hashed into run
  /// manifests.
  virtual std::string parameter_text() const { return name_; }

 private:
  std::string name_;
  std::string units_;
  Direction direction_;
};

using EvaluatorPtr = std::shared_ptr<const MetricEvaluator>;

/// Wraps a callable; used for ad-hoc metrics and in tests.
class FunctionEvaluator final : public MetricEvaluator {
 public:
  using Fn = std::function<double(const Architecture&)>;

  FunctionEvaluator(std::string name, Direction direction, Fn fn, bool resolution_sensitive = true)
      : MetricEvaluator(std::move(name), direction), fn_(std::move(fn)), resolution_sensitive_(resolution_sensitive) {}

  double evaluate(const Architecture& arch) const override { return fn_(arch); }
  bool resolution_sensitive() const override { return resolution_sensitive_; }

 private:
  Fn fn_;
  bool resolution_sensitive_;
};

/// Returns `value` for every architecture.
EvaluatorPtr constant_evaluator(double value);

/// Number of body layers whose depthwise kernel is 7.
EvaluatorPtr kernel7_count_evaluator(const DesignSpace& space);

/// Total number of body layers.
EvaluatorPtr layer_count_evaluator();

}  // namespace blockprof
