#include "blockprof/metric.hpp"

#include <string>

#include "blockprof/errors.hpp"
#include "blockprof/io.hpp"

namespace blockprof {

std::string_view to_string(Direction direction) {
  return direction == Direction::Maximize ? "maximize" : "minimize";
}

Direction parse_direction(std::string_view text) {
  if (text == "max" || text == "maximize") return Direction::Maximize;
  if (text == "min" || text == "minimize") return Direction::Minimize;
  throw ParseError("unknown direction '" + std::string(text) + "' (expected max or min)");
}

namespace {

class ConstantEvaluator final : public MetricEvaluator {
 public:
  explicit ConstantEvaluator(double value)
      : MetricEvaluator("constant", Direction::Minimize), value_(value) {}
  double evaluate(const Architecture&) const override { return value_; }
  bool resolution_sensitive() const override { return false; }
  std::string parameter_text() const override { return "constant:" + format_number(value_); }

 private:
  double value_;
};

}  // namespace

EvaluatorPtr constant_evaluator(double value) { return std::make_shared<ConstantEvaluator>(value); }

EvaluatorPtr kernel7_count_evaluator(const DesignSpace& space) {
  const auto family = space.family;
  return std::make_shared<FunctionEvaluator>(
      "kernel7", Direction::Minimize,
      [family](const Architecture& arch) {
        double count = 0;
        for (const auto& unit : arch.blocks) {
          for (auto id : unit) count += catalog_block(family, id).kernel_size == 7 ? 1.0 : 0.0;
        }
        return count;
      },
      false);
}

EvaluatorPtr layer_count_evaluator() {
  return std::make_shared<FunctionEvaluator>(
      "layers", Direction::Minimize, [](const Architecture& arch) { return static_cast<double>(arch.layer_count()); },
      false);
}

}  // namespace blockprof
