#pragma once

#include <map>
#include <string>
#include <string_view>
#include <vector>

#include "blockprof/design_space.hpp"
#include "blockprof/metric.hpp"

namespace blockprof {

/// Coefficients of the synthetic accuracy fixture for one family.
///
/// score = base + resolution_bonus(r) + sum_{present (u,l)} w(u,l) * cap(b)
///       + sum_u depth_bonus(u) * [d_u == d_max(u)], clamped to [0, 100].
///
/// cap is keyed by placement code (block code, or joint code for ResNet) and
/// must increase along both catalog axes; w(u,l) must be nondecreasing in u.
struct AccuracyCoefficients {
  double base = 0.0;
  std::vector<std::vector<double>> placement_weights;  // per unit; last value repeats for deeper layers
  std::map<std::string, double> capacity;
  std::vector<double> depth_bonus;
  std::map<int, double> resolution_bonus;

  double weight(std::size_t unit_index, std::size_t layer_index) const;
  friend bool operator==(const AccuracyCoefficients&, const AccuracyCoefficients&) = default;
};

struct AccuracyModel {
  std::string name;
  std::map<BlockFamily, AccuracyCoefficients> families;
};

AccuracyModel load_accuracy_model(std::string_view name_or_path);
AccuracyModel parse_accuracy_model(std::string_view text);

/// Checks the monotonicity requirements and coverage of the space.
void check_accuracy_model(const AccuracyModel& model, const DesignSpace& space);

double synthetic_accuracy(const Architecture& arch, const DesignSpace& space, const AccuracyModel& model);

class SyntheticAccuracyEvaluator final : public MetricEvaluator {
 public:
  SyntheticAccuracyEvaluator(DesignSpace space, AccuracyModel model, std::string name = "acc");
  double evaluate(const Architecture& arch) const override;
  std::string parameter_text() const override;

 private:
  DesignSpace space_;
  AccuracyModel model_;
  std::string text_;
};

}  // namespace blockprof
