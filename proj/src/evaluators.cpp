#include "blockprof/evaluators.hpp"

#include "blockprof/accuracy_model.hpp"
#include "blockprof/cost_models.hpp"
#include "blockprof/device_profile.hpp"
#include "blockprof/errors.hpp"
#include "blockprof/metric_table.hpp"

namespace blockprof {

namespace {

struct Alias {
  std::string_view metric;
  std::string_view profile;
};

constexpr Alias kProfileAliases[] = {
    {"npu", "npu-like"},
    {"gpu", "gpu-flat"},
    {"cpu", "cpu-expansion-bound"},
    {"note10", "note10-linear"},
};

bool starts_with(std::string_view s, std::string_view prefix) { return s.substr(0, prefix.size()) == prefix; }

}  // namespace

std::vector<std::string> metric_names() {
  std::vector<std::string> out{"macs", "params", "acc", "kernel7", "layers"};
  for (const auto& a : kProfileAliases) out.emplace_back(a.metric);
  for (const auto& p : preset_profile_names()) out.push_back(p);
  return out;
}

EvaluatorPtr make_evaluator(std::string_view metric, const DesignSpace& space) {
  if (metric == "macs") return std::make_shared<MacsEvaluator>(space);
  if (metric == "params") return std::make_shared<ParamsEvaluator>(space);
  if (metric == "acc" || metric == "accuracy") {
    return std::make_shared<SyntheticAccuracyEvaluator>(space, load_accuracy_model("synthetic"), std::string(metric));
  }
  if (metric == "kernel7") return kernel7_count_evaluator(space);
  if (metric == "layers") return layer_count_evaluator();
  for (const auto& a : kProfileAliases) {
    if (metric == a.metric) {
      return std::make_shared<DeviceProfileEvaluator>(space, load_device_profile(a.profile), std::string(metric));
    }
  }
  for (const auto& p : preset_profile_names()) {
    if (metric == p) return std::make_shared<DeviceProfileEvaluator>(space, load_device_profile(p));
  }
  if (starts_with(metric, "profile:")) {
    return std::make_shared<DeviceProfileEvaluator>(space, load_device_profile(metric.substr(8)));
  }
  if (starts_with(metric, "table:")) {
    return std::make_shared<TableEvaluator>(space, load_metric_table(metric.substr(6)));
  }
  if (starts_with(metric, "accuracy:")) {
    return std::make_shared<SyntheticAccuracyEvaluator>(space, load_accuracy_model(metric.substr(9)));
  }
  throw NotFoundError("unknown metric '" + std::string(metric) + "'");
}

}  // namespace blockprof
