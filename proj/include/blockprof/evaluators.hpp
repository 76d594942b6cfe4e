#pragma once

#include <string>
#include <string_view>
#include <vector>

#include "blockprof/design_space.hpp"
#include "blockprof/metric.hpp"

namespace blockprof {

/// Builds an evaluator from a CLI metric name:
///   macs, params, acc (synthetic accuracy), kernel7, layers,
///   npu | gpu | cpu | note10 (device-profile presets),
///   a preset profile name (npu-like, ...), profile:PATH, table:PATH,
///   accuracy:PATH.
/// Throws DomainError when the metric does not apply to the space.
EvaluatorPtr make_evaluator(std::string_view metric, const DesignSpace& space);

std::vector<std::string> metric_names();

}  // namespace blockprof
