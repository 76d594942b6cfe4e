#pragma once

#include <span>
#include <vector>

namespace blockprof {

/// Linear-interpolation percentile: sort ascending, interpolate at rank
/// h = (n - 1) * tau / 100. Throws DomainError on empty input or tau outside
/// [0, 100].
double percentile(std::span<const double> values, double tau);
double percentile_sorted(std::span<const double> sorted, double tau);

void check_tau(double tau);

struct MeanStats {
  double mean = 0.0;
  double stderr_of_mean = 0.0;  // sample sd / sqrt(n); 0 for n == 1
  std::size_t n = 0;
};

MeanStats mean_stats(std::span<const double> values);

/// Distribution-free standard error of the tau-percentile estimate: half the
/// distance between the percentiles at tau -/+ 100 * sqrt(p (1 - p) / n),
/// p = tau / 100 (binomial spread of the order-statistic rank).
double percentile_stderr_sorted(std::span<const double> sorted, double tau);

}  // namespace blockprof
