#include "blockprof/stats.hpp"

#include <algorithm>
#include <cmath>
#include <string>

#include "blockprof/errors.hpp"
#include "blockprof/io.hpp"

namespace blockprof {

void check_tau(double tau) {
  if (!(tau >= 0.0 && tau <= 100.0)) throw DomainError("percentile " + format_number(tau) + " is outside [0, 100]");
}

double percentile_sorted(std::span<const double> sorted, double tau) {
  check_tau(tau);
  if (sorted.empty()) throw DomainError("percentile of an empty sample");
  const double h = static_cast<double>(sorted.size() - 1) * tau / 100.0;
  const auto lo = static_cast<std::size_t>(std::floor(h));
  const auto hi = std::min(lo + 1, sorted.size() - 1);
  const double frac = h - static_cast<double>(lo);
  return sorted[lo] + frac * (sorted[hi] - sorted[lo]);
}

double percentile(std::span<const double> values, double tau) {
  check_tau(tau);
  if (values.empty()) throw DomainError("percentile of an empty sample");
  std::vector<double> sorted(values.begin(), values.end());
  std::sort(sorted.begin(), sorted.end());
  return percentile_sorted(sorted, tau);
}

MeanStats mean_stats(std::span<const double> values) {
  MeanStats s;
  s.n = values.size();
  if (values.empty()) return s;
  double sum = 0.0;
  for (double v : values) sum += v;
  s.mean = sum / static_cast<double>(s.n);
  if (s.n > 1) {
    double ss = 0.0;
    for (double v : values) ss += (v - s.mean) * (v - s.mean);
    s.stderr_of_mean = std::sqrt(ss / static_cast<double>(s.n - 1) / static_cast<double>(s.n));
  }
  return s;
}

double percentile_stderr_sorted(std::span<const double> sorted, double tau) {
  check_tau(tau);
  if (sorted.size() < 2) return 0.0;
  const double p = tau / 100.0;
  const double spread = 100.0 * std::sqrt(p * (1.0 - p) / static_cast<double>(sorted.size()));
  const double lo = percentile_sorted(sorted, std::max(0.0, tau - spread));
  const double hi = percentile_sorted(sorted, std::min(100.0, tau + spread));
  return 0.5 * (hi - lo);
}

}  // namespace blockprof
