#pragma once

#include <cstdint>
#include <optional>
#include <string>
#include <vector>

#include "blockprof/design_space.hpp"
#include "blockprof/metric.hpp"
#include "blockprof/stats.hpp"

namespace blockprof {

struct ProfileOptions {
  int workers = 1;
  std::optional<int> resolution;  // pin the input resolution of every sample
};

/// Metric values of N architectures drawn under one condition.
struct SampleSet {
  std::string metric;
  std::vector<double> values;
  std::optional<Placement> condition;  // nullopt = unconditioned
  std::uint64_t seed = 0;
};

/// Draws `n` architectures (A_{u,l,b} when `condition` is set, A otherwise)
/// from a stream derived from (seed, condition, resolution) and evaluates them.
/// `stream` separates independent unconditioned draws under one seed.
SampleSet draw_samples(const DesignSpace& space, const std::optional<Placement>& condition,
                       const MetricEvaluator& evaluator, std::size_t n, std::uint64_t seed,
                       const ProfileOptions& options = {}, std::uint64_t stream = 0);

struct DistributionSummary {
  double mean = 0.0;
  double mean_se = 0.0;
  std::vector<double> percentiles;
  std::vector<double> percentile_se;
  std::size_t n = 0;
};

DistributionSummary summarize(std::vector<double> values, const std::vector<double>& taus);

/// Block-wise average response of one block over all of its placements.
struct BlockMean {
  std::string code;
  double mean = 0.0;
  double stderr_of_mean = 0.0;
  std::size_t n_per_placement = 0;
  std::vector<Placement> placements;
  std::vector<MeanStats> placement_stats;
  std::vector<int> excluded_units;  // units where the block is not a candidate
};

/// Unweighted average of per-placement means, SE = sqrt(sum se_p^2) / P.
MeanStats aggregate_placement_means(const std::vector<MeanStats>& per_placement);

/// The unweighted average, over every placement (u,l) with l <= d_max(u) at
/// which the block is valid, of E[M(A_{u,l,b})]. Accepts a block code or
/// name; throws DomainError when the block is valid nowhere.
BlockMean estimate_block_mean(const DesignSpace& space, const std::string& block, const MetricEvaluator& evaluator,
                              std::size_t n_per_placement, std::uint64_t seed, const ProfileOptions& options = {});

/// Conditioned-minus-unconditioned statistics of one placement.
struct RelativeStats {
  std::optional<Placement> condition;
  std::string code;
  DistributionSummary conditioned;
  double mean_rel = 0.0;
  double mean_rel_se = 0.0;
  std::vector<double> percentile_rel;
  std::vector<double> percentile_rel_se;
};

DistributionSummary unconditioned_baseline(const DesignSpace& space, const MetricEvaluator& evaluator, std::size_t n,
                                           std::uint64_t seed, const std::vector<double>& taus,
                                           const ProfileOptions& options = {});

/// M_{u,l,b} = E[M(A_{u,l,b})] - E[M(A)] and, for each tau,
/// Q_tau(M(A_{u,l,b})) - Q_tau(M(A)), against a shared baseline. With no
/// condition the "conditioned" side is a fresh unconditioned draw.
RelativeStats estimate_placement_stats(const DesignSpace& space, const std::optional<Placement>& condition,
                                       const MetricEvaluator& evaluator, std::size_t n, std::uint64_t seed,
                                       const std::vector<double>& taus, const DistributionSummary& baseline,
                                       const ProfileOptions& options = {});

/// As above with its own baseline of the same size.
RelativeStats estimate_placement_stats(const DesignSpace& space, const std::optional<Placement>& condition,
                                       const MetricEvaluator& evaluator, std::size_t n, std::uint64_t seed,
                                       const std::vector<double>& taus, const ProfileOptions& options = {});

struct HeatmapCell {
  std::string code;
  double axis1 = 0.0;  // expansion ratio (MobileNets) or channel ratio (ResNet)
  double axis2 = 0.0;  // kernel size (MobileNets) or layer expansion ratio (ResNet)
  std::optional<int> resolution;
  double mean = 0.0;
  double stderr_of_mean = 0.0;
  std::size_t n = 0;
};

struct BlockHeatmap {
  std::string metric;
  std::string axis1_name;
  std::string axis2_name;
  std::vector<HeatmapCell> cells;  // resolution-major, then catalog order
};

/// Block means for every profiled block; one grid per resolution when the
/// evaluator is resolution-sensitive and the space has several resolutions
/// (unless options.resolution pins one).
BlockHeatmap block_heatmap(const DesignSpace& space, const MetricEvaluator& evaluator, std::size_t n_per_placement,
                           std::uint64_t seed, const ProfileOptions& options = {});

struct PlacementReport {
  std::string metric;
  std::vector<double> taus;
  DistributionSummary baseline;
  std::vector<RelativeStats> rows;        // unit-major, layer-middle, block-minor
  std::vector<std::size_t> unit_starts;   // row index where each unit begins
  std::vector<std::size_t> layer_starts;  // row index where each (unit, layer) begins
  std::vector<std::size_t> ratio_starts;  // ResNet: where each channel-ratio group begins
};

/// Relative statistics for every placement against one shared baseline of
/// `baseline_n` samples (default `n`).
PlacementReport placement_sweep(const DesignSpace& space, const MetricEvaluator& evaluator, std::size_t n,
                                std::uint64_t seed, const std::vector<double>& taus,
                                const ProfileOptions& options = {}, std::optional<std::size_t> baseline_n = {});

}  // namespace blockprof
