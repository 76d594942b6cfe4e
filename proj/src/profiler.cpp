#include "blockprof/profiler.hpp"

#include <algorithm>
#include <cmath>

#include "blockprof/errors.hpp"
#include "blockprof/parallel.hpp"

namespace blockprof {

namespace {

// Stream tags keep conditioned, baseline and self-baseline draws independent.
constexpr std::uint64_t kConditionedStream = 1;
constexpr std::uint64_t kBaselineStream = 2;
constexpr std::uint64_t kUnconditionedStream = 3;

Rng stream_for(std::uint64_t seed, const std::optional<Placement>& condition, const ProfileOptions& options,
               std::uint64_t stream) {
  const std::uint64_t res = options.resolution ? static_cast<std::uint64_t>(*options.resolution) : 0;
  if (!condition) return derive_rng(seed, {stream == 0 ? kUnconditionedStream : stream, res});
  const std::uint64_t ratio =
      condition->channel_ratio ? static_cast<std::uint64_t>(*channel_ratio_index(*condition->channel_ratio) + 1) : 0;
  return derive_rng(seed, {kConditionedStream, static_cast<std::uint64_t>(condition->unit),
                           static_cast<std::uint64_t>(condition->layer), condition->block.index, ratio, res});
}

std::string canonical_code(const DesignSpace& space, const std::string& token) {
  if (is_mobilenet(space.family)) {
    if (auto id = find_block(space.family, token)) return std::string(catalog_block(space.family, *id).code);
  }
  return token;
}

ProfileOptions single_threaded(ProfileOptions options) {
  options.workers = 1;
  return options;
}

void check_n(std::size_t n, std::size_t minimum, const char* what) {
  if (n < minimum) throw DomainError(std::string(what) + " must be at least " + std::to_string(minimum));
}

}  // namespace

SampleSet draw_samples(const DesignSpace& space, const std::optional<Placement>& condition,
                       const MetricEvaluator& evaluator, std::size_t n, std::uint64_t seed,
                       const ProfileOptions& options, std::uint64_t stream) {
  if (condition) check_placement(space, *condition);
  Rng rng = stream_for(seed, condition, options, stream);
  std::vector<Architecture> archs;
  archs.reserve(n);
  for (std::size_t i = 0; i < n; ++i) {
    archs.push_back(condition ? sample_fixed(space, *condition, rng, options.resolution)
                              : sample_uniform(space, rng, options.resolution));
  }
  SampleSet set{evaluator.name(), std::vector<double>(n), condition, seed};
  parallel_for(n, options.workers, [&](std::size_t i) {
    const double v = evaluator.evaluate(archs[i]);
    if (!std::isfinite(v)) throw DomainError("metric '" + evaluator.name() + "' returned a non-finite value");
    set.values[i] = v;
  });
  return set;
}

DistributionSummary summarize(std::vector<double> values, const std::vector<double>& taus) {
  DistributionSummary s;
  const auto ms = mean_stats(values);
  s.mean = ms.mean;
  s.mean_se = ms.stderr_of_mean;
  s.n = values.size();
  std::sort(values.begin(), values.end());
  for (double tau : taus) {
    s.percentiles.push_back(percentile_sorted(values, tau));
    s.percentile_se.push_back(percentile_stderr_sorted(values, tau));
  }
  return s;
}

MeanStats aggregate_placement_means(const std::vector<MeanStats>& per_placement) {
  MeanStats out;
  if (per_placement.empty()) return out;
  double sum = 0.0;
  double var = 0.0;
  for (const auto& p : per_placement) {
    sum += p.mean;
    var += p.stderr_of_mean * p.stderr_of_mean;
    out.n += p.n;
  }
  const auto count = static_cast<double>(per_placement.size());
  out.mean = sum / count;
  out.stderr_of_mean = std::sqrt(var) / count;
  return out;
}

BlockMean estimate_block_mean(const DesignSpace& space, const std::string& block, const MetricEvaluator& evaluator,
                              std::size_t n_per_placement, std::uint64_t seed, const ProfileOptions& options) {
  check_n(n_per_placement, 1, "samples per placement");
  BlockMean out;
  out.code = canonical_code(space, block);
  out.n_per_placement = n_per_placement;
  out.placements = placements_of(space, out.code);
  if (out.placements.empty()) throw DomainError("block '" + block + "' is not a candidate of any unit");
  for (int u = 1; u <= static_cast<int>(space.unit_count()); ++u) {
    const bool present = std::any_of(out.placements.begin(), out.placements.end(),
                                     [&](const Placement& p) { return p.unit == u; });
    if (!present) out.excluded_units.push_back(u);
  }
  out.placement_stats.resize(out.placements.size());
  const auto inner = single_threaded(options);
  parallel_for(out.placements.size(), options.workers, [&](std::size_t i) {
    const auto set = draw_samples(space, out.placements[i], evaluator, n_per_placement, seed, inner);
    out.placement_stats[i] = mean_stats(set.values);
  });
  const auto agg = aggregate_placement_means(out.placement_stats);
  out.mean = agg.mean;
  out.stderr_of_mean = agg.stderr_of_mean;
  return out;
}

DistributionSummary unconditioned_baseline(const DesignSpace& space, const MetricEvaluator& evaluator, std::size_t n,
                                           std::uint64_t seed, const std::vector<double>& taus,
                                           const ProfileOptions& options) {
  check_n(n, 2, "baseline sample count");
  for (double tau : taus) check_tau(tau);
  auto set = draw_samples(space, std::nullopt, evaluator, n, seed, options, kBaselineStream);
  return summarize(std::move(set.values), taus);
}

RelativeStats estimate_placement_stats(const DesignSpace& space, const std::optional<Placement>& condition,
                                       const MetricEvaluator& evaluator, std::size_t n, std::uint64_t seed,
                                       const std::vector<double>& taus, const DistributionSummary& baseline,
                                       const ProfileOptions& options) {
  check_n(n, 2, "sample count");
  for (double tau : taus) check_tau(tau);
  if (baseline.percentiles.size() != taus.size()) throw DomainError("baseline was summarized at different percentiles");
  auto set = draw_samples(space, condition, evaluator, n, seed, options);
  RelativeStats out;
  out.condition = condition;
  out.code = condition ? placement_code(space, *condition) : "";
  out.conditioned = summarize(std::move(set.values), taus);
  out.mean_rel = out.conditioned.mean - baseline.mean;
  out.mean_rel_se = std::hypot(out.conditioned.mean_se, baseline.mean_se);
  for (std::size_t i = 0; i < taus.size(); ++i) {
    out.percentile_rel.push_back(out.conditioned.percentiles[i] - baseline.percentiles[i]);
    out.percentile_rel_se.push_back(std::hypot(out.conditioned.percentile_se[i], baseline.percentile_se[i]));
  }
  return out;
}

RelativeStats estimate_placement_stats(const DesignSpace& space, const std::optional<Placement>& condition,
                                       const MetricEvaluator& evaluator, std::size_t n, std::uint64_t seed,
                                       const std::vector<double>& taus, const ProfileOptions& options) {
  const auto baseline = unconditioned_baseline(space, evaluator, n, seed, taus, options);
  return estimate_placement_stats(space, condition, evaluator, n, seed, taus, baseline, options);
}

BlockHeatmap block_heatmap(const DesignSpace& space, const MetricEvaluator& evaluator, std::size_t n_per_placement,
                           std::uint64_t seed, const ProfileOptions& options) {
  BlockHeatmap map;
  map.metric = evaluator.name();
  const bool resnet = space.family == BlockFamily::ResNetBottleneck;
  map.axis1_name = resnet ? "channel_ratio" : "expansion_ratio";
  map.axis2_name = resnet ? "layer_ratio" : "kernel_size";

  std::vector<std::optional<int>> grids;
  if (options.resolution) {
    grids.push_back(options.resolution);
  } else if (evaluator.resolution_sensitive() && space.resolutions.size() > 1) {
    for (int r : space.resolutions) grids.emplace_back(r);
  } else {
    grids.emplace_back(std::nullopt);
  }

  for (const auto& res : grids) {
    ProfileOptions grid_options = options;
    grid_options.resolution = res;
    for (const auto& code : profile_block_codes(space)) {
      const auto bm = estimate_block_mean(space, code, evaluator, n_per_placement, seed, grid_options);
      const auto& p = bm.placements.front();
      const auto& entry = catalog_block(space.family, p.block);
      HeatmapCell cell;
      cell.code = code;
      cell.axis1 = resnet ? *p.channel_ratio : entry.expansion_ratio;
      cell.axis2 = resnet ? entry.expansion_ratio : static_cast<double>(entry.kernel_size);
      cell.resolution = res;
      cell.mean = bm.mean;
      cell.stderr_of_mean = bm.stderr_of_mean;
      cell.n = bm.n_per_placement * bm.placements.size();
      map.cells.push_back(std::move(cell));
    }
  }
  return map;
}

PlacementReport placement_sweep(const DesignSpace& space, const MetricEvaluator& evaluator, std::size_t n,
                                std::uint64_t seed, const std::vector<double>& taus, const ProfileOptions& options,
                                std::optional<std::size_t> baseline_n) {
  PlacementReport report;
  report.metric = evaluator.name();
  report.taus = taus;
  report.baseline = unconditioned_baseline(space, evaluator, baseline_n.value_or(n), seed, taus, options);

  const auto placements = enumerate_placements(space);
  report.rows.resize(placements.size());
  const auto inner = single_threaded(options);
  parallel_for(placements.size(), options.workers, [&](std::size_t i) {
    report.rows[i] = estimate_placement_stats(space, placements[i], evaluator, n, seed, taus, report.baseline, inner);
  });

  for (std::size_t i = 0; i < placements.size(); ++i) {
    const auto& p = placements[i];
    const bool new_unit = i == 0 || placements[i - 1].unit != p.unit;
    const bool new_layer = new_unit || placements[i - 1].layer != p.layer;
    if (new_unit) report.unit_starts.push_back(i);
    if (new_layer) report.layer_starts.push_back(i);
    if (p.channel_ratio && (new_layer || placements[i - 1].channel_ratio != p.channel_ratio)) {
      report.ratio_starts.push_back(i);
    }
  }
  return report;
}

}  // namespace blockprof
