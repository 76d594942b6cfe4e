#pragma once

#include <filesystem>
#include <string>
#include <vector>

#include "blockprof/design_space.hpp"
#include "blockprof/evo_search.hpp"
#include "blockprof/pareto.hpp"
#include "blockprof/profiler.hpp"

namespace blockprof {

// Delimited-text exports. Every writer is a pure function of its input so
// repeated runs produce byte-identical files.

/// block_code,axis1,axis2 (named after the heatmap axes),resolution,mean,stderr,n
std::string heatmap_csv(const BlockHeatmap& map);

/// Percentile column label, e.g. 5 -> "p05", 97.5 -> "p97.5".
std::string percentile_label(double tau);

/// One row per placement. Relative columns (mean_rel, pXX_rel) by default;
/// `raw` switches to conditioned values (mean, pXX). Standard errors follow.
std::string sweep_csv(const PlacementReport& report, const DesignSpace& space, bool raw = false);

/// kind,row,unit,layer,channel_ratio: where units, layers and ratio groups begin.
std::string boundaries_csv(const PlacementReport& report);

/// Whitespace-separated columns with '#' comment header, for gnuplot.
std::string sweep_plot_data(const PlacementReport& report, bool raw = false);
std::string heatmap_plot_data(const BlockHeatmap& map);

/// id,generation,<objectives...>,parent,mutation,record
std::string frontier_csv(const ParetoFront& front, const DesignSpace& space);
Json frontier_json(const ParetoFront& front, const DesignSpace& space);

/// generation,evaluations,best_<obj>,median_<obj>...
std::string history_csv(const SearchResult& result, const std::vector<std::string>& objectives);

std::string comparison_csv(const FrontierComparison& cmp);

/// Provenance of one command invocation. Output hashes are recorded as files
/// are written.
class RunManifest {
 public:
  RunManifest(std::string command_line, std::uint64_t seed);

  void set_space(const DesignSpace& space);
  void add_evaluator(const MetricEvaluator& evaluator);
  void set_config(Json config);
  void set_value(const std::string& key, Json value);

  /// Writes `content` to `path`, records its hash and returns the path.
  std::filesystem::path write_output(const std::filesystem::path& path, std::string_view content);

  const std::vector<std::pair<std::string, std::string>>& outputs() const { return outputs_; }
  Json to_json() const;
  std::filesystem::path write(const std::filesystem::path& path);

 private:
  std::string command_line_;
  std::uint64_t seed_;
  std::string started_at_;
  Json spaces_ = Json::array();
  Json evaluators_ = Json::array();
  Json config_ = Json::object();
  Json extra_ = Json::object();
  std::vector<std::pair<std::string, std::string>> outputs_;  // (path, sha256)
};

/// SHA-256 of a space's canonical config text.
std::string space_fingerprint(const DesignSpace& space);

}  // namespace blockprof
