#include "blockprof/report.hpp"

#include <chrono>
#include <cmath>
#include <ctime>

#include "blockprof/defaults.hpp"
#include "blockprof/io.hpp"

namespace blockprof {

namespace {

std::string utc_now() {
  const std::time_t t = std::chrono::system_clock::to_time_t(std::chrono::system_clock::now());
  std::tm tm{};
  gmtime_r(&t, &tm);
  char buf[32];
  std::strftime(buf, sizeof buf, "%Y-%m-%dT%H:%M:%SZ", &tm);
  return buf;
}

std::string opt_number(const std::optional<double>& v) { return v ? format_number(*v) : ""; }

std::string resolution_label(const std::optional<int>& res) { return res ? std::to_string(*res) : "any"; }

}  // namespace

std::string heatmap_csv(const BlockHeatmap& map) {
  std::string out = csv_row({"block_code", map.axis1_name, map.axis2_name, "resolution", "mean", "stderr", "n"});
  for (const auto& c : map.cells) {
    out += csv_row({c.code, format_number(c.axis1), format_number(c.axis2), c.resolution ? std::to_string(*c.resolution) : "",
                    format_number(c.mean), format_number(c.stderr_of_mean), std::to_string(c.n)});
  }
  return out;
}

std::string percentile_label(double tau) {
  std::string digits = format_number(tau);
  if (tau < 10.0) digits = "0" + digits;
  return "p" + digits;
}

std::string sweep_csv(const PlacementReport& report, const DesignSpace& space, bool raw) {
  const std::string suffix = raw ? "" : "_rel";
  std::vector<std::string> header{"unit", "layer", "block_code", "mean" + suffix};
  for (double t : report.taus) header.push_back(percentile_label(t) + suffix);
  header.push_back("mean" + suffix + "_se");
  for (double t : report.taus) header.push_back(percentile_label(t) + suffix + "_se");
  header.push_back("baseline_mean");
  for (double t : report.taus) header.push_back("baseline_" + percentile_label(t));
  header.push_back("n");
  std::string out = csv_row(header);
  for (const auto& r : report.rows) {
    std::vector<std::string> f{std::to_string(r.condition->unit), std::to_string(r.condition->layer),
                               placement_code(space, *r.condition)};
    f.push_back(format_number(raw ? r.conditioned.mean : r.mean_rel));
    for (std::size_t i = 0; i < report.taus.size(); ++i) {
      f.push_back(format_number(raw ? r.conditioned.percentiles[i] : r.percentile_rel[i]));
    }
    f.push_back(format_number(raw ? r.conditioned.mean_se : r.mean_rel_se));
    for (std::size_t i = 0; i < report.taus.size(); ++i) {
      f.push_back(format_number(raw ? r.conditioned.percentile_se[i] : r.percentile_rel_se[i]));
    }
    f.push_back(format_number(report.baseline.mean));
    for (double p : report.baseline.percentiles) f.push_back(format_number(p));
    f.push_back(std::to_string(r.conditioned.n));
    out += csv_row(f);
  }
  return out;
}

std::string boundaries_csv(const PlacementReport& report) {
  std::string out = csv_row({"kind", "row", "unit", "layer", "channel_ratio"});
  auto emit = [&](const char* kind, const std::vector<std::size_t>& rows) {
    for (std::size_t row : rows) {
      const auto& p = *report.rows[row].condition;
      out += csv_row({kind, std::to_string(row), std::to_string(p.unit), std::to_string(p.layer),
                      opt_number(p.channel_ratio)});
    }
  };
  emit("unit", report.unit_starts);
  emit("layer", report.layer_starts);
  emit("channel_ratio", report.ratio_starts);
  return out;
}

std::string sweep_plot_data(const PlacementReport& report, bool raw) {
  std::string out = "# metric " + report.metric + (raw ? " (conditioned)" : " (relative)") + "\n";
  out += "# row unit layer code mean";
  for (double t : report.taus) out += " " + percentile_label(t);
  out += " mean_se\n";
  for (std::size_t i = 0; i < report.rows.size(); ++i) {
    const auto& r = report.rows[i];
    out += std::to_string(i) + " " + std::to_string(r.condition->unit) + " " + std::to_string(r.condition->layer) + " " +
           r.code + " " + format_number(raw ? r.conditioned.mean : r.mean_rel);
    for (std::size_t k = 0; k < report.taus.size(); ++k) {
      out += " " + format_number(raw ? r.conditioned.percentiles[k] : r.percentile_rel[k]);
    }
    out += " " + format_number(raw ? r.conditioned.mean_se : r.mean_rel_se) + "\n";
  }
  return out;
}

std::string heatmap_plot_data(const BlockHeatmap& map) {
  std::string out = "# metric " + map.metric + "\n# " + map.axis1_name + " " + map.axis2_name + " mean stderr\n";
  std::optional<int> current;
  bool first = true;
  for (const auto& c : map.cells) {
    if (first || c.resolution != current) {
      if (!first) out += "\n\n";
      out += "# resolution " + resolution_label(c.resolution) + "\n";
      current = c.resolution;
      first = false;
    }
    out += format_number(c.axis1) + " " + format_number(c.axis2) + " " + format_number(c.mean) + " " +
           format_number(c.stderr_of_mean) + "\n";
  }
  return out;
}

std::string frontier_csv(const ParetoFront& front, const DesignSpace& space) {
  std::vector<std::string> header{"id", "generation"};
  for (const auto& o : front.objectives) header.push_back(o);
  header.insert(header.end(), {"parent", "mutation", "record"});
  std::string out = csv_row(header);
  for (const auto& m : front.members) {
    std::vector<std::string> f{std::to_string(m.id), std::to_string(m.generation)};
    for (double v : m.metrics) f.push_back(format_number(v));
    f.push_back(m.parent ? std::to_string(*m.parent) : "");
    f.push_back(m.mutation);
    f.push_back(serialize(m.arch, space));
    out += csv_row(f);
  }
  return out;
}

Json frontier_json(const ParetoFront& front, const DesignSpace& space) {
  Json j;
  Json objectives = Json::array();
  for (std::size_t i = 0; i < front.directions.size(); ++i) {
    objectives.push_back({{"name", i < front.objectives.size() ? front.objectives[i] : ""},
                          {"direction", std::string(to_string(front.directions[i]))}});
  }
  j["objectives"] = std::move(objectives);
  Json members = Json::array();
  for (const auto& m : front.members) {
    Json e;
    e["id"] = m.id;
    e["generation"] = m.generation;
    e["metrics"] = m.metrics;
    e["parent"] = m.parent ? Json(*m.parent) : Json(nullptr);
    e["mutation"] = m.mutation;
    e["record"] = to_record(m.arch, space);
    members.push_back(std::move(e));
  }
  j["members"] = std::move(members);
  return j;
}

std::string history_csv(const SearchResult& result, const std::vector<std::string>& objectives) {
  std::vector<std::string> header{"generation", "evaluations"};
  for (const auto& o : objectives) header.push_back("best_" + o);
  for (const auto& o : objectives) header.push_back("median_" + o);
  std::string out = csv_row(header);
  for (const auto& g : result.history) {
    std::vector<std::string> f{std::to_string(g.generation), std::to_string(g.evaluations)};
    for (double v : g.best) f.push_back(format_number(v));
    for (double v : g.median) f.push_back(format_number(v));
    out += csv_row(f);
  }
  return out;
}

std::string comparison_csv(const FrontierComparison& cmp) {
  std::string out = csv_row({"budget", "best_a", "best_b", "outcome"});
  for (std::size_t i = 0; i < cmp.budgets.size(); ++i) {
    const char* outcome = cmp.outcomes[i] == GridOutcome::AWins ? "a" : cmp.outcomes[i] == GridOutcome::BWins ? "b" : "tie";
    out += csv_row({format_number(cmp.budgets[i]), opt_number(cmp.best_a[i]), opt_number(cmp.best_b[i]), outcome});
  }
  return out;
}

std::string space_fingerprint(const DesignSpace& space) { return sha256_hex(space_to_json(space).dump()); }

RunManifest::RunManifest(std::string command_line, std::uint64_t seed)
    : command_line_(std::move(command_line)), seed_(seed), started_at_(utc_now()) {}

void RunManifest::set_space(const DesignSpace& space) {
  spaces_.push_back({{"name", space.name}, {"base", space.base}, {"fingerprint", space_fingerprint(space)}});
}

void RunManifest::add_evaluator(const MetricEvaluator& evaluator) {
  evaluators_.push_back({{"name", evaluator.name()},
                         {"direction", std::string(to_string(evaluator.direction()))},
                         {"units", evaluator.units()},
                         {"parameters_sha256", sha256_hex(evaluator.parameter_text())}});
}

void RunManifest::set_config(Json config) { config_ = std::move(config); }

void RunManifest::set_value(const std::string& key, Json value) { extra_[key] = std::move(value); }

std::filesystem::path RunManifest::write_output(const std::filesystem::path& path, std::string_view content) {
  outputs_.emplace_back(path.string(), write_text_file(path, content));
  return path;
}

Json RunManifest::to_json() const {
  Json j;
  j["tool"] = "blockprof";
  j["version"] = std::string(defaults::kVersion);
  j["command_line"] = command_line_;
  j["seed"] = seed_;
  j["spaces"] = spaces_;
  j["evaluators"] = evaluators_;
  j["config"] = config_;
  for (const auto& [k, v] : extra_.items()) j[k] = v;
  j["started_at"] = started_at_;
  j["finished_at"] = utc_now();
  Json outputs = Json::array();
  for (const auto& [path, sha] : outputs_) outputs.push_back({{"path", path}, {"sha256", sha}});
  j["outputs"] = std::move(outputs);
  return j;
}

std::filesystem::path RunManifest::write(const std::filesystem::path& path) {
  write_text_file(path, to_json().dump(2) + "\n");
  return path;
}

}  // namespace blockprof
