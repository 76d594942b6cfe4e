#include "blockprof/cli.hpp"

#include <algorithm>
#include <cmath>
#include <filesystem>
#include <optional>

#include <CLI11.hpp>

#include "blockprof/counting.hpp"
#include "blockprof/defaults.hpp"
#include "blockprof/design_space.hpp"
#include "blockprof/errors.hpp"
#include "blockprof/evaluators.hpp"
#include "blockprof/evo_search.hpp"
#include "blockprof/io.hpp"
#include "blockprof/profiler.hpp"
#include "blockprof/reduction.hpp"
#include "blockprof/report.hpp"

namespace blockprof {

namespace fs = std::filesystem;

namespace {

struct Globals {
  std::uint64_t seed = defaults::kSeed;
  int workers = defaults::kWorkers;
  std::string out_dir{defaults::kOutputDir};
};

struct Context {
  Globals globals;
  std::string command_line;
  std::ostream& out;
  std::ostream& err;
};

struct SpaceArgs {
  std::string space;
  std::string preset;
  std::string rules;
};

struct ResolvedSpace {
  DesignSpace base;
  DesignSpace space;  // base with the rule set applied, if any
  std::optional<RuleSet> rules;
};

void add_space_options(CLI::App* sub, SpaceArgs& args) {
  sub->add_option("--space", args.space, "Preset space name or config path")->required();
  auto* preset = sub->add_option("--preset", args.preset, "Reduction rule preset");
  auto* rules = sub->add_option("--rules", args.rules, "Reduction rule file");
  preset->excludes(rules);
}

ResolvedSpace resolve_space(const SpaceArgs& args) {
  ResolvedSpace r{load_space(args.space), {}, std::nullopt};
  r.space = r.base;
  const std::string& source = !args.preset.empty() ? args.preset : args.rules;
  if (!source.empty()) {
    r.rules = !args.preset.empty() ? preset(args.preset) : load_rules(args.rules);
    r.space = apply(r.base, *r.rules);
    if (!r.rules->name.empty()) r.space.name = r.rules->name;
  }
  return r;
}

/// File-name-safe form of a metric or space label.
std::string slug(std::string_view text) {
  std::string out;
  for (char c : text) {
    const bool keep = std::isalnum(static_cast<unsigned char>(c)) || c == '-' || c == '_' || c == '.';
    out += keep ? c : '_';
  }
  return out;
}

std::vector<double> parse_percentiles(const std::string& text) {
  std::vector<double> out;
  for (const auto& item : split_list(text)) {
    std::size_t used = 0;
    double v = 0.0;
    try {
      v = std::stod(item, &used);
    } catch (const std::logic_error&) {
      used = 0;
    }
    if (used != item.size() || item.empty()) throw DomainError("percentile '" + item + "' is not a number");
    check_tau(v);
    out.push_back(v);
  }
  if (out.empty()) throw DomainError("--percentiles needs at least one value");
  return out;
}

void print_paths(Context& ctx, const RunManifest& manifest, const fs::path& manifest_path) {
  for (const auto& [path, sha] : manifest.outputs()) ctx.out << path << "\n";
  ctx.out << manifest_path.string() << "\n";
}

// --- spaces ----------------------------------------------------------------

int cmd_spaces_list(Context& ctx) {
  for (const auto& name : preset_space_names()) ctx.out << name << "\n";
  return 0;
}

int cmd_spaces_count(Context& ctx, const SpaceArgs& args, bool include_resolutions) {
  const auto r = resolve_space(args);
  ctx.out << "space: " << r.space.name << "\n";
  ctx.out << "architectures: " << group_digits(count_architectures(r.space, include_resolutions)) << "\n";
  ctx.out << "placements: " << count_placements(r.space) << "\n";
  ctx.out << "resolutions: " << r.space.resolutions.size()
          << (include_resolutions ? " (included in the architecture count)" : " (not included)") << "\n";
  return 0;
}

int cmd_spaces_show(Context& ctx, const SpaceArgs& args) {
  ctx.out << space_to_json(resolve_space(args).space).dump(2) << "\n";
  return 0;
}

// --- profile ---------------------------------------------------------------

struct ProfileArgs {
  SpaceArgs space;
  std::string metric = "macs";
  std::size_t samples = 0;
  std::size_t baseline_samples = 0;
  std::string percentiles = "5,95";
  std::optional<int> resolution;
  bool raw = false;
  bool plot_data = false;
};

int cmd_profile_blocks(Context& ctx, const ProfileArgs& args) {
  const auto r = resolve_space(args.space);
  const auto evaluator = make_evaluator(args.metric, r.space);
  const std::size_t n = args.samples ? args.samples : defaults::kBlockSamples;
  RunManifest manifest(ctx.command_line, ctx.globals.seed);
  manifest.set_space(r.space);
  manifest.add_evaluator(*evaluator);
  manifest.set_config({{"command", "profile blocks"},
                       {"samples_per_placement", n},
                       {"resolution", args.resolution ? Json(*args.resolution) : Json(nullptr)}});

  ctx.err << "profiling " << profile_block_codes(r.space).size() << " blocks of " << r.space.name << " on "
          << evaluator->name() << " with " << n << " samples per placement\n";
  const auto map =
      block_heatmap(r.space, *evaluator, n, ctx.globals.seed, ProfileOptions{ctx.globals.workers, args.resolution});

  const fs::path dir(ctx.globals.out_dir);
  const std::string stem = "blocks-" + slug(r.space.name) + "-" + slug(evaluator->name());
  manifest.write_output(dir / (stem + ".csv"), heatmap_csv(map));
  if (args.plot_data) manifest.write_output(dir / (stem + ".dat"), heatmap_plot_data(map));
  print_paths(ctx, manifest, manifest.write(dir / (stem + ".manifest.json")));
  return 0;
}

int cmd_profile_placements(Context& ctx, const ProfileArgs& args) {
  const auto taus = parse_percentiles(args.percentiles);
  const auto r = resolve_space(args.space);
  const auto evaluator = make_evaluator(args.metric, r.space);
  const std::size_t n = args.samples ? args.samples : defaults::kPlacementSamples;
  const std::size_t baseline_n = args.baseline_samples ? args.baseline_samples : n;
  RunManifest manifest(ctx.command_line, ctx.globals.seed);
  manifest.set_space(r.space);
  manifest.add_evaluator(*evaluator);
  manifest.set_config({{"command", "profile placements"},
                       {"samples_per_placement", n},
                       {"baseline_samples", baseline_n},
                       {"percentiles", taus},
                       {"raw", args.raw},
                       {"resolution", args.resolution ? Json(*args.resolution) : Json(nullptr)}});

  ctx.err << "sweeping " << count_placements(r.space) << " placements of " << r.space.name << " on "
          << evaluator->name() << " with " << n << " samples each\n";
  const auto report = placement_sweep(r.space, *evaluator, n, ctx.globals.seed, taus,
                                      ProfileOptions{ctx.globals.workers, args.resolution}, baseline_n);

  const fs::path dir(ctx.globals.out_dir);
  const std::string stem = "placements-" + slug(r.space.name) + "-" + slug(evaluator->name());
  manifest.write_output(dir / (stem + ".csv"), sweep_csv(report, r.space, args.raw));
  manifest.write_output(dir / (stem + ".boundaries.csv"), boundaries_csv(report));
  if (args.plot_data) manifest.write_output(dir / (stem + ".dat"), sweep_plot_data(report, args.raw));
  print_paths(ctx, manifest, manifest.write(dir / (stem + ".manifest.json")));
  return 0;
}

// --- reduce ----------------------------------------------------------------

int cmd_reduce(Context& ctx, const SpaceArgs& args, const std::string& emit) {
  if (args.preset.empty() && args.rules.empty()) throw DomainError("reduce needs --preset or --rules");
  const DesignSpace base = load_space(args.space);
  const RuleSet rules = !args.preset.empty() ? preset(args.preset) : load_rules(args.rules);
  auto result = apply_rules(base, rules);
  if (!rules.name.empty()) result.space.name = rules.name;

  const auto before = count_architectures(base);
  const auto after = count_architectures(result.space);
  ctx.out << "rules: " << (rules.name.empty() ? "(unnamed)" : rules.name) << "\n";
  for (std::size_t i = 0; i < rules.rules.size(); ++i) {
    ctx.out << "rule " << (i + 1) << ": " << rules.rules[i].describe()
            << (result.rule_changed[i] ? " (changed)" : " (no effect)") << "\n";
  }
  ctx.out << "original_architectures: " << group_digits(before) << "\n";
  ctx.out << "reduced_architectures: " << group_digits(after) << "\n";
  ctx.out << "original_placements: " << count_placements(base) << "\n";
  ctx.out << "reduced_placements: " << count_placements(result.space) << "\n";
  ctx.out << "architectures_equal: " << (before == after ? "yes" : "no") << "\n";

  RunManifest manifest(ctx.command_line, ctx.globals.seed);
  manifest.set_space(base);
  manifest.set_space(result.space);
  manifest.set_config({{"command", "reduce"}, {"rules", Json::parse(rules_to_text(rules))}});
  const fs::path target =
      emit.empty() ? fs::path(ctx.globals.out_dir) / (slug(result.space.name) + ".space.json") : fs::path(emit);
  manifest.write_output(target, space_to_json(result.space).dump(2) + "\n");
  ctx.out << "config: " << target.string() << "\n";
  manifest.write(fs::path(target).replace_extension(".manifest.json"));
  return 0;
}

// --- search ----------------------------------------------------------------

struct SearchArgs {
  SpaceArgs space;
  std::string objectives;
  int generations = defaults::kGenerations;
  int population = defaults::kPopulation;
  int children = defaults::kChildren;
  int repeats = defaults::kRepeats;
  std::string fitness = "dominance";
  bool no_dedupe = false;
  bool cache = false;
  bool uniform_units = false;
  bool compare_base = false;
  std::size_t grid = defaults::kFrontierGrid;
};

SearchConfig make_config(const Context& ctx, const SearchArgs& args, const DesignSpace& space,
                         const std::optional<RuleSet>& rules, std::string_view default_objectives) {
  SearchConfig config;
  config.generations = args.generations;
  config.population = args.population;
  config.children = args.children;
  config.objectives = parse_objectives(args.objectives.empty() ? default_objectives : args.objectives, space);
  config.seed = ctx.globals.seed;
  if (rules && !args.uniform_units) config.unit_weights = rules->unit_weights;
  config.dedupe = !args.no_dedupe;
  config.fitness = parse_fitness(args.fitness);
  config.cache = args.cache;
  config.workers = ctx.globals.workers;
  check_config(config, space);
  return config;
}

Json config_json(const SearchConfig& c, int repeats) {
  Json objectives = Json::array();
  for (const auto& o : c.objectives) {
    objectives.push_back({{"name", o.evaluator->name()}, {"direction", std::string(to_string(o.direction))}});
  }
  return {{"generations", c.generations}, {"population", c.population}, {"children", c.children},
          {"objectives", objectives},     {"unit_weights", c.unit_weights}, {"dedupe", c.dedupe},
          {"fitness", std::string(to_string(c.fitness))}, {"cache", c.cache}, {"repeats", repeats},
          {"budget", c.population + c.generations * c.children}};
}

std::vector<std::string> objective_names(const SearchConfig& c) {
  std::vector<std::string> out;
  for (const auto& o : c.objectives) out.push_back(o.evaluator->name());
  return out;
}

std::uint64_t repeat_seed(std::uint64_t seed, int r) { return seed + static_cast<std::uint64_t>(r); }

int cmd_search_pareto(Context& ctx, const SearchArgs& args) {
  const auto r = resolve_space(args.space);
  if (args.compare_base && !r.rules) throw DomainError("--compare-base needs --preset or --rules");
  if (args.repeats < 1) throw DomainError("repeats must be at least 1");
  auto config = make_config(ctx, args, r.space, r.rules, defaults::kParetoObjectives);
  if (config.objectives.size() < 2) throw DomainError("pareto search needs at least two objectives");
  std::optional<SearchConfig> base_config;
  if (args.compare_base) base_config = make_config(ctx, SearchArgs{args}, r.base, std::nullopt, defaults::kParetoObjectives);

  RunManifest manifest(ctx.command_line, ctx.globals.seed);
  manifest.set_space(r.space);
  if (base_config) manifest.set_space(r.base);
  for (const auto& o : config.objectives) manifest.add_evaluator(*o.evaluator);
  manifest.set_config(config_json(config, args.repeats));

  const fs::path dir(ctx.globals.out_dir);
  const auto names = objective_names(config);
  Json runs = Json::array();
  std::size_t positive_low = 0;
  for (int rep = 0; rep < args.repeats; ++rep) {
    config.seed = repeat_seed(ctx.globals.seed, rep);
    const auto result = evolve(r.space, config);
    ctx.err << "seed " << config.seed << ": " << result.evaluations << " evaluations, frontier of "
            << result.front.members.size() << "\n";
    const std::string stem = "pareto-" + slug(r.space.name) + "-s" + std::to_string(config.seed);
    manifest.write_output(dir / (stem + ".frontier.csv"), frontier_csv(result.front, r.space));
    manifest.write_output(dir / (stem + ".frontier.json"), frontier_json(result.front, r.space).dump(2) + "\n");
    manifest.write_output(dir / (stem + ".history.csv"), history_csv(result, names));
    Json run{{"seed", config.seed}, {"evaluations", result.evaluations}, {"frontier_size", result.front.members.size()}};
    if (base_config) {
      base_config->seed = config.seed;
      const auto base = evolve(r.base, *base_config);
      const auto cmp = compare_frontiers(result.front, base.front, args.grid);
      const std::string bstem = "pareto-" + slug(r.base.name) + "-s" + std::to_string(config.seed);
      manifest.write_output(dir / (bstem + ".frontier.csv"), frontier_csv(base.front, r.base));
      manifest.write_output(dir / (bstem + ".frontier.json"), frontier_json(base.front, r.base).dump(2) + "\n");
      manifest.write_output(dir / (bstem + ".history.csv"), history_csv(base, names));
      manifest.write_output(dir / (stem + ".compare.csv"), comparison_csv(cmp));
      ctx.err << "seed " << config.seed << ": reduced wins " << format_number(cmp.a_win_fraction) << " of the grid, "
              << format_number(cmp.low_a_win_fraction) << " of the low-budget half\n";
      if (cmp.low_a_win_fraction > 0.0) ++positive_low;
      run["comparison"] = {{"a_win_fraction", cmp.a_win_fraction},
                           {"b_win_fraction", cmp.b_win_fraction},
                           {"tie_fraction", cmp.tie_fraction},
                           {"low_a_win_fraction", cmp.low_a_win_fraction},
                           {"low_b_win_fraction", cmp.low_b_win_fraction}};
    }
    runs.push_back(std::move(run));
  }
  manifest.set_value("runs", runs);
  if (base_config) {
    manifest.set_value("seeds_with_low_budget_wins", positive_low);
  }
  print_paths(ctx, manifest, manifest.write(dir / ("pareto-" + slug(r.space.name) + ".manifest.json")));
  return 0;
}

struct RepeatSummary {
  std::vector<double> best;
  double mean = 0.0;
  double stdev = 0.0;
};

RepeatSummary summarize_best(std::vector<double> best) {
  RepeatSummary s;
  s.best = std::move(best);
  const auto ms = mean_stats(s.best);
  s.mean = ms.mean;
  s.stdev = ms.stderr_of_mean * std::sqrt(static_cast<double>(ms.n));
  return s;
}

int cmd_search_max(Context& ctx, const SearchArgs& args) {
  const auto r = resolve_space(args.space);
  if (args.repeats < 1) throw DomainError("repeats must be at least 1");
  if (args.compare_base && !r.rules) throw DomainError("--compare-base needs --preset or --rules");
  auto config = make_config(ctx, args, r.space, r.rules, defaults::kMaxObjectives);
  if (config.objectives.size() != 1) throw DomainError("max search takes exactly one objective");
  RunManifest manifest(ctx.command_line, ctx.globals.seed);
  manifest.set_space(r.space);
  manifest.add_evaluator(*config.objectives[0].evaluator);
  manifest.set_config(config_json(config, args.repeats));

  const fs::path dir(ctx.globals.out_dir);
  const auto metric = config.objectives[0].evaluator->name();
  auto run_all = [&](const DesignSpace& space, SearchConfig c, const std::string& label) {
    std::string csv = csv_row({"seed", "best_" + metric, "evaluations", "record"});
    std::vector<double> best;
    for (int rep = 0; rep < args.repeats; ++rep) {
      c.seed = repeat_seed(ctx.globals.seed, rep);
      const auto result = evolve(space, c);
      best.push_back(result.best->metrics[0]);
      csv += csv_row({std::to_string(c.seed), format_number(result.best->metrics[0]), std::to_string(result.evaluations),
                      serialize(result.best->arch, space)});
      manifest.write_output(dir / ("max-" + slug(label) + "-s" + std::to_string(c.seed) + ".history.csv"),
                            history_csv(result, {metric}));
    }
    manifest.write_output(dir / ("max-" + slug(label) + ".csv"), csv);
    const auto s = summarize_best(std::move(best));
    ctx.out << label << ": " << metric << " " << format_number(s.mean) << " +- " << format_number(s.stdev) << " over "
            << args.repeats << " seeds\n";
    return s;
  };
  const auto reduced = run_all(r.space, config, r.space.name);
  Json summary{{"mean", reduced.mean}, {"stdev", reduced.stdev}, {"best", reduced.best}};
  if (args.compare_base) {
    const auto base_config = make_config(ctx, args, r.base, std::nullopt, defaults::kMaxObjectives);
    const auto base = run_all(r.base, base_config, r.base.name);
    summary["base"] = {{"mean", base.mean}, {"stdev", base.stdev}, {"best", base.best}};
  }
  manifest.set_value("summary", summary);
  const auto manifest_path = manifest.write(dir / ("max-" + slug(r.space.name) + ".manifest.json"));
  for (const auto& [path, sha] : manifest.outputs()) ctx.err << "wrote " << path << "\n";
  ctx.out << manifest_path.string() << "\n";
  return 0;
}

ParetoFront read_frontier(const std::string& path) {
  const Json j = Json::parse(read_text_file(path), nullptr, false);
  if (j.is_discarded() || !j.contains("objectives") || !j.contains("members")) {
    throw ParseError(path + ": not a frontier file");
  }
  ParetoFront front;
  try {
    for (const auto& o : j.at("objectives")) {
      front.objectives.push_back(o.at("name").get<std::string>());
      front.directions.push_back(parse_direction(o.at("direction").get<std::string>()));
    }
    for (const auto& m : j.at("members")) {
      EvaluatedArch e;
      e.id = m.at("id").get<std::size_t>();
      e.metrics = m.at("metrics").get<std::vector<double>>();
      front.members.push_back(std::move(e));
    }
  } catch (const nlohmann::json::exception& e) {
    throw ParseError(path + ": " + e.what());
  }
  return front;
}

int cmd_search_compare(Context& ctx, const std::string& a, const std::string& b, std::size_t grid) {
  const auto cmp = compare_frontiers(read_frontier(a), read_frontier(b), grid);
  ctx.out << comparison_csv(cmp);
  ctx.err << "a wins " << format_number(cmp.a_win_fraction) << ", b wins " << format_number(cmp.b_win_fraction)
          << ", ties " << format_number(cmp.tie_fraction) << "; low-budget half: a "
          << format_number(cmp.low_a_win_fraction) << ", b " << format_number(cmp.low_b_win_fraction) << "\n";
  return 0;
}

std::string join_command_line(const std::vector<std::string>& args) {
  std::string out = "blockprof";
  for (const auto& a : args) {
    out += ' ';
    out += a.find_first_of(" \t\"'") == std::string::npos ? a : csv_field(a);
  }
  return out;
}

}  // namespace

int run_cli(const std::vector<std::string>& args, std::ostream& out, std::ostream& err) {
  Context ctx{{}, join_command_line(args), out, err};
  CLI::App app{"Statistical profiling of neural blocks in NAS design spaces"};
  app.name("blockprof");
  app.fallthrough();
  app.require_subcommand(1);
  app.set_version_flag("--version", std::string(defaults::kVersion));
  app.add_option("--seed", ctx.globals.seed, "Master seed");
  app.add_option("--workers", ctx.globals.workers, "Worker threads")->envname(defaults::kWorkersEnv);
  app.add_option("--out", ctx.globals.out_dir, "Output directory")->envname(defaults::kOutputEnv);

  std::function<int()> action;

  auto* spaces = app.add_subcommand("spaces", "List, count or show design spaces");
  spaces->require_subcommand(1);
  spaces->add_subcommand("list", "List preset spaces")->callback([&] { action = [&] { return cmd_spaces_list(ctx); }; });
  SpaceArgs count_args;
  bool include_resolutions = false;
  auto* count = spaces->add_subcommand("count", "Exact architecture and placement counts");
  add_space_options(count, count_args);
  count->add_flag("--include-resolutions", include_resolutions, "Multiply by the number of input resolutions");
  count->callback([&] { action = [&] { return cmd_spaces_count(ctx, count_args, include_resolutions); }; });
  SpaceArgs show_args;
  auto* show = spaces->add_subcommand("show", "Print a space config");
  add_space_options(show, show_args);
  show->callback([&] { action = [&] { return cmd_spaces_show(ctx, show_args); }; });

  auto* profile = app.add_subcommand("profile", "Monte Carlo block profiling");
  profile->require_subcommand(1);
  ProfileArgs blocks_args;
  auto* blocks = profile->add_subcommand("blocks", "Block-wise average metric of every block");
  add_space_options(blocks, blocks_args.space);
  blocks->add_option("--metric", blocks_args.metric, "Metric name")->capture_default_str();
  blocks->add_option("--samples", blocks_args.samples, "Samples per placement (default 1000)");
  blocks->add_option("--resolution", blocks_args.resolution, "Pin the input resolution");
  blocks->add_flag("--plot-data", blocks_args.plot_data, "Also write gnuplot column files");
  blocks->callback([&] { action = [&] { return cmd_profile_blocks(ctx, blocks_args); }; });
  ProfileArgs sweep_args;
  auto* placements = profile->add_subcommand("placements", "Relative statistics of every placement");
  add_space_options(placements, sweep_args.space);
  placements->add_option("--metric", sweep_args.metric, "Metric name")->capture_default_str();
  placements->add_option("--samples", sweep_args.samples, "Samples per placement (default 10000)");
  placements->add_option("--baseline-samples", sweep_args.baseline_samples, "Unconditioned samples (default --samples)");
  placements->add_option("--percentiles", sweep_args.percentiles, "Comma-separated percentiles")->capture_default_str();
  placements->add_option("--resolution", sweep_args.resolution, "Pin the input resolution");
  placements->add_flag("--raw", sweep_args.raw, "Write conditioned values instead of differences");
  placements->add_flag("--plot-data", sweep_args.plot_data, "Also write gnuplot column files");
  placements->callback([&] { action = [&] { return cmd_profile_placements(ctx, sweep_args); }; });

  SpaceArgs reduce_args;
  std::string emit;
  auto* reduce = app.add_subcommand("reduce", "Apply reduction rules and report the count change");
  add_space_options(reduce, reduce_args);
  reduce->add_option("--emit", emit, "Where to write the reduced config");
  reduce->callback([&] { action = [&] { return cmd_reduce(ctx, reduce_args, emit); }; });

  auto* search = app.add_subcommand("search", "Evolutionary search");
  search->require_subcommand(1);
  auto add_search_options = [&](CLI::App* sub, SearchArgs& a) {
    add_space_options(sub, a.space);
    sub->add_option("--objectives", a.objectives, "name:max|min,...");
    sub->add_option("--generations", a.generations, "Generations G")->capture_default_str();
    sub->add_option("--pop", a.population, "Population P")->capture_default_str();
    sub->add_option("--children", a.children, "Children per generation K")->capture_default_str();
    sub->add_option("--repeats", a.repeats, "Runs with seeds seed, seed+1, ...")->capture_default_str();
    sub->add_option("--fitness", a.fitness, "dominance or rank-sum")->capture_default_str();
    sub->add_flag("--no-dedupe", a.no_dedupe, "Allow duplicate children");
    sub->add_flag("--cache", a.cache, "Cache evaluations by record");
    sub->add_flag("--uniform-units", a.uniform_units, "Ignore the rule set's unit weights");
    sub->add_flag("--compare-base", a.compare_base, "Also search the unreduced space with the same budget");
    sub->add_option("--grid", a.grid, "Budget grid points for comparisons")->capture_default_str();
  };
  SearchArgs pareto_args;
  auto* pareto = search->add_subcommand("pareto", "Multi-objective frontier search");
  add_search_options(pareto, pareto_args);
  pareto->callback([&] { action = [&] { return cmd_search_pareto(ctx, pareto_args); }; });
  SearchArgs max_args;
  auto* max = search->add_subcommand("max", "Single-objective search");
  add_search_options(max, max_args);
  max->callback([&] { action = [&] { return cmd_search_max(ctx, max_args); }; });
  std::string front_a;
  std::string front_b;
  std::size_t compare_grid = defaults::kFrontierGrid;
  auto* compare = search->add_subcommand("compare", "Compare two frontier JSON files");
  compare->add_option("a", front_a, "Frontier A")->required();
  compare->add_option("b", front_b, "Frontier B")->required();
  compare->add_option("--grid", compare_grid, "Budget grid points")->capture_default_str();
  compare->callback([&] { action = [&] { return cmd_search_compare(ctx, front_a, front_b, compare_grid); }; });

  try {
    std::vector<std::string> reversed(args.rbegin(), args.rend());
    app.parse(reversed);
  } catch (const CLI::ParseError& e) {
    const int code = app.exit(e, out, err);
    return code == 0 ? 0 : 2;
  }
  if (ctx.globals.workers < 1) {
    err << "error: --workers must be at least 1\n";
    return 2;
  }
  try {
    return action ? action() : 2;
  } catch (const Error& e) {
    err << "error: " << e.what() << "\n";
    return 2;
  } catch (const std::exception& e) {
    err << "internal error: " << e.what() << "\n";
    return 1;
  }
}

}  // namespace blockprof
