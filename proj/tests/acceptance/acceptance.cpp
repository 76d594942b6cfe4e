// Acceptance run: one PASS/FAIL line per criterion, nonzero exit on any failure.

#include <chrono>
#include <cmath>
#include <filesystem>
#include <fstream>
#include <functional>
#include <iostream>
#include <map>
#include <set>
#include <sstream>

#include "blockprof/cli.hpp"
#include "blockprof/cost_models.hpp"
#include "blockprof/counting.hpp"
#include "blockprof/evaluators.hpp"
#include "blockprof/evo_search.hpp"
#include "blockprof/pareto.hpp"
#include "blockprof/profiler.hpp"
#include "blockprof/reduction.hpp"
#include "fixtures.hpp"
#include "oracles.hpp"

using namespace blockprof;
namespace fs = std::filesystem;

namespace {

struct Outcome {
  bool pass = false;
  std::string detail;
};

std::string fmt(double v) {
  std::ostringstream os;
  os.precision(4);
  os << v;
  return os.str();
}

std::string line_value(const std::string& text, const std::string& key) {
  const auto at = text.find(key + ": ");
  if (at == std::string::npos) return {};
  const auto start = at + key.size() + 2;
  return text.substr(start, text.find('\n', start) - start);
}

std::string strip_commas(std::string s) {
  s.erase(std::remove(s.begin(), s.end(), ','), s.end());
  return s;
}

std::string slurp(const fs::path& p) {
  std::ifstream in(p, std::ios::binary);
  std::stringstream ss;
  ss << in.rdbuf();
  return ss.str();
}

int cli(const std::vector<std::string>& args, std::string* out = nullptr) {
  std::ostringstream o, e;
  const int code = run_cli(args, o, e);
  if (out) *out = o.str();
  return code;
}

// --- 1 -----------------------------------------------------------------------

Outcome counting() {
  std::string out;
  if (cli({"spaces", "count", "--space", "ofa"}, &out) != 0) return {false, "command failed"};
  const auto placements = line_value(out, "placements");
  const auto archs = strip_commas(line_value(out, "architectures"));
  const auto expected = oracle::architecture_count(load_space("ofa"));
  const bool ok = placements == "180" && archs == expected && archs.size() == 20;
  return {ok, "placements " + placements + ", architectures " + archs + " (oracle " + expected + ", " +
                  std::to_string(archs.size()) + " digits)"};
}

// --- 2 -----------------------------------------------------------------------

Outcome profiler_oracle() {
  const auto s = fixtures::mini_space();
  constexpr std::size_t kN = 50000;
  int checks = 0;
  int within = 0;
  for (const std::string metric : {"macs", "acc"}) {
    const auto m = make_evaluator(metric, s);
    const double base = oracle::expectation(oracle::enumerate(s), *m);
    const auto report = placement_sweep(s, *m, kN, 2024, {5, 95});
    for (const auto& row : report.rows) {
      const double cond = oracle::expectation(oracle::enumerate(s, row.condition), *m);
      checks += 2;
      within += std::abs(row.conditioned.mean - cond) <= 3 * row.conditioned.mean_se;
      within += std::abs(row.mean_rel - (cond - base)) <= 3 * row.mean_rel_se;
    }
    for (const auto& code : profile_block_codes(s)) {
      const auto bm = estimate_block_mean(s, code, *m, kN, 2025);
      double exact = 0.0;
      for (const auto& p : bm.placements) exact += oracle::expectation(oracle::enumerate(s, p), *m);
      exact /= static_cast<double>(bm.placements.size());
      ++checks;
      within += std::abs(bm.mean - exact) <= 3 * bm.stderr_of_mean;
    }
  }
  const double frac = static_cast<double>(within) / checks;
  return {frac >= 0.95, std::to_string(within) + "/" + std::to_string(checks) + " estimates within 3 SE at N = 50000"};
}

// --- 3 -----------------------------------------------------------------------

Outcome kernel_identity() {
  const auto s = load_space("ofa");
  const auto k7 = make_evaluator("kernel7", s);
  bool ok = true;
  std::string detail;
  for (const std::string e : {"3", "4", "6"}) {
    const auto b7 = estimate_block_mean(s, "MBConv" + e + "-7", *k7, 4000, 7);
    const auto b3 = estimate_block_mean(s, "MBConv" + e + "-3", *k7, 4000, 7);
    const double diff = b7.mean - b3.mean;
    const double se = std::hypot(b7.stderr_of_mean, b3.stderr_of_mean);
    ok &= std::abs(diff - 1.0) <= 3 * se;
    detail += "e" + e + ": " + fmt(diff) + " (se " + fmt(se) + ") ";
  }
  return {ok, detail};
}

// --- 4 -----------------------------------------------------------------------

Outcome self_baseline() {
  const std::vector<double> taus{5, 50, 95};
  bool ok = true;
  std::string detail;
  for (const auto& [space, metric] : std::vector<std::pair<std::string, std::string>>{{"ofa", "macs"}, {"ofa", "npu"}}) {
    const auto s = load_space(space);
    const auto m = make_evaluator(metric, s);
    const auto r = estimate_placement_stats(s, std::nullopt, *m, 50000, 99, taus);
    int good = std::abs(r.mean_rel) <= 3 * r.mean_rel_se;
    for (std::size_t i = 0; i < taus.size(); ++i) good += std::abs(r.percentile_rel[i]) <= 3 * r.percentile_rel_se[i];
    ok &= good == 4;
    detail += metric + ": " + std::to_string(good) + "/4 ";
  }
  return {ok, detail + "statistics within 3 SE of zero"};
}

// --- 5 -----------------------------------------------------------------------

Outcome mac_oracle() {
  int checked = 0;
  int equal = 0;
  for (const auto& name : preset_space_names()) {
    const auto s = load_space(name);
    Rng rng = derive_rng(5, {static_cast<std::uint64_t>(checked)});
    for (int i = 0; i < 100; ++i) {
      const auto a = sample_uniform(s, rng);
      ++checked;
      equal += macs(a, s) == oracle::walk_macs(oracle::unroll(a, s));
    }
  }
  return {equal == checked, std::to_string(equal) + "/" + std::to_string(checked) + " architectures exact"};
}

// --- 6 -----------------------------------------------------------------------

bool has_block(const UnitSpec& u, const std::function<bool(const BlockSpec&)>& pred) {
  return std::any_of(u.blocks.begin(), u.blocks.end(), pred);
}

bool sentence_check(const std::string& name, const DesignSpace& base, const DesignSpace& r) {
  auto kernel = [](int k) { return [k](const BlockSpec& b) { return b.kernel_size == k; }; };
  auto named = [](std::string n) { return [n](const BlockSpec& b) { return b.name == n; }; };
  auto depth_caps = [&](std::vector<int> capped, int cap) {
    for (int u = 1; u <= static_cast<int>(r.unit_count()); ++u) {
      const bool in = std::find(capped.begin(), capped.end(), u) != capped.end();
      if (r.unit(u).depth_max != (in ? cap : base.unit(u).depth_max)) return false;
    }
    return true;
  };
  auto none_of = [&](std::vector<std::string> names) {
    for (const auto& u : r.units) {
      for (const auto& n : names) {
        if (has_block(u, named(n))) return false;
      }
    }
    return true;
  };
  const std::vector<std::string> maxacc{"MBConv3-3", "MBConv3-5", "MBConv3-7", "MBConv4-3"};
  const std::vector<std::string> gpu{"MBConv3-3", "MBConv3-7", "MBConv4-3"};
  if (name == "ofa-npu" || name == "proxylessnas-npu") {
    for (const auto& u : r.units) {
      if (has_block(u, kernel(7)) || u.blocks.size() != 6) return false;
    }
    return depth_caps({}, 0);
  }
  if (name == "ofa-cpu") return depth_caps({1, 2, 3}, 3);
  if (name == "proxylessnas-cpu") return depth_caps({1, 2}, 3);
  if (name == "ofa-gpu") return depth_caps({2, 4, 5}, 3) && none_of(gpu);
  if (name == "proxylessnas-gpu") return depth_caps({1, 2, 3}, 3) && none_of(gpu);
  if (name == "ofa-note10") {
    return depth_caps({1}, 3) && none_of({"MBConv3-7", "MBConv4-7"}) && r.resolutions == std::vector<int>{192, 224};
  }
  if (name == "ofa-maxacc" || name == "proxylessnas-maxacc") {
    for (const auto& u : r.units) {
      if (u.blocks.size() != 5) return false;
    }
    return none_of(maxacc);
  }
  if (name == "resnet50-maxacc") {
    for (int u : {3, 4}) {
      if (r.unit(u).depth_min != base.unit(u).depth_max || r.unit(u).channel_ratios != std::vector<double>{1.0}) {
        return false;
      }
    }
    return r.unit(1) == base.unit(1) && r.unit(2) == base.unit(2);
  }
  return false;
}

Outcome reduction_fidelity() {
  int sentences = 0;
  int invalid = 0;
  std::string failed;
  for (const auto& name : preset_rule_names()) {
    const auto rules = preset(name);
    const auto base = load_space(rules.target);
    const auto reduced = apply(base, rules);
    if (sentence_check(name, base, reduced)) {
      ++sentences;
    } else {
      failed += " " + name;
    }
    Rng rng = derive_rng(6, {static_cast<std::uint64_t>(sentences)});
    for (int i = 0; i < 10000; ++i) invalid += !is_valid(sample_uniform(reduced, rng), base);
  }
  const auto total = preset_rule_names().size();
  return {sentences == static_cast<int>(total) && invalid == 0,
          std::to_string(sentences) + "/" + std::to_string(total) + " presets pass, " + std::to_string(invalid) +
              " invalid of " + std::to_string(10000 * total) + " samples" + (failed.empty() ? "" : "; failed:" + failed)};
}

// --- 7 -----------------------------------------------------------------------

Outcome ea_correctness() {
  // (a) + (c): single-objective runs on the full OFA space.
  const auto ofa = load_space("ofa");
  int monotone = 0;
  int exact_budget = 0;
  for (std::uint64_t seed = 0; seed < 20; ++seed) {
    auto counter = std::make_shared<fixtures::CountingEvaluator>(make_evaluator("acc", ofa));
    SearchConfig c;
    c.generations = 4;
    c.population = 20;
    c.children = 50;
    c.seed = seed;
    c.objectives = {{counter, Direction::Maximize}};
    const auto r = evolve(ofa, c);
    bool up = true;
    for (std::size_t g = 1; g < r.history.size(); ++g) up &= r.history[g].best[0] >= r.history[g - 1].best[0];
    monotone += up;
    exact_budget += counter->calls() == 20u + 4u * 50u;
  }

  // (b): frontier recovery on the enumerable mini space (budget 1440 >= 5 x 288).
  const auto mini = fixtures::mini_space();
  const auto objectives = parse_objectives("acc:max,macs:min", mini);
  std::vector<std::vector<double>> pts;
  for (const auto& w : oracle::enumerate(mini)) {
    pts.push_back({objectives[0].evaluator->evaluate(w.arch), objectives[1].evaluator->evaluate(w.arch)});
  }
  std::set<std::vector<double>> truth;
  for (auto i : oracle::quadratic_front(pts, {true, false})) truth.insert(pts[i]);
  int matches = 0;
  for (std::uint64_t seed = 0; seed < 20; ++seed) {
    auto acc = std::make_shared<fixtures::CountingEvaluator>(objectives[0].evaluator);
    SearchConfig c;
    c.generations = 20;
    c.population = 40;
    c.children = 70;
    c.seed = seed;
    c.objectives = {{acc, Direction::Maximize}, objectives[1]};
    const auto r = evolve(mini, c);
    std::set<std::vector<double>> found;
    for (const auto& m : r.front.members) found.insert(m.metrics);
    matches += found == truth;
    exact_budget += acc->calls() == 40u + 20u * 70u;
  }
  return {monotone == 20 && matches >= 18 && exact_budget == 40,
          "(a) " + std::to_string(monotone) + "/20 monotone, (b) " + std::to_string(matches) +
              "/20 exact frontiers, (c) " + std::to_string(exact_budget) + "/40 exact call counts"};
}

// --- 8 -----------------------------------------------------------------------

Outcome insight_reproduction() {
  const auto ofa = load_space("ofa");
  const auto npu_rules = preset("ofa-npu");
  const auto npu_space = apply(ofa, npu_rules);
  int low_wins = 0;
  std::string fractions;
  for (std::uint64_t seed = 0; seed < 5; ++seed) {
    SearchConfig c;  // defaults: G 10, P 100, K 200
    c.seed = seed;
    c.objectives = parse_objectives("acc:max,npu:min", ofa);
    SearchConfig reduced = c;
    reduced.unit_weights = npu_rules.unit_weights;
    const auto a = evolve(npu_space, reduced);
    const auto b = evolve(ofa, c);
    const auto cmp = compare_frontiers(a.front, b.front, 100);
    low_wins += cmp.low_a_win_fraction > 0.0;
    fractions += fmt(cmp.low_a_win_fraction) + " ";
  }

  const auto maxacc = apply(ofa, preset("ofa-maxacc"));
  double sum_reduced = 0.0;
  double sum_base = 0.0;
  for (std::uint64_t seed = 0; seed < 5; ++seed) {
    SearchConfig c;
    c.generations = 4;
    c.population = 20;
    c.children = 50;
    c.seed = seed;
    c.objectives = parse_objectives("acc:max", ofa);
    sum_reduced += evolve(maxacc, c).best->metrics[0];
    sum_base += evolve(ofa, c).best->metrics[0];
  }
  return {low_wins >= 4 && sum_reduced >= sum_base,
          "low-latency wins in " + std::to_string(low_wins) + "/5 seeds (fractions " + fractions +
              "); max-accuracy mean " + fmt(sum_reduced / 5) + " vs base " + fmt(sum_base / 5)};
}

// --- 9 -----------------------------------------------------------------------

std::map<std::string, std::string> data_files(const fs::path& dir) {
  std::map<std::string, std::string> out;
  for (const auto& e : fs::directory_iterator(dir)) {
    const auto name = e.path().filename().string();
    if (name.find(".manifest.json") != std::string::npos) continue;
    out[name] = slurp(e.path());
  }
  return out;
}

Outcome reproducibility() {
  const std::vector<std::vector<std::string>> commands{
      {"profile", "blocks", "--space", "ofa", "--metric", "npu", "--samples", "50", "--plot-data"},
      {"profile", "placements", "--space", "resnet50", "--metric", "macs", "--samples", "30", "--plot-data"},
      {"reduce", "--space", "proxylessnas", "--preset", "proxylessnas-gpu"},
      {"search", "pareto", "--space", "ofa", "--preset", "ofa-npu", "--generations", "3", "--pop", "20", "--children",
       "30", "--compare-base"},
      {"search", "max", "--space", "resnet50", "--preset", "resnet50-maxacc", "--generations", "2", "--pop", "10",
       "--children", "10", "--repeats", "2"},
  };
  fixtures::TempDir first("accept-a");
  fixtures::TempDir second("accept-b");
  for (const auto* dir : {&first, &second}) {
    for (auto args : commands) {
      args.insert(args.begin(), {"--seed", "11", "--workers", dir == &first ? "1" : "2", "--out", dir->str()});
      if (cli(args) != 0) return {false, "command failed: " + args[6]};
    }
  }
  const auto a = data_files(first.path());
  const auto b = data_files(second.path());
  std::size_t same = 0;
  for (const auto& [name, content] : a) {
    auto it = b.find(name);
    same += it != b.end() && it->second == content;
  }
  return {same == a.size() && a.size() == b.size() && !a.empty(),
          std::to_string(same) + "/" + std::to_string(a.size()) + " data files byte-identical across reruns"};
}

}  // namespace

int main() {
  struct Criterion {
    int id;
    std::string name;
    double limit_seconds;
    std::function<Outcome()> run;
  };
  const std::vector<Criterion> criteria{
      {1, "counting", 1, counting},
      {2, "profiler oracle equivalence", 120, profiler_oracle},
      {3, "kernel-count identity", 60, kernel_identity},
      {4, "self-baseline zero", 60, self_baseline},
      {5, "MAC oracle", 10, mac_oracle},
      {6, "reduction fidelity", 60, reduction_fidelity},
      {7, "EA correctness", 300, ea_correctness},
      {8, "directional insight reproduction", 600, insight_reproduction},
      {9, "reproducibility", 600, reproducibility},
  };
  int failures = 0;
  for (const auto& c : criteria) {
    const auto start = std::chrono::steady_clock::now();
    Outcome o;
    try {
      o = c.run();
    } catch (const std::exception& e) {
      o = {false, std::string("exception: ") + e.what()};
    }
    const double secs = std::chrono::duration<double>(std::chrono::steady_clock::now() - start).count();
    const bool pass = o.pass && secs < c.limit_seconds;
    failures += !pass;
    std::cout << (pass ? "PASS" : "FAIL") << " criterion " << c.id << " (" << c.name << "): " << o.detail << " ["
              << fmt(secs) << " s, limit " << c.limit_seconds << " s]" << std::endl;
  }
  return failures == 0 ? 0 : 1;
}
