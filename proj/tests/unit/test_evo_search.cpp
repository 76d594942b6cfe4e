#include <gtest/gtest.h>

#include <map>
#include <set>

#include "blockprof/errors.hpp"
#include "blockprof/evaluators.hpp"
#include "blockprof/evo_search.hpp"
#include "fixtures.hpp"
#include "oracles.hpp"

using namespace blockprof;

namespace {

SearchConfig mini_config(std::uint64_t seed, int p, int g, int k) {
  const auto s = fixtures::mini_space();
  SearchConfig c;
  c.seed = seed;
  c.population = p;
  c.generations = g;
  c.children = k;
  c.objectives = parse_objectives("acc:max,macs:min", s);
  return c;
}

std::set<std::vector<double>> metric_set(const ParetoFront& f) {
  std::set<std::vector<double>> out;
  for (const auto& m : f.members) out.insert(m.metrics);
  return out;
}

std::set<std::vector<double>> exhaustive_front(const DesignSpace& s, const std::vector<Objective>& objectives) {
  std::vector<std::vector<double>> pts;
  for (const auto& w : oracle::enumerate(s)) {
    std::vector<double> v;
    for (const auto& o : objectives) v.push_back(o.evaluator->evaluate(w.arch));
    pts.push_back(v);
  }
  std::vector<bool> maximize;
  for (const auto& o : objectives) maximize.push_back(o.direction == Direction::Maximize);
  std::set<std::vector<double>> out;
  for (auto i : oracle::quadratic_front(pts, maximize)) out.insert(pts[i]);
  return out;
}

}  // namespace

TEST(Mutation, ClosureUnderRepeatedMutation) {
  for (const auto& name : preset_space_names()) {
    const auto s = load_space(name);
    Rng rng = derive_rng(8);
    auto a = sample_uniform(s, rng);
    for (int i = 0; i < 3000; ++i) {
      const auto m = mutate_described(a, s, rng);
      ASSERT_TRUE(is_valid(m.arch, s)) << name << " after " << m.description;
      ASSERT_NE(m.arch, a) << m.description;
      a = m.arch;
    }
  }
}

TEST(Mutation, MinimalDepthNeverRemoves) {
  const auto s = load_space("ofa");
  Rng rng = derive_rng(2);
  Architecture a{"ofa", 224, std::vector<std::vector<BlockId>>(5, std::vector<BlockId>(2, BlockId{0})), {}};
  for (int i = 0; i < 2000; ++i) {
    const auto m = mutate_described(a, s, rng);
    EXPECT_EQ(m.description.find("remove_layer"), std::string::npos);
    for (std::size_t u = 0; u < 5; ++u) ASSERT_GE(m.arch.depth(u), 2);
  }
}

TEST(Mutation, ResolutionOnlySpaceFlipsResolution) {
  const auto s = parse_space_config(fixtures::kResolutionOnlySpace);
  Rng rng = derive_rng(4);
  Architecture a{"flat", 160, {{BlockId{0}}, {BlockId{4}}}, {}};
  for (int i = 0; i < 20; ++i) {
    const auto m = mutate(a, s, rng);
    EXPECT_EQ(m.resolution, 224);
    EXPECT_EQ(m.blocks, a.blocks);
  }
}

TEST(Mutation, FrozenSpaceHasNoMutation) {
  const auto s = parse_space_config(fixtures::kFrozenSpace);
  Rng rng = derive_rng(4);
  EXPECT_THROW(mutate(Architecture{"frozen", 224, {{BlockId{0}}}, {}}, s, rng), DomainError);
}

TEST(Mutation, UnitWeightsSteerTheUnit) {
  const auto s = load_space("ofa");
  Rng rng = derive_rng(6);
  const auto a = sample_uniform(s, rng, 224);
  const std::vector<double> weights{0, 0, 0, 0, 1};
  for (int i = 0; i < 500; ++i) {
    const auto m = mutate(a, s, rng, weights);
    for (std::size_t u = 0; u < 4; ++u) ASSERT_EQ(m.blocks[u], a.blocks[u]);
  }
  EXPECT_THROW(mutate(a, s, rng, {1, 1}), DomainError);
}

TEST(Mutation, ResNetRatioChanges) {
  const auto s = load_space("resnet50");
  Rng rng = derive_rng(12);
  const auto a = sample_uniform(s, rng);
  int ratio_changes = 0;
  for (int i = 0; i < 400; ++i) {
    const auto m = mutate_described(a, s, rng);
    ASSERT_TRUE(is_valid(m.arch, s));
    if (m.description.rfind("change_ratio", 0) == 0) {
      ++ratio_changes;
      EXPECT_NE(m.arch.channel_ratios, a.channel_ratios);
    }
  }
  EXPECT_GT(ratio_changes, 0);
}

TEST(Search, ConfigErrors) {
  const auto s = fixtures::mini_space();
  auto c = mini_config(1, 10, 1, 10);
  c.generations = 0;
  EXPECT_THROW(evolve(s, c), DomainError);
  c = mini_config(1, 10, 1, 10);
  c.objectives.clear();
  EXPECT_THROW(evolve(s, c), DomainError);
  c = mini_config(1, 10, 1, 10);
  c.unit_weights = {1, 2, 3};
  EXPECT_THROW(evolve(s, c), DomainError);
  EXPECT_THROW(parse_objectives("nonsense:max", s), NotFoundError);
  EXPECT_THROW(parse_fitness("vote"), DomainError);
}

TEST(Search, ParseObjectives) {
  const auto s = load_space("ofa");
  const auto o = parse_objectives("acc:max,npu:min,macs", s);
  ASSERT_EQ(o.size(), 3u);
  EXPECT_EQ(o[0].direction, Direction::Maximize);
  EXPECT_EQ(o[1].evaluator->name(), "npu");
  EXPECT_EQ(o[2].direction, Direction::Minimize);
}

TEST(Search, BudgetIsExact) {
  const auto s = load_space("ofa");
  auto counter = std::make_shared<fixtures::CountingEvaluator>(make_evaluator("acc", s));
  SearchConfig c;
  c.population = 20;
  c.generations = 4;
  c.children = 50;
  c.seed = 3;
  c.objectives = {{counter, Direction::Maximize}};
  const auto r = evolve(s, c);
  EXPECT_EQ(counter->calls(), 20u + 4u * 50u);
  EXPECT_EQ(r.evaluations, 220u);
  EXPECT_EQ(r.evaluated.size(), 220u);
  EXPECT_EQ(r.history.size(), 5u);
  EXPECT_EQ(r.history.back().evaluations, 220u);
}

TEST(Search, CacheSkipsRepeats) {
  const auto s = parse_space_config(fixtures::kResolutionOnlySpace);
  auto counter = std::make_shared<fixtures::CountingEvaluator>(make_evaluator("macs", s));
  SearchConfig c;
  c.population = 4;
  c.generations = 3;
  c.children = 4;
  c.cache = true;
  c.objectives = {{counter, Direction::Minimize}};
  const auto r = evolve(s, c);
  EXPECT_EQ(counter->calls(), 2u);  // the space has two members
  EXPECT_EQ(r.evaluations, 2u);
  EXPECT_EQ(r.evaluated.size(), 16u);
}

TEST(Search, ElitismSingleObjective) {
  const auto s = load_space("ofa");
  for (std::uint64_t seed = 0; seed < 5; ++seed) {
    SearchConfig c;
    c.population = 20;
    c.generations = 4;
    c.children = 50;
    c.seed = seed;
    c.objectives = parse_objectives("acc:max", s);
    const auto r = evolve(s, c);
    for (std::size_t g = 1; g < r.history.size(); ++g) ASSERT_GE(r.history[g].best[0], r.history[g - 1].best[0]);
    ASSERT_TRUE(r.best.has_value());
    EXPECT_EQ(r.best->metrics[0], r.history.back().best[0]);
  }
}

TEST(Search, ElitismMultiObjectiveKeepsExtremes) {
  const auto s = load_space("ofa");
  SearchConfig c;
  c.population = 20;
  c.generations = 5;
  c.children = 40;
  c.seed = 9;
  c.objectives = parse_objectives("acc:max,npu:min", s);
  const auto r = evolve(s, c);
  for (std::size_t g = 1; g < r.history.size(); ++g) {
    EXPECT_GE(r.history[g].best[0], r.history[g - 1].best[0]);
    EXPECT_LE(r.history[g].best[1], r.history[g - 1].best[1]);
  }
  EXPECT_FALSE(r.best.has_value());
}

TEST(Search, Deterministic) {
  const auto s = fixtures::mini_space();
  auto c = mini_config(5, 10, 3, 20);
  const auto a = evolve(s, c);
  c.workers = 3;
  const auto b = evolve(s, c);
  ASSERT_EQ(a.evaluated.size(), b.evaluated.size());
  for (std::size_t i = 0; i < a.evaluated.size(); ++i) {
    EXPECT_EQ(a.evaluated[i].arch, b.evaluated[i].arch);
    EXPECT_EQ(a.evaluated[i].mutation, b.evaluated[i].mutation);
  }
  c.seed = 6;
  const auto d = evolve(s, c);
  bool differs = false;
  for (std::size_t i = 0; i < a.evaluated.size(); ++i) differs |= !(a.evaluated[i].arch == d.evaluated[i].arch);
  EXPECT_TRUE(differs);
}

TEST(Search, FrontHasNoDominatedPair) {
  const auto s = fixtures::mini_space();
  const auto r = evolve(s, mini_config(2, 10, 3, 20));
  const std::vector<Direction> dirs{Direction::Maximize, Direction::Minimize};
  for (const auto& x : r.front.members) {
    for (const auto& y : r.front.members) ASSERT_FALSE(dominates(x.metrics, y.metrics, dirs));
  }
  EXPECT_EQ(r.front.objectives, (std::vector<std::string>{"acc", "macs"}));
}

TEST(Search, FindsExhaustiveFrontOnMiniSpace) {
  const auto s = fixtures::mini_space();
  int matches = 0;
  for (std::uint64_t seed = 0; seed < 5; ++seed) {
    const auto c = mini_config(seed, 40, 20, 70);
    const auto r = evolve(s, c);
    if (metric_set(r.front) == exhaustive_front(s, c.objectives)) ++matches;
  }
  EXPECT_GE(matches, 4);
}

TEST(Search, RankSumFitness) {
  const std::vector<std::vector<double>> pts{{1, 1}, {3, 3}, {2, 0}};
  const std::vector<Direction> dirs{Direction::Maximize, Direction::Minimize};
  // ranks on acc (best first): 3->1, 2->2, 1->3; on cost: 0->1, 1->2, 3->3.
  EXPECT_EQ(rank_population(pts, dirs, Fitness::RankSum), (std::vector<std::size_t>{2, 1, 0}));
  EXPECT_EQ(rank_population(pts, dirs, Fitness::Dominance).back(), 0u);
  auto c = mini_config(1, 10, 2, 10);
  c.fitness = Fitness::RankSum;
  EXPECT_NO_THROW(evolve(fixtures::mini_space(), c));
}

TEST(Search, CrowdingDistance) {
  const std::vector<std::vector<double>> pts{{0, 4}, {1, 3}, {3, 1}, {4, 0}};
  const auto d = crowding_distance(pts, {0, 1, 2, 3});
  EXPECT_TRUE(std::isinf(d[0]));
  EXPECT_TRUE(std::isinf(d[3]));
  EXPECT_DOUBLE_EQ(d[1], 0.75 + 0.75);
  EXPECT_DOUBLE_EQ(d[2], 0.75 + 0.75);
}

TEST(Search, EvaluatorFailureCarriesTheRecord) {
  const auto s = fixtures::mini_space();
  auto bad = std::make_shared<FunctionEvaluator>("bad", Direction::Maximize, [](const Architecture& a) {
    if (a.resolution == 176) throw std::runtime_error("boom");
    return 1.0;
  });
  SearchConfig c;
  c.population = 20;
  c.generations = 1;
  c.children = 5;
  c.objectives = {{bad, Direction::Maximize}};
  try {
    evolve(s, c);
    FAIL();
  } catch (const EvaluationError& e) {
    EXPECT_NE(e.record().find("\"resolution\":176"), std::string::npos) << e.record();
    EXPECT_NE(std::string(e.what()).find("boom"), std::string::npos);
  }
  auto nan = std::make_shared<FunctionEvaluator>("nan", Direction::Maximize,
                                                 [](const Architecture&) { return std::nan(""); });
  c.objectives = {{nan, Direction::Maximize}};
  EXPECT_THROW(evolve(s, c), EvaluationError);
}
