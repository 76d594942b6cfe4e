#pragma once

#include <cstddef>
#include <cstdint>
#include <optional>
#include <string>
#include <string_view>
#include <vector>

#include "blockprof/design_space.hpp"
#include "blockprof/metric.hpp"
#include "blockprof/pareto.hpp"

namespace blockprof {

struct Objective {
  EvaluatorPtr evaluator;
  Direction direction = Direction::Maximize;
};

/// Parses "name:max,name:min" (direction defaults to the evaluator's own).
std::vector<Objective> parse_objectives(std::string_view text, const DesignSpace& space);

enum class Fitness { Dominance, RankSum };

std::string_view to_string(Fitness fitness);
Fitness parse_fitness(std::string_view text);

struct SearchConfig {
  int generations = 10;
  int population = 100;
  int children = 200;
  std::vector<Objective> objectives;
  std::uint64_t seed = 0;
  std::vector<double> unit_weights;  // empty = uniform over units
  bool dedupe = true;
  Fitness fitness = Fitness::Dominance;
  bool cache = false;
  int workers = 1;
};

/// Throws DomainError when a count is below 1 or no objective is given.
void check_config(const SearchConfig& config, const DesignSpace& space);

struct Mutation {
  Architecture arch;
  std::string description;
};

/// Picks a unit (uniformly or by `unit_weights`) among those with an
/// applicable action, then one action uniformly: add layer, remove layer,
/// change block, change channel ratio (ResNet), change resolution.
Mutation mutate_described(const Architecture& arch, const DesignSpace& space, Rng& rng,
                          const std::vector<double>& unit_weights = {});
Architecture mutate(const Architecture& arch, const DesignSpace& space, Rng& rng,
                    const std::vector<double>& unit_weights = {});

struct GenerationStats {
  int generation = 0;
  std::vector<double> best;    // per objective, over the retained population
  std::vector<double> median;  // per objective, over the retained population
  std::size_t evaluations = 0;  // cumulative
};

struct SearchResult {
  std::vector<GenerationStats> history;
  std::vector<EvaluatedArch> evaluated;  // every architecture, in evaluation order
  ParetoFront front;                     // over everything evaluated
  std::optional<EvaluatedArch> best;     // single-objective runs only
  std::size_t evaluations = 0;           // evaluator invocations per objective
};

/// Elitist mutation-only search. Generation 0 draws P uniform samples; each
/// generation mutates K uniformly chosen parents and keeps the best P of
/// parents and children.
SearchResult evolve(const DesignSpace& space, const SearchConfig& config);

/// Indices of `points` sorted best first under the configured fitness.
std::vector<std::size_t> rank_population(const std::vector<std::vector<double>>& points,
                                         const std::vector<Direction>& directions, Fitness fitness);

/// NSGA-II crowding distance of each point within one front.
std::vector<double> crowding_distance(const std::vector<std::vector<double>>& points,
                                      const std::vector<std::size_t>& front);

}  // namespace blockprof
