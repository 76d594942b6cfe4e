#include "blockprof/evo_search.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <numeric>
#include <unordered_map>
#include <unordered_set>

#include "blockprof/errors.hpp"
#include "blockprof/evaluators.hpp"
#include "blockprof/io.hpp"
#include "blockprof/parallel.hpp"
#include "blockprof/stats.hpp"

namespace blockprof {

namespace {

constexpr std::uint64_t kSearchStream = 4;
constexpr int kDedupeAttempts = 10;

enum class Action { AddLayer, RemoveLayer, ChangeBlock, ChangeRatio, ChangeResolution };

std::vector<Action> actions_for(const Architecture& arch, const DesignSpace& space, std::size_t u) {
  const auto& unit = space.units[u];
  std::vector<Action> out;
  if (arch.depth(u) < unit.depth_max) out.push_back(Action::AddLayer);
  if (arch.depth(u) > unit.depth_min) out.push_back(Action::RemoveLayer);
  if (unit.blocks.size() > 1 && arch.depth(u) > 0) out.push_back(Action::ChangeBlock);
  if (space.family == BlockFamily::ResNetBottleneck && unit.channel_ratios.size() > 1) out.push_back(Action::ChangeRatio);
  if (space.resolutions.size() > 1) out.push_back(Action::ChangeResolution);
  return out;
}

std::size_t pick_other(Rng& rng, std::size_t count, std::size_t current) {
  // Uniform over [0, count) without `current`.
  const std::size_t k = uniform_index(rng, count - 1);
  return k >= current ? k + 1 : k;
}

std::size_t index_of_block(const UnitSpec& unit, BlockId id) {
  for (std::size_t i = 0; i < unit.blocks.size(); ++i) {
    if (unit.blocks[i].id == id) return i;
  }
  throw DomainError("architecture uses a block that is not a candidate of its unit");
}

double oriented(double v, Direction d) { return d == Direction::Maximize ? -v : v; }

std::vector<Direction> directions_of(const std::vector<Objective>& objectives) {
  std::vector<Direction> out;
  for (const auto& o : objectives) out.push_back(o.direction);
  return out;
}

std::vector<std::vector<std::size_t>> nondominated_fronts(const std::vector<std::vector<double>>& points,
                                                          const std::vector<Direction>& directions) {
  const std::size_t n = points.size();
  std::vector<std::vector<std::size_t>> dominated_by_me(n);
  std::vector<std::size_t> dominators(n, 0);
  std::vector<std::vector<std::size_t>> fronts(1);
  for (std::size_t i = 0; i < n; ++i) {
    for (std::size_t j = i + 1; j < n; ++j) {
      if (dominates(points[i], points[j], directions)) {
        dominated_by_me[i].push_back(j);
        ++dominators[j];
      } else if (dominates(points[j], points[i], directions)) {
        dominated_by_me[j].push_back(i);
        ++dominators[i];
      }
    }
  }
  for (std::size_t i = 0; i < n; ++i) {
    if (dominators[i] == 0) fronts[0].push_back(i);
  }
  while (!fronts.back().empty()) {
    std::vector<std::size_t> next;
    for (std::size_t i : fronts.back()) {
      for (std::size_t j : dominated_by_me[i]) {
        if (--dominators[j] == 0) next.push_back(j);
      }
    }
    std::sort(next.begin(), next.end());
    fronts.push_back(std::move(next));
  }
  fronts.pop_back();
  return fronts;
}

std::vector<double> average_ranks(const std::vector<double>& keys) {
  std::vector<std::size_t> order(keys.size());
  std::iota(order.begin(), order.end(), 0);
  std::stable_sort(order.begin(), order.end(), [&](std::size_t a, std::size_t b) { return keys[a] < keys[b]; });
  std::vector<double> ranks(keys.size());
  for (std::size_t i = 0; i < order.size();) {
    std::size_t j = i;
    while (j + 1 < order.size() && keys[order[j + 1]] == keys[order[i]]) ++j;
    const double r = (static_cast<double>(i) + static_cast<double>(j)) / 2.0 + 1.0;
    for (std::size_t k = i; k <= j; ++k) ranks[order[k]] = r;
    i = j + 1;
  }
  return ranks;
}

}  // namespace

std::vector<Objective> parse_objectives(std::string_view text, const DesignSpace& space) {
  std::vector<Objective> out;
  for (const auto& item : split_list(text)) {
    std::string name = item;
    std::optional<Direction> direction;
    if (auto colon = item.rfind(':'); colon != std::string::npos) {
      const auto suffix = item.substr(colon + 1);
      if (suffix == "max" || suffix == "min" || suffix == "maximize" || suffix == "minimize") {
        direction = parse_direction(suffix);
        name = item.substr(0, colon);
      }
    }
    auto evaluator = make_evaluator(name, space);
    out.push_back({evaluator, direction.value_or(evaluator->direction())});
  }
  if (out.empty()) throw DomainError("at least one objective is required");
  return out;
}

std::string_view to_string(Fitness fitness) { return fitness == Fitness::Dominance ? "dominance" : "rank-sum"; }

Fitness parse_fitness(std::string_view text) {
  if (text == "dominance") return Fitness::Dominance;
  if (text == "rank-sum") return Fitness::RankSum;
  throw DomainError("unknown fitness '" + std::string(text) + "' (expected dominance or rank-sum)");
}

void check_config(const SearchConfig& config, const DesignSpace& space) {
  if (config.generations < 1) throw DomainError("generations must be at least 1");
  if (config.population < 1) throw DomainError("population must be at least 1");
  if (config.children < 1) throw DomainError("children must be at least 1");
  if (config.objectives.empty()) throw DomainError("at least one objective is required");
  for (const auto& o : config.objectives) {
    if (!o.evaluator) throw DomainError("objective without an evaluator");
  }
  if (!config.unit_weights.empty()) {
    if (config.unit_weights.size() != space.unit_count()) {
      throw DomainError("unit_weights has " + std::to_string(config.unit_weights.size()) + " entries but the space has " +
                        std::to_string(space.unit_count()) + " units");
    }
    for (double w : config.unit_weights) {
      if (!(w >= 0.0) || !std::isfinite(w)) throw DomainError("unit weights must be finite and non-negative");
    }
  }
}

Mutation mutate_described(const Architecture& arch, const DesignSpace& space, Rng& rng,
                          const std::vector<double>& unit_weights) {
  if (!unit_weights.empty() && unit_weights.size() != space.unit_count()) {
    throw DomainError("unit_weights must have one entry per unit");
  }
  std::vector<std::size_t> candidates;
  std::vector<double> weights;
  for (std::size_t u = 0; u < space.unit_count(); ++u) {
    if (actions_for(arch, space, u).empty()) continue;
    const double w = unit_weights.empty() ? 1.0 : unit_weights[u];
    if (w <= 0.0) continue;
    candidates.push_back(u);
    weights.push_back(w);
  }
  if (candidates.empty()) throw DomainError("no mutation is applicable to this architecture");

  std::size_t u = 0;
  if (unit_weights.empty()) {
    u = candidates[uniform_index(rng, candidates.size())];
  } else {
    std::discrete_distribution<std::size_t> pick(weights.begin(), weights.end());
    u = candidates[pick(rng)];
  }
  const auto actions = actions_for(arch, space, u);
  const Action action = actions[uniform_index(rng, actions.size())];
  const auto& unit = space.units[u];
  const auto unit_label = "unit " + std::to_string(u + 1);

  Mutation m{arch, {}};
  auto& layers = m.arch.blocks[u];
  switch (action) {
    case Action::AddLayer: {
      const std::size_t pos = uniform_index(rng, layers.size() + 1);
      const auto& block = unit.blocks[uniform_index(rng, unit.blocks.size())];
      layers.insert(layers.begin() + static_cast<std::ptrdiff_t>(pos), block.id);
      m.description = "add_layer " + unit_label + " layer " + std::to_string(pos + 1) + " " + block.code;
      break;
    }
    case Action::RemoveLayer: {
      const std::size_t pos = uniform_index(rng, layers.size());
      layers.erase(layers.begin() + static_cast<std::ptrdiff_t>(pos));
      m.description = "remove_layer " + unit_label + " layer " + std::to_string(pos + 1);
      break;
    }
    case Action::ChangeBlock: {
      const std::size_t pos = uniform_index(rng, layers.size());
      const auto& block = unit.blocks[pick_other(rng, unit.blocks.size(), index_of_block(unit, layers[pos]))];
      layers[pos] = block.id;
      m.description = "change_block " + unit_label + " layer " + std::to_string(pos + 1) + " " + block.code;
      break;
    }
    case Action::ChangeRatio: {
      const auto& ratios = unit.channel_ratios;
      const auto current = std::find(ratios.begin(), ratios.end(), arch.channel_ratios[u]) - ratios.begin();
      const double r = ratios[pick_other(rng, ratios.size(), static_cast<std::size_t>(current))];
      m.arch.channel_ratios[u] = r;
      m.description = "change_ratio " + unit_label + " " + format_number(r);
      break;
    }
    case Action::ChangeResolution: {
      const auto& res = space.resolutions;
      const auto current = std::find(res.begin(), res.end(), arch.resolution) - res.begin();
      m.arch.resolution = res[pick_other(rng, res.size(), static_cast<std::size_t>(current))];
      m.description = "change_resolution " + std::to_string(m.arch.resolution);
      break;
    }
  }
  return m;
}

Architecture mutate(const Architecture& arch, const DesignSpace& space, Rng& rng,
                    const std::vector<double>& unit_weights) {
  return mutate_described(arch, space, rng, unit_weights).arch;
}

std::vector<double> crowding_distance(const std::vector<std::vector<double>>& points,
                                      const std::vector<std::size_t>& front) {
  std::vector<double> dist(front.size(), 0.0);
  if (front.empty()) return dist;
  const std::size_t m = points[front[0]].size();
  std::vector<std::size_t> order(front.size());
  for (std::size_t k = 0; k < m; ++k) {
    std::iota(order.begin(), order.end(), 0);
    std::stable_sort(order.begin(), order.end(),
                     [&](std::size_t a, std::size_t b) { return points[front[a]][k] < points[front[b]][k]; });
    const double lo = points[front[order.front()]][k];
    const double hi = points[front[order.back()]][k];
    dist[order.front()] = std::numeric_limits<double>::infinity();
    dist[order.back()] = std::numeric_limits<double>::infinity();
    if (hi <= lo) continue;
    for (std::size_t i = 1; i + 1 < order.size(); ++i) {
      dist[order[i]] += (points[front[order[i + 1]]][k] - points[front[order[i - 1]]][k]) / (hi - lo);
    }
  }
  return dist;
}

std::vector<std::size_t> rank_population(const std::vector<std::vector<double>>& points,
                                         const std::vector<Direction>& directions, Fitness fitness) {
  std::vector<std::size_t> order(points.size());
  std::iota(order.begin(), order.end(), 0);
  if (directions.size() == 1) {
    std::stable_sort(order.begin(), order.end(), [&](std::size_t a, std::size_t b) {
      return oriented(points[a][0], directions[0]) < oriented(points[b][0], directions[0]);
    });
    return order;
  }
  if (fitness == Fitness::RankSum) {
    std::vector<double> total(points.size(), 0.0);
    for (std::size_t k = 0; k < directions.size(); ++k) {
      std::vector<double> keys;
      for (const auto& p : points) keys.push_back(oriented(p[k], directions[k]));
      const auto ranks = average_ranks(keys);
      for (std::size_t i = 0; i < points.size(); ++i) total[i] += ranks[i];
    }
    std::stable_sort(order.begin(), order.end(), [&](std::size_t a, std::size_t b) { return total[a] < total[b]; });
    return order;
  }
  std::vector<std::size_t> out;
  for (const auto& front : nondominated_fronts(points, directions)) {
    const auto dist = crowding_distance(points, front);
    std::vector<std::size_t> idx(front.size());
    std::iota(idx.begin(), idx.end(), 0);
    std::stable_sort(idx.begin(), idx.end(), [&](std::size_t a, std::size_t b) {
      if (dist[a] != dist[b]) return dist[a] > dist[b];
      return front[a] < front[b];
    });
    for (std::size_t i : idx) out.push_back(front[i]);
  }
  return out;
}

SearchResult evolve(const DesignSpace& space, const SearchConfig& config) {
  check_config(config, space);
  const auto directions = directions_of(config.objectives);
  std::vector<std::string> names;
  for (const auto& o : config.objectives) names.push_back(o.evaluator->name());

  SearchResult result;
  Rng rng = derive_rng(config.seed, {kSearchStream});
  std::unordered_set<std::string> seen;
  std::unordered_map<std::string, std::vector<double>> cache;

  struct Candidate {
    Architecture arch;
    std::string record;
    std::optional<std::size_t> parent;
    std::string mutation;
  };

  auto evaluate_batch = [&](std::vector<Candidate>& batch, int generation) {
    std::vector<std::vector<double>> metrics(batch.size());
    std::vector<std::size_t> pending;
    std::vector<std::pair<std::size_t, std::size_t>> repeats;  // (batch index, first occurrence)
    std::unordered_map<std::string, std::size_t> first_in_batch;
    for (std::size_t i = 0; i < batch.size(); ++i) {
      if (config.cache) {
        if (auto it = cache.find(batch[i].record); it != cache.end()) {
          metrics[i] = it->second;
          continue;
        }
        if (auto [it, fresh] = first_in_batch.emplace(batch[i].record, i); !fresh) {
          repeats.emplace_back(i, it->second);
          continue;
        }
      }
      pending.push_back(i);
    }
    parallel_for(pending.size(), config.workers, [&](std::size_t p) {
      const auto& c = batch[pending[p]];
      std::vector<double> values;
      for (const auto& o : config.objectives) {
        double v = 0.0;
        try {
          v = o.evaluator->evaluate(c.arch);
        } catch (const std::exception& e) {
          throw EvaluationError("evaluating '" + o.evaluator->name() + "' failed: " + e.what(), c.record);
        }
        if (!std::isfinite(v)) {
          throw EvaluationError("evaluator '" + o.evaluator->name() + "' returned a non-finite value", c.record);
        }
        values.push_back(v);
      }
      metrics[pending[p]] = std::move(values);
    });
    for (const auto& [i, first] : repeats) metrics[i] = metrics[first];
    result.evaluations += pending.size();
    std::vector<std::size_t> ids;
    for (std::size_t i = 0; i < batch.size(); ++i) {
      if (config.cache) cache.emplace(batch[i].record, metrics[i]);
      EvaluatedArch e;
      e.id = result.evaluated.size();
      e.arch = std::move(batch[i].arch);
      e.metrics = std::move(metrics[i]);
      e.generation = generation;
      e.parent = batch[i].parent;
      e.mutation = std::move(batch[i].mutation);
      ids.push_back(e.id);
      result.evaluated.push_back(std::move(e));
    }
    return ids;
  };

  auto select = [&](const std::vector<std::size_t>& pool) {
    std::vector<std::vector<double>> points;
    for (std::size_t id : pool) points.push_back(result.evaluated[id].metrics);
    const auto order = rank_population(points, directions, config.fitness);
    std::vector<std::size_t> kept;
    for (std::size_t i = 0; i < order.size() && kept.size() < static_cast<std::size_t>(config.population); ++i) {
      kept.push_back(pool[order[i]]);
    }
    return kept;
  };

  auto record_stats = [&](int generation, const std::vector<std::size_t>& population) {
    GenerationStats s;
    s.generation = generation;
    s.evaluations = result.evaluations;
    for (std::size_t k = 0; k < directions.size(); ++k) {
      std::vector<double> values;
      for (std::size_t id : population) values.push_back(result.evaluated[id].metrics[k]);
      const auto [lo, hi] = std::minmax_element(values.begin(), values.end());
      s.best.push_back(directions[k] == Direction::Maximize ? *hi : *lo);
      s.median.push_back(percentile(values, 50.0));
    }
    result.history.push_back(std::move(s));
  };

  std::vector<Candidate> batch;
  for (int i = 0; i < config.population; ++i) {
    Candidate c;
    for (int attempt = 0; attempt < kDedupeAttempts; ++attempt) {
      c.arch = sample_uniform(space, rng);
      c.record = serialize(c.arch, space);
      if (!config.dedupe || !seen.contains(c.record)) break;
    }
    seen.insert(c.record);
    batch.push_back(std::move(c));
  }
  auto population = select(evaluate_batch(batch, 0));
  record_stats(0, population);

  for (int g = 1; g <= config.generations; ++g) {
    batch.clear();
    for (int k = 0; k < config.children; ++k) {
      const std::size_t parent = population[uniform_index(rng, population.size())];
      Candidate c;
      c.parent = parent;
      for (int attempt = 0; attempt < kDedupeAttempts; ++attempt) {
        auto m = mutate_described(result.evaluated[parent].arch, space, rng, config.unit_weights);
        c.arch = std::move(m.arch);
        c.mutation = std::move(m.description);
        c.record = serialize(c.arch, space);
        if (!config.dedupe || !seen.contains(c.record)) break;
      }
      seen.insert(c.record);
      batch.push_back(std::move(c));
    }
    auto pool = population;
    const auto children = evaluate_batch(batch, g);
    pool.insert(pool.end(), children.begin(), children.end());
    population = select(pool);
    record_stats(g, population);
  }

  std::vector<EvaluatedArch> unique;
  if (config.dedupe) {
    std::unordered_set<std::string> kept;
    for (const auto& e : result.evaluated) {
      if (kept.insert(serialize(e.arch, space)).second) unique.push_back(e);
    }
  }
  result.front = pareto_filter(config.dedupe ? unique : result.evaluated, directions, names);
  if (directions.size() == 1) {
    const EvaluatedArch* best = nullptr;
    for (const auto& e : result.evaluated) {
      if (!best || oriented(e.metrics[0], directions[0]) < oriented(best->metrics[0], directions[0])) best = &e;
    }
    result.best = *best;
  }
  return result;
}

}  // namespace blockprof
