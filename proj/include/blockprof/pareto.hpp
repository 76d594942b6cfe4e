#pragma once

#include <cstddef>
#include <optional>
#include <string>
#include <vector>

#include "blockprof/design_space.hpp"
#include "blockprof/metric.hpp"

namespace blockprof {

/// An architecture together with its objective values.
struct EvaluatedArch {
  std::size_t id = 0;  // evaluation order within a run
  Architecture arch;
  std::vector<double> metrics;
  int generation = 0;
  std::optional<std::size_t> parent;
  std::string mutation;  // empty for generation-0 samples
};

struct ParetoFront {
  std::vector<std::string> objectives;
  std::vector<Direction> directions;
  std::vector<EvaluatedArch> members;  // ascending by the first objective
};

/// a dominates b: no worse on every objective and strictly better on one.
bool dominates(const std::vector<double>& a, const std::vector<double>& b, const std::vector<Direction>& directions);

/// Indices of the non-dominated points, ordered by the first objective
/// (ascending, ties by index). Throws DomainError on ragged vectors.
std::vector<std::size_t> pareto_indices(const std::vector<std::vector<double>>& points,
                                        const std::vector<Direction>& directions);

ParetoFront pareto_filter(const std::vector<EvaluatedArch>& evaluated, const std::vector<Direction>& directions,
                          const std::vector<std::string>& objectives = {});

enum class GridOutcome { AWins, BWins, Tie };

struct FrontierComparison {
  std::string budget_metric;  // the minimized objective
  std::string score_metric;   // the maximized objective
  std::vector<double> budgets;
  std::vector<std::optional<double>> best_a;  // best score with cost <= budget
  std::vector<std::optional<double>> best_b;
  std::vector<GridOutcome> outcomes;
  double a_win_fraction = 0.0;
  double b_win_fraction = 0.0;
  double tie_fraction = 0.0;
  double low_a_win_fraction = 0.0;  // over the lower half of the grid
  double low_b_win_fraction = 0.0;
};

/// Compares two (maximize, minimize) frontiers on an evenly spaced grid of
/// budgets spanning both fronts. Throws DomainError when the objectives
/// differ or are not one maximized and one minimized metric.
FrontierComparison compare_frontiers(const ParetoFront& a, const ParetoFront& b, std::size_t grid_points = 100);

}  // namespace blockprof
