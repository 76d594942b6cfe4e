#include "blockprof/pareto.hpp"

#include <algorithm>
#include <numeric>

#include "blockprof/errors.hpp"

namespace blockprof {

namespace {

// Oriented so that smaller is better on every axis.
double oriented(double v, Direction d) { return d == Direction::Maximize ? -v : v; }

void check_lengths(const std::vector<std::vector<double>>& points, std::size_t m) {
  for (const auto& p : points) {
    if (p.size() != m) throw DomainError("metric vectors must all have one value per objective");
  }
}

}  // namespace

bool dominates(const std::vector<double>& a, const std::vector<double>& b, const std::vector<Direction>& directions) {
  bool strict = false;
  for (std::size_t i = 0; i < directions.size(); ++i) {
    const double x = oriented(a[i], directions[i]);
    const double y = oriented(b[i], directions[i]);
    if (x > y) return false;
    if (x < y) strict = true;
  }
  return strict;
}

std::vector<std::size_t> pareto_indices(const std::vector<std::vector<double>>& points,
                                        const std::vector<Direction>& directions) {
  if (directions.empty()) throw DomainError("at least one objective is required");
  check_lengths(points, directions.size());

  // After a lexicographic sort no point can be dominated by a later one, so a
  // single pass against the front found so far is exact.
  std::vector<std::size_t> order(points.size());
  std::iota(order.begin(), order.end(), 0);
  std::stable_sort(order.begin(), order.end(), [&](std::size_t i, std::size_t j) {
    for (std::size_t k = 0; k < directions.size(); ++k) {
      const double x = oriented(points[i][k], directions[k]);
      const double y = oriented(points[j][k], directions[k]);
      if (x != y) return x < y;
    }
    return false;
  });
  std::vector<std::size_t> front;
  for (std::size_t i : order) {
    const bool dominated = std::any_of(front.begin(), front.end(),
                                       [&](std::size_t f) { return dominates(points[f], points[i], directions); });
    if (!dominated) front.push_back(i);
  }
  std::sort(front.begin(), front.end(), [&](std::size_t i, std::size_t j) {
    if (points[i][0] != points[j][0]) return points[i][0] < points[j][0];
    return i < j;
  });
  return front;
}

ParetoFront pareto_filter(const std::vector<EvaluatedArch>& evaluated, const std::vector<Direction>& directions,
                          const std::vector<std::string>& objectives) {
  std::vector<std::vector<double>> points;
  points.reserve(evaluated.size());
  for (const auto& e : evaluated) points.push_back(e.metrics);
  ParetoFront front{objectives, directions, {}};
  for (std::size_t i : pareto_indices(points, directions)) front.members.push_back(evaluated[i]);
  return front;
}

FrontierComparison compare_frontiers(const ParetoFront& a, const ParetoFront& b, std::size_t grid_points) {
  if (a.directions != b.directions || a.objectives != b.objectives) {
    throw DomainError("frontiers were computed for different objectives");
  }
  if (a.directions.size() != 2 || a.directions[0] == a.directions[1]) {
    throw DomainError("frontier comparison needs one maximized and one minimized objective");
  }
  if (grid_points < 2) throw DomainError("frontier comparison needs at least 2 grid points");
  const std::size_t cost = a.directions[0] == Direction::Minimize ? 0 : 1;
  const std::size_t score = 1 - cost;

  FrontierComparison out;
  if (!a.objectives.empty()) {
    out.budget_metric = a.objectives[cost];
    out.score_metric = a.objectives[score];
  }
  double lo = 0.0;
  double hi = 0.0;
  bool any = false;
  for (const auto* f : {&a, &b}) {
    for (const auto& m : f->members) {
      lo = any ? std::min(lo, m.metrics[cost]) : m.metrics[cost];
      hi = any ? std::max(hi, m.metrics[cost]) : m.metrics[cost];
      any = true;
    }
  }
  if (!any) throw DomainError("cannot compare two empty frontiers");

  auto best_under = [&](const ParetoFront& f, double budget) {
    std::optional<double> best;
    for (const auto& m : f.members) {
      if (m.metrics[cost] <= budget && (!best || m.metrics[score] > *best)) best = m.metrics[score];
    }
    return best;
  };

  std::size_t a_wins = 0, b_wins = 0, low_a = 0, low_b = 0;
  const std::size_t low_count = grid_points / 2;
  for (std::size_t i = 0; i < grid_points; ++i) {
    const double budget =
        i + 1 == grid_points ? hi : lo + (hi - lo) * static_cast<double>(i) / static_cast<double>(grid_points - 1);
    const auto sa = best_under(a, budget);
    const auto sb = best_under(b, budget);
    GridOutcome o = GridOutcome::Tie;
    if (sa && (!sb || *sa > *sb)) o = GridOutcome::AWins;
    else if (sb && (!sa || *sb > *sa)) o = GridOutcome::BWins;
    if (o == GridOutcome::AWins) {
      ++a_wins;
      if (i < low_count) ++low_a;
    } else if (o == GridOutcome::BWins) {
      ++b_wins;
      if (i < low_count) ++low_b;
    }
    out.budgets.push_back(budget);
    out.best_a.push_back(sa);
    out.best_b.push_back(sb);
    out.outcomes.push_back(o);
  }
  const auto n = static_cast<double>(grid_points);
  out.a_win_fraction = static_cast<double>(a_wins) / n;
  out.b_win_fraction = static_cast<double>(b_wins) / n;
  out.tie_fraction = static_cast<double>(grid_points - a_wins - b_wins) / n;
  out.low_a_win_fraction = static_cast<double>(low_a) / static_cast<double>(low_count);
  out.low_b_win_fraction = static_cast<double>(low_b) / static_cast<double>(low_count);
  return out;
}

}  // namespace blockprof
