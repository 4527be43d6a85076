#pragma once

#include "replan/errors.hpp"
#include "replan/gridmap.hpp"

#include <algorithm>
#include <concepts>
#include <cstddef>
#include <functional>
#include <limits>
#include <queue>
#include <utility>
#include <vector>

namespace replan
{

struct SearchConfig
{
  double epsilon_start{3.0};
  double epsilon_step{0.5};
  std::size_t expansion_budget{2'000'000};
  double goal_tolerance{kDefaultResolution};  // meters, any heading

  /// Throws InvalidArgument.
  void validate() const
  {
    if (!(epsilon_start >= 1.0) || !(epsilon_step > 0.0) || expansion_budget < 1 ||
        !(goal_tolerance >= 0.0)) {
      throw InvalidArgument("invalid search configuration");
    }
  }
};

enum class SearchStatus { Solved, NoPath, BudgetExhausted };

struct Solution
{
  std::vector<std::size_t> path;  // node ids, start first
  double cost{0.0};
  double epsilon{1.0};
  std::size_t expansions{0};  // cumulative when the solution was published
};

struct SearchResult
{
  std::vector<Solution> solutions;
  SearchStatus status{SearchStatus::NoPath};
  std::size_t total_expansions{0};

  const Solution * best() const { return solutions.empty() ? nullptr : &solutions.back(); }
};

struct ExpansionEvent
{
  std::size_t node;
  double g;
  double f;
  double epsilon;
};

using ExpansionObserver = std::function<void(const ExpansionEvent &)>;

/// Graph over dense node ids [0, size()) exposing outgoing weighted edges.
template <class G>
concept SearchGraph = requires(const G & g, std::size_t id, std::vector<std::pair<std::size_t, double>> & out) {
  { g.size() } -> std::convertible_to<std::size_t>;
  g.successors(id, out);
};

/// Anytime Repairing A*.
///
/// Runs weighted-A* passes with inflation epsilon_start, epsilon_start - step,
/// ... clamped to 1, carrying g-values forward and re-inserting locally
/// inconsistent states between passes. Each completed pass that reaches the
/// goal region publishes a solution bounded by its epsilon times the optimum.
/// The heuristic must be consistent and zero on goal states.
///
/// OPEN ordering: smaller f, then larger g, then smaller node id.
template <SearchGraph Graph, class GoalPredicate, class Heuristic>
SearchResult ara_star(
  const Graph & graph, std::size_t start, GoalPredicate && is_goal, Heuristic && heuristic,
  const SearchConfig & config, const ExpansionObserver & observer = {})
{
  config.validate();
  constexpr double inf = std::numeric_limits<double>::infinity();
  constexpr std::size_t none = std::numeric_limits<std::size_t>::max();
  const std::size_t n = graph.size();

  std::vector<double> g(n, inf);
  std::vector<double> h(n, -1.0);
  std::vector<std::size_t> parent(n, none);
  std::vector<unsigned> closed_in(n, 0);  // pass number that closed the node
  std::vector<char> in_open(n, 0);
  std::vector<char> in_incons(n, 0);
  std::vector<std::size_t> incons;

  auto h_of = [&](std::size_t s) {
    if (h[s] < 0.0) {
      h[s] = heuristic(s);
    }
    return h[s];
  };

  struct Entry
  {
    double f;
    double g;
    std::size_t id;
  };
  // Max-heap comparator inverted into a min-heap on (f, -g, id).
  auto worse = [](const Entry & a, const Entry & b) {
    if (a.f != b.f) {
      return a.f > b.f;
    }
    if (a.g != b.g) {
      return a.g < b.g;
    }
    return a.id > b.id;
  };
  std::priority_queue<Entry, std::vector<Entry>, decltype(worse)> open(worse);

  double epsilon = config.epsilon_start;
  double goal_g = inf;
  std::size_t goal_node = none;
  auto note_goal = [&](std::size_t s) {
    if (g[s] < goal_g && is_goal(s)) {
      goal_g = g[s];
      goal_node = s;
    }
  };

  SearchResult result;
  g[start] = 0.0;
  note_goal(start);
  open.push({epsilon * h_of(start), 0.0, start});
  in_open[start] = 1;

  unsigned pass = 0;
  bool budget_hit = false;
  std::vector<std::pair<std::size_t, double>> succ;

  auto improve_path = [&]() {
    while (!open.empty()) {
      const Entry top = open.top();
      if (!in_open[top.id] || top.g != g[top.id]) {
        open.pop();  // stale
        continue;
      }
      if (!(goal_g > top.f)) {
        return;
      }
      if (result.total_expansions >= config.expansion_budget) {
        budget_hit = true;
        return;
      }
      open.pop();
      const std::size_t s = top.id;
      in_open[s] = 0;
      closed_in[s] = pass;
      ++result.total_expansions;
      if (observer) {
        observer({s, g[s], top.f, epsilon});
      }
      graph.successors(s, succ);
      for (const auto & [t, cost] : succ) {
        const double ng = g[s] + cost;
        if (!(ng < g[t])) {
          continue;
        }
        g[t] = ng;
        parent[t] = s;
        note_goal(t);
        if (closed_in[t] == pass) {
          if (!in_incons[t]) {
            in_incons[t] = 1;
            incons.push_back(t);
          }
        } else {
          in_open[t] = 1;
          open.push({ng + epsilon * h_of(t), ng, t});
        }
      }
    }
  };

  auto publish = [&]() {
    Solution sol;
    sol.cost = goal_g;
    sol.epsilon = epsilon;
    sol.expansions = result.total_expansions;
    for (std::size_t s = goal_node; s != none; s = parent[s]) {
      sol.path.push_back(s);
      if (s == start) {
        break;
      }
    }
    std::reverse(sol.path.begin(), sol.path.end());
    result.solutions.push_back(std::move(sol));
  };

  while (true) {
    ++pass;
    improve_path();
    if (budget_hit) {
      result.status = SearchStatus::BudgetExhausted;
      return result;
    }
    if (goal_g == inf) {
      // The first pass only ends with an unreached goal once OPEN is empty.
      result.status = SearchStatus::NoPath;
      return result;
    }
    publish();
    if (epsilon <= 1.0) {
      result.status = SearchStatus::Solved;
      return result;
    }
    epsilon = std::max(1.0, epsilon - config.epsilon_step);

    // OPEN <- OPEN u INCONS, keyed with the new epsilon.
    std::vector<std::size_t> members;
    while (!open.empty()) {
      const Entry e = open.top();
      open.pop();
      if (in_open[e.id] && e.g == g[e.id]) {
        in_open[e.id] = 2;  // collected
        members.push_back(e.id);
      }
    }
    for (const std::size_t s : incons) {
      in_incons[s] = 0;
      if (in_open[s] != 2) {
        in_open[s] = 2;
        members.push_back(s);
      }
    }
    incons.clear();
    for (const std::size_t s : members) {
      in_open[s] = 1;
      open.push({g[s] + epsilon * h_of(s), g[s], s});
    }
  }
}

}  // namespace replan

namespace replan
{

/// Straight-line travel time at v_max to the edge of a goal disk of radius
/// `tolerance`; zero inside the disk.
inline double heuristic_time(Point2 from, Point2 goal, double v_max, double tolerance = 0.0)
{
  if (!(v_max > 0.0)) {
    throw InvalidArgument("v_max must be positive");
  }
  return std::max(0.0, distance(from, goal) - tolerance) / v_max;
}

}  // namespace replan
