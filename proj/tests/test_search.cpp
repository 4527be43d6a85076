#include "doctest.h"
#include "oracles.hpp"

#include "replan/lattice.hpp"
#include "replan/search.hpp"

#include <map>
#include <random>

using namespace replan;

namespace
{

struct ToyGraph
{
  std::vector<std::vector<std::pair<std::size_t, double>>> adj;
  std::size_t size() const { return adj.size(); }
  void successors(std::size_t id, std::vector<std::pair<std::size_t, double>> & out) const { out = adj[id]; }
};

// Four-connected grid with unit edges into free cells.
struct GridGraph
{
  int w;
  int h;
  std::vector<char> blocked;
  std::size_t size() const { return static_cast<std::size_t>(w * h); }
  Point2 position(std::size_t id) const
  {
    return {static_cast<double>(static_cast<int>(id) % w), static_cast<double>(static_cast<int>(id) / w)};
  }
  void successors(std::size_t id, std::vector<std::pair<std::size_t, double>> & out) const
  {
    out.clear();
    const int x = static_cast<int>(id) % w;
    const int y = static_cast<int>(id) / w;
    const int dx[4] = {1, -1, 0, 0};
    const int dy[4] = {0, 0, 1, -1};
    for (int k = 0; k < 4; ++k) {
      const int nx = x + dx[k];
      const int ny = y + dy[k];
      if (nx < 0 || ny < 0 || nx >= w || ny >= h) {
        continue;
      }
      const auto t = static_cast<std::size_t>(ny * w + nx);
      if (!blocked[t]) {
        out.push_back({t, 1.0});
      }
    }
  }
};

GridGraph random_grid(std::uint64_t seed, int n, double density)
{
  std::mt19937_64 rng(seed);
  std::uniform_real_distribution<double> u(0.0, 1.0);
  GridGraph g{n, n, std::vector<char>(static_cast<std::size_t>(n * n), 0)};
  for (auto & b : g.blocked) {
    b = u(rng) < density;
  }
  g.blocked.front() = 0;
  g.blocked.back() = 0;
  return g;
}

}  // namespace

TEST_CASE("toy graph: cheapest of two routes")
{
  // 0 -> 1 -> 3 costs 7, 0 -> 2 -> 3 costs 10.
  ToyGraph g{{{{1, 3.0}, {2, 1.0}}, {{3, 4.0}}, {{3, 9.0}}, {}}};
  SearchConfig cfg;
  const auto res = ara_star(g, 0, [](std::size_t s) { return s == 3; }, [](std::size_t) { return 0.0; }, cfg);
  CHECK(res.status == SearchStatus::Solved);
  REQUIRE(res.best() != nullptr);
  CHECK(res.best()->cost == 7.0);
  CHECK(res.best()->path == std::vector<std::size_t>{0, 1, 3});
  CHECK(res.best()->epsilon == 1.0);
}

TEST_CASE("unreachable goal reports NoPath")
{
  ToyGraph g{{{{1, 1.0}}, {{0, 1.0}}, {}}};
  const auto res =
    ara_star(g, 0, [](std::size_t s) { return s == 2; }, [](std::size_t) { return 0.0; }, SearchConfig{});
  CHECK(res.status == SearchStatus::NoPath);
  CHECK(res.solutions.empty());
  CHECK(res.total_expansions == 2);
}

TEST_CASE("start inside the goal region costs nothing")
{
  ToyGraph g{{{{1, 1.0}}, {}}};
  const auto res =
    ara_star(g, 0, [](std::size_t s) { return s == 0; }, [](std::size_t) { return 0.0; }, SearchConfig{});
  REQUIRE(res.best() != nullptr);
  CHECK(res.best()->cost == 0.0);
  CHECK(res.best()->path == std::vector<std::size_t>{0});
}

TEST_CASE("published solutions respect their epsilon bound and end optimal")
{
  for (std::uint64_t seed = 1; seed <= 20; ++seed) {
    const auto g = random_grid(seed, 32, 0.25);
    const std::size_t goal = g.size() - 1;
    const Point2 gp = g.position(goal);
    const double optimum = oracle::dijkstra(g, 0, [goal](std::size_t s) { return s == goal; });
    SearchConfig cfg;
    const auto res = ara_star(
      g, 0, [goal](std::size_t s) { return s == goal; },
      [&](std::size_t s) { return heuristic_time(g.position(s), gp, 1.0); }, cfg);
    if (std::isinf(optimum)) {
      CHECK(res.status == SearchStatus::NoPath);
      continue;
    }
    REQUIRE(res.status == SearchStatus::Solved);
    double previous = std::numeric_limits<double>::infinity();
    double previous_eps = std::numeric_limits<double>::infinity();
    for (const auto & sol : res.solutions) {
      CHECK(sol.cost <= sol.epsilon * optimum + 1e-9);
      CHECK(sol.cost <= previous);
      CHECK(sol.epsilon < previous_eps);
      CHECK(sol.path.front() == 0);
      CHECK(sol.path.back() == goal);
      CHECK(sol.cost == doctest::Approx(static_cast<double>(sol.path.size() - 1)));
      previous = sol.cost;
      previous_eps = sol.epsilon;
    }
    CHECK(res.best()->cost == optimum);
    CHECK(res.best()->epsilon == 1.0);
  }
}

TEST_CASE("heuristic examples")
{
  CHECK(heuristic_time({0.0, 0.0}, {3.0, 4.0}, 1.0) == 5.0);
  CHECK(heuristic_time({0.0, 0.0}, {3.0, 4.0}, 2.0) == 2.5);
  CHECK(heuristic_time({1.0, 1.0}, {1.0, 1.0}, 1.0) == 0.0);
  CHECK(heuristic_time({0.0, 0.0}, {0.1, 0.0}, 1.0, 0.2) == 0.0);
  CHECK(heuristic_time({0.0, 0.0}, {1.2, 0.0}, 1.0, 0.2) == doctest::Approx(1.0));
  CHECK_THROWS_AS(heuristic_time({0.0, 0.0}, {1.0, 0.0}, 0.0), InvalidArgument);
}

TEST_CASE("heuristic never overestimates the lattice cost to the goal region")
{
  const auto set = build_control_set(16, 1.0, 0.2);
  std::mt19937_64 rng(99);
  int checked = 0;
  for (int trial = 0; trial < 200; ++trial) {
    const auto map = inflate_obstacles(generate_perlin_map(100 + trial, 48, 48, 0.2, 0.25, 1.0), 0.2);
    const LatticeGraph graph(map, set);
    const LatticeState start{8 + static_cast<int>(rng() % 32), 8 + static_cast<int>(rng() % 32), static_cast<int>(rng() % 16)};
    const Point2 goal = map.cell_center({8 + static_cast<int>(rng() % 32), 8 + static_cast<int>(rng() % 32)});
    if (map.blocked({start.x, start.y})) {
      continue;
    }
    const double tol = 0.2;
    const double cost = oracle::dijkstra(
      graph, graph.index(start), [&](std::size_t s) { return distance(graph.position(s), goal) <= tol; });
    if (std::isinf(cost)) {
      continue;
    }
    CHECK(heuristic_time(graph.position(graph.index(start)), goal, map.v_max(), tol) <= cost + 1e-12);
    ++checked;
  }
  CHECK(checked >= 50);
}

TEST_CASE("heuristic is consistent across every lattice edge")
{
  const auto set = build_control_set(16, 1.0, 0.2);
  const auto map = generate_perlin_map(5, 20, 20, 0.2, 0.3, 1.5);
  const LatticeGraph graph(map, set);
  const Point2 goal{2.1, 1.3};
  std::vector<std::pair<std::size_t, double>> succ;
  for (std::size_t s = 0; s < graph.size(); ++s) {
    graph.successors(s, succ);
    for (const auto & [t, c] : succ) {
      const double hs = heuristic_time(graph.position(s), goal, map.v_max(), 0.2);
      const double ht = heuristic_time(graph.position(t), goal, map.v_max(), 0.2);
      CHECK(hs <= c + ht + 1e-12);
    }
  }
}

TEST_CASE("search is deterministic and expands each node at most once per pass")
{
  const auto g = random_grid(7, 40, 0.2);
  const std::size_t goal = g.size() - 1;
  const Point2 gp = g.position(goal);
  auto run = [&](const ExpansionObserver & obs) {
    return ara_star(
      g, 0, [goal](std::size_t s) { return s == goal; },
      [&](std::size_t s) { return heuristic_time(g.position(s), gp, 1.0); }, SearchConfig{}, obs);
  };
  std::vector<ExpansionEvent> first;
  std::vector<ExpansionEvent> second;
  const auto a = run([&](const ExpansionEvent & e) { first.push_back(e); });
  const auto b = run([&](const ExpansionEvent & e) { second.push_back(e); });
  REQUIRE(first.size() == second.size());
  for (std::size_t k = 0; k < first.size(); ++k) {
    CHECK(first[k].node == second[k].node);
    CHECK(first[k].g == second[k].g);
  }
  CHECK(a.total_expansions == first.size());
  CHECK(a.best()->path == b.best()->path);

  std::map<double, std::vector<std::size_t>> per_pass;
  for (const auto & e : first) {
    per_pass[e.epsilon].push_back(e.node);
  }
  for (auto & [eps, nodes] : per_pass) {
    std::sort(nodes.begin(), nodes.end());
    CHECK(std::adjacent_find(nodes.begin(), nodes.end()) == nodes.end());
  }
}

TEST_CASE("expansion budget stops the search and keeps completed passes")
{
  const auto g = random_grid(3, 40, 0.1);
  const std::size_t goal = g.size() - 1;
  const Point2 gp = g.position(goal);
  auto run = [&](std::size_t budget) {
    SearchConfig cfg;
    cfg.expansion_budget = budget;
    return ara_star(
      g, 0, [goal](std::size_t s) { return s == goal; },
      [&](std::size_t s) { return heuristic_time(g.position(s), gp, 1.0); }, cfg);
  };
  const auto full = run(2'000'000);
  REQUIRE(full.status == SearchStatus::Solved);
  const auto tiny = run(5);
  CHECK(tiny.status == SearchStatus::BudgetExhausted);
  CHECK(tiny.total_expansions == 5);
  CHECK(tiny.solutions.empty());

  const std::size_t after_first = full.solutions.front().expansions;
  const auto partial = run(after_first + 1);
  if (partial.status == SearchStatus::BudgetExhausted) {
    CHECK(partial.solutions.size() >= 1);
    CHECK(partial.total_expansions == after_first + 1);
  }
  SearchConfig bad;
  bad.epsilon_start = 0.5;
  CHECK_THROWS_AS(bad.validate(), InvalidArgument);
}
