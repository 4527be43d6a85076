#include "doctest.h"

#include "replan/errors.hpp"
#include "replan/harness.hpp"
#include "replan/serialization.hpp"

#include <cmath>

using namespace replan;

namespace
{

Trajectory straight(double length, double speed)
{
  Trajectory t;
  const int n = 4;
  for (int k = 0; k <= n; ++k) {
    t.waypoints.push_back({{length * k / n, 1.0, 0.0}, 0.0});
  }
  t.edges.resize(n);
  for (auto & e : t.edges) {
    e.arc_length = length / n;
    e.duration = e.arc_length / speed;
  }
  t.retime();
  return t;
}

Scenario small_scenario(std::uint64_t seed)
{
  Scenario s;
  GeneratedMap gen;
  gen.seed = seed;
  gen.width = 48;
  gen.height = 48;
  gen.threshold = 0.25;
  s.map_source = gen;
  s.start = {1.1, 1.1, 0.0};
  s.goal = {8.3, 8.1};
  s.max_cycles = 40;
  return s;
}

}  // namespace

TEST_CASE("follow_step advances along the trajectory")
{
  std::mt19937_64 rng(1);
  const auto t = straight(8.0, 2.0);
  const auto p = follow_step(t, 0.0, 1.0, 0.0, rng);
  CHECK(p.x == doctest::Approx(2.0));
  CHECK(p.y == doctest::Approx(1.0));
  const auto end = follow_step(t, 10.0, 1.0, 0.0, rng);
  CHECK(end.x == doctest::Approx(8.0));
  for (double offset = 0.0; offset < 4.0; offset += 0.37) {
    CHECK(distance_to_path(t, follow_step(t, offset, 0.5, 0.0, rng).position()) <= 1e-9);
  }
  const auto noisy = follow_step(t, 0.0, 1.0, 0.3, rng);
  CHECK(noisy.x == doctest::Approx(2.0));
  CHECK(noisy.y != 1.0);
  CHECK_THROWS_AS(follow_step(Trajectory{}, 0.0, 1.0, 0.0, rng), EmptyTrajectory);
}

TEST_CASE("goal at the start finishes immediately")
{
  Scenario s = small_scenario(1);
  s.goal = {1.15, 1.1};
  const auto log = run_scenario(s);
  CHECK(log.outcome == Outcome::GoalReached);
  CHECK(log.cycles.size() <= 1);
}

TEST_CASE("scenario runs are deterministic and reach the goal")
{
  for (std::uint64_t seed : {1, 2, 3}) {
    Scenario s = small_scenario(seed);
    s.tracking_noise_sigma = 0.05;
    s.rng_seed = seed;
    const auto a = run_scenario(s);
    const auto b = run_scenario(s);
    CHECK(a == b);
    CHECK(a.outcome == Outcome::GoalReached);
    REQUIRE_FALSE(a.cycles.empty());
    CHECK(a.cycles.front().route == Route::First);
    for (std::size_t k = 0; k < a.cycles.size(); ++k) {
      CHECK(a.cycles[k].cycle == static_cast<int>(k));
    }
    CHECK(a.total_path_length > 0.0);
  }
}

TEST_CASE("fully revealed static map keeps the first trajectory")
{
  Scenario s = small_scenario(4);
  s.sensor_radius = 100.0;
  s.cadence = Cadence::Waypoint;
  const auto log = run_scenario(s);
  REQUIRE(log.cycles.size() >= 3);
  for (std::size_t k = 1; k < log.cycles.size(); ++k) {
    CHECK(log.cycles[k].route == Route::Keep);
    CHECK(*log.cycles[k].mhd == 0.0);
    CHECK(log.cycles[k].selected_id == log.cycles[0].selected_id);
  }
}

TEST_CASE("published trajectories are collision-free on the revealed map")
{
  Scenario s = small_scenario(6);
  int checked = 0;
  run_scenario(s, [&](const CycleRecord &, const Trajectory & t, const CostMap & map) {
    for (const auto & e : t.edges) {
      CHECK(swath_duration(e.swath, e.arc_length, map).has_value());
    }
    ++checked;
  });
  CHECK(checked > 0);
}

TEST_CASE("alpha 1 without repair matches the baseline until the first tie is kept")
{
  for (std::uint64_t seed : {1, 2, 5}) {
    Scenario s = small_scenario(seed);
    s.arbiter.alpha = 1.0;
    s.arbiter.repair.enabled = false;
    Scenario b = s;
    b.arbiter.arbitrate = false;
    const auto with = run_scenario(s);
    const auto base = run_scenario(b);
    for (std::size_t k = 0; k < std::min(with.cycles.size(), base.cycles.size()); ++k) {
      const auto & r = with.cycles[k];
      if (r.route == Route::Keep) {
        CHECK(*r.cost_now >= *r.cost_prev_updated);
        break;
      }
      CHECK(r.route == base.cycles[k].route);
      CHECK(r.cost_now == base.cycles[k].cost_now);
    }
  }
}

TEST_CASE("alpha sweep rows")
{
  Scenario s = small_scenario(1);
  s.max_cycles = 15;
  const auto res = alpha_sweep(s, {0.95, 0.99}, 2, SweepOptions{0.2, false, 2, {}});
  REQUIRE(res.rows.size() == 3);
  CHECK(res.rows[0].label == "alpha=0.95");
  CHECK(res.rows[1].label == "alpha=0.99");
  CHECK(res.rows[2].label == kBaselineLabel);
  CHECK_FALSE(res.rows[2].alpha.has_value());
  CHECK(res.runs.size() == 6);
  for (const auto & c : res.cycles) {
    if (c.label == kBaselineLabel) {
      CHECK((c.record.route == Route::First || c.record.route == Route::New));
    }
  }
  const auto serial = alpha_sweep(s, {0.95, 0.99}, 2, SweepOptions{0.2, false, 1, {}});
  CHECK(serial.runs == res.runs);
  CHECK_THROWS_AS(alpha_sweep(s, {}, 1), InvalidArgument);
  CHECK_THROWS_AS(alpha_sweep(s, {0.95}, 0), InvalidArgument);
}

TEST_CASE("scenario variants shift seeds")
{
  const auto s = small_scenario(10);
  const auto v = scenario_variant(s, 3);
  CHECK(std::get<GeneratedMap>(v.map_source).seed == 13);
  CHECK(v.rng_seed == 3);
  CHECK(scenario_digest(s) != scenario_digest(v));
  CHECK(scenario_digest(s) == scenario_digest(small_scenario(10)));
}

TEST_CASE("cycle records and scenarios round trip through JSON")
{
  CycleRecord r;
  r.cycle = 4;
  r.route = Route::Repair;
  r.cost_now = 52.87;
  r.cost_prev_updated = 56.83;
  r.cost_prev_repaired = 0.1 + 0.2;
  r.selected_id = 17;
  r.mhd = 1.0 / 3.0;
  r.mhd_directed = 0.25;
  r.alpha = 0.95;
  r.expansions_now = 1234;
  r.expansions_repair = 56;
  const auto line = cycle_record_to_json(r).dump();
  CHECK(cycle_record_from_json(nlohmann::json::parse(line)) == r);
  const auto j = nlohmann::json::parse(line);
  for (const char * key :
       {"cycle", "route", "cost_now", "cost_prev_updated", "cost_prev_repaired", "selected_id", "mhd", "alpha"}) {
    CHECK(j.contains(key));
  }
  CycleRecord first;
  const auto fj = nlohmann::json::parse(cycle_record_to_json(first).dump());
  CHECK(fj.at("cost_prev_updated").is_null());
  CHECK(cycle_record_from_json(fj) == first);
  CHECK_THROWS_AS(cycle_record_from_json(nlohmann::json{{"cycle", 1}}), MalformedHeader);

  Scenario s = small_scenario(9);
  s.arbiter.divergence_threshold = 3.0;
  s.tracking_noise_sigma = 0.1;
  s.cadence = Cadence::Waypoint;
  const auto back = scenario_from_json(nlohmann::json::parse(scenario_to_json(s).dump()));
  CHECK(scenario_digest(back) == scenario_digest(s));
  CHECK(run_scenario(back) == run_scenario(s));

  Scenario inline_map = s;
  inline_map.map_source = CostMap(20, 20, 0.2, {0.0, 0.0}, 1.0);
  inline_map.goal = {3.1, 3.1};
  const auto back2 = scenario_from_json(nlohmann::json::parse(scenario_to_json(inline_map).dump()));
  CHECK(std::get<CostMap>(back2.map_source) == std::get<CostMap>(inline_map.map_source));
  CHECK_THROWS_AS(scenario_from_json(nlohmann::json{{"start", 1}}), MalformedHeader);
}

TEST_CASE("waypoint cadence starts every cycle on a lattice state")
{
  Scenario s = small_scenario(2);
  s.cadence = Cadence::Waypoint;
  std::optional<Trajectory> previous;
  run_scenario(s, [&](const CycleRecord & r, const Trajectory & t, const CostMap &) {
    if (previous && r.route != Route::First) {
      const Point2 start = t.waypoints.front().pose.position();
      bool on_waypoint = false;
      for (const auto & w : previous->waypoints) {
        on_waypoint = on_waypoint || distance(w.pose.position(), start) < 1e-6;
      }
      CHECK(on_waypoint);
    }
    previous = t;
  });
  CHECK(cadence_from_string("waypoint") == Cadence::Waypoint);
  CHECK(cadence_from_string("continuous") == Cadence::Continuous);
  CHECK_FALSE(cadence_from_string("hourly").has_value());
}

TEST_CASE("scenario validation")
{
  Scenario s = small_scenario(1);
  s.max_cycles = 0;
  CHECK_THROWS_AS(s.validate(), InvalidArgument);
  s = small_scenario(1);
  s.step_time = 0.0;
  CHECK_THROWS_AS(s.validate(), InvalidArgument);
  s = small_scenario(1);
  s.goal = {100.0, 1.0};
  CHECK_THROWS_AS(run_scenario(s), PoseOutOfBounds);
}
