#include "replan/harness.hpp"

#include "replan/errors.hpp"
#include "replan/format.hpp"
#include "replan/serialization.hpp"

#include <algorithm>
#include <atomic>
#include <cmath>
#include <mutex>
#include <thread>

namespace replan
{

void Scenario::validate() const
{
  if (max_cycles < 1) {
    throw InvalidArgument("max_cycles must be at least 1");
  }
  if (!(step_time > 0.0)) {
    throw InvalidArgument("step_time must be positive");
  }
  if (sensor_radius < 0.0 || footprint_radius < 0.0 || tracking_noise_sigma < 0.0) {
    throw InvalidArgument("sensor_radius, footprint_radius and noise must be non-negative");
  }
  arbiter.validate();
}

std::string_view to_string(Cadence c) { return c == Cadence::Continuous ? "continuous" : "waypoint"; }

std::optional<Cadence> cadence_from_string(std::string_view s)
{
  if (s == "continuous") {
    return Cadence::Continuous;
  }
  if (s == "waypoint") {
    return Cadence::Waypoint;
  }
  return std::nullopt;
}

std::string_view to_string(Outcome o)
{
  switch (o) {
    case Outcome::GoalReached:
      return "GoalReached";
    case Outcome::Stuck:
      return "Stuck";
    case Outcome::CycleLimit:
      return "CycleLimit";
  }
  return "?";
}

CostMap scenario_ground_truth(const Scenario & s)
{
  if (const auto * gen = std::get_if<GeneratedMap>(&s.map_source)) {
    CostMap map = generate_perlin_map(
      gen->seed, gen->width, gen->height, gen->resolution, gen->threshold, gen->v_max, gen->noise);
    for (int j = 0; j < map.height(); ++j) {
      for (int i = 0; i < map.width(); ++i) {
        const Point2 c = map.cell_center({i, j});
        if (distance(c, s.start.position()) <= gen->clear_radius ||
            distance(c, s.goal) <= gen->clear_radius) {
          map.set_state({i, j}, CellState::Free);
        }
      }
    }
    return inflate_obstacles(map, s.footprint_radius);
  }
  return inflate_obstacles(std::get<CostMap>(s.map_source), s.footprint_radius);
}

Pose2 follow_step(
  const Trajectory & selected, double time_offset, double step_time, double tracking_noise_sigma,
  std::mt19937_64 & rng)
{
  if (selected.empty()) {
    throw EmptyTrajectory("cannot follow an empty trajectory");
  }
  if (!(step_time > 0.0)) {
    throw InvalidArgument("step_time must be positive");
  }
  Pose2 p = pose_at_time(selected, time_offset + step_time);
  if (tracking_noise_sigma > 0.0) {
    std::normal_distribution<double> noise(0.0, tracking_noise_sigma);
    const double lateral = noise(rng);
    p.x += -std::sin(p.heading) * lateral;
    p.y += std::cos(p.heading) * lateral;
  }
  return p;
}

RunLog run_scenario(const Scenario & s, const CycleObserver & observer)
{
  s.validate();
  RunLog log;
  log.scenario_digest = scenario_digest(s);

  RevealModel world(scenario_ground_truth(s), s.sensor_radius);
  const CostMap & truth = world.ground_truth();
  if (!truth.contains(s.start.position()) || !truth.contains(s.goal)) {
    throw PoseOutOfBounds("scenario start or goal lies outside the map");
  }
  const double goal_tolerance = s.arbiter.search.goal_tolerance + 1e-9;
  const Point2 lo = truth.origin();
  const Point2 hi{lo.x + truth.width() * truth.resolution(), lo.y + truth.height() * truth.resolution()};

  std::mt19937_64 rng(s.rng_seed);
  ArbiterState state;
  Pose2 pose = s.start;
  int stalled = 0;
  log.outcome = Outcome::CycleLimit;

  for (int cycle = 0; cycle < s.max_cycles; ++cycle) {
    world.reveal(pose.position());
    if (distance(pose.position(), s.goal) <= goal_tolerance) {
      log.outcome = Outcome::GoalReached;
      break;
    }
    CycleOutput out;
    try {
      out = plan_cycle(state, pose, s.goal, world.revealed(), s.arbiter);
    } catch (const PlanningFailed & e) {
      log.outcome = Outcome::Stuck;
      log.failure = "cycle " + std::to_string(cycle) + ": " + e.what();
      break;
    }
    if (observer) {
      observer(out.record, out.selected, world.revealed());
    }
    log.cycles.push_back(out.record);
    state = std::move(out.state);

    const double offset = time_at_projection(out.selected, pose.position());
    double advance = s.step_time;
    if (s.cadence == Cadence::Waypoint) {
      // Extend the step to the next waypoint so the next plan starts on a lattice state.
      for (const auto & w : out.selected.waypoints) {
        if (w.arrival_time >= offset + s.step_time - 1e-9) {
          advance = std::max(w.arrival_time - offset, 1e-9);
          break;
        }
      }
    }
    Pose2 next = follow_step(out.selected, offset, advance, s.tracking_noise_sigma, rng);
    next.x = std::clamp(next.x, lo.x, hi.x);
    next.y = std::clamp(next.y, lo.y, hi.y);
    const double moved = distance(pose.position(), next.position());
    log.total_path_length += moved;
    pose = next;
    stalled = moved < 1e-6 ? stalled + 1 : 0;
    if (stalled >= kStallCycles) {
      log.outcome = Outcome::Stuck;
      log.failure = "no progress for " + std::to_string(kStallCycles) + " cycles";
      break;
    }
  }
  if (log.outcome == Outcome::CycleLimit && distance(pose.position(), s.goal) <= goal_tolerance) {
    log.outcome = Outcome::GoalReached;
  }
  return log;
}

Scenario scenario_variant(const Scenario & base, int rep)
{
  Scenario s = base;
  s.rng_seed = base.rng_seed + static_cast<std::uint64_t>(rep);
  if (auto * gen = std::get_if<GeneratedMap>(&s.map_source)) {
    gen->seed += static_cast<std::uint64_t>(rep);
  }
  return s;
}

std::string alpha_label(double alpha) { return "alpha=" + format_number(alpha); }

SweepResult alpha_sweep(
  const Scenario & base, const std::vector<double> & alphas, int repetitions, const SweepOptions & options)
{
  if (alphas.empty()) {
    throw InvalidArgument("alpha sweep needs at least one alpha");
  }
  if (repetitions < 1) {
    throw InvalidArgument("alpha sweep needs at least one repetition");
  }

  struct Config
  {
    std::string label;
    std::optional<double> alpha;
  };
  std::vector<Config> configs;
  for (const double a : alphas) {
    configs.push_back({alpha_label(a), a});
  }
  configs.push_back({kBaselineLabel, std::nullopt});

  const std::size_t reps = static_cast<std::size_t>(repetitions);
  const std::size_t jobs = configs.size() * reps;
  std::vector<Scenario> scenarios;
  scenarios.reserve(jobs);
  for (const auto & c : configs) {
    for (std::size_t r = 0; r < reps; ++r) {
      Scenario s = scenario_variant(base, static_cast<int>(r));
      if (c.alpha) {
        s.arbiter.alpha = *c.alpha;
        s.arbiter.arbitrate = true;
      } else {
        s.arbiter.arbitrate = false;
      }
      s.validate();
      scenarios.push_back(std::move(s));
    }
  }

  std::vector<RunLog> runs(jobs);
  std::vector<std::exception_ptr> errors(jobs);
  std::atomic<std::size_t> next{0};
  auto worker = [&]() {
    for (std::size_t k = next++; k < jobs; k = next++) {
      try {
        runs[k] = run_scenario(scenarios[k], options.observer);
      } catch (...) {
        errors[k] = std::current_exception();
      }
    }
  };
  unsigned threads = options.threads != 0 ? options.threads : std::max(1U, std::thread::hardware_concurrency());
  threads = static_cast<unsigned>(std::min<std::size_t>(threads, jobs));
  if (threads <= 1) {
    worker();
  } else {
    std::vector<std::jthread> pool;
    for (unsigned t = 0; t < threads; ++t) {
      pool.emplace_back(worker);
    }
  }
  for (const auto & e : errors) {
    if (e) {
      std::rethrow_exception(e);
    }
  }

  SweepResult result;
  for (std::size_t c = 0; c < configs.size(); ++c) {
    SweepRow row;
    row.label = configs[c].label;
    row.alpha = configs[c].alpha;
    for (std::size_t r = 0; r < reps; ++r) {
      const RunLog & run = runs[c * reps + r];
      for (const auto & rec : run.cycles) {
        const auto & value = options.directed ? rec.mhd_directed : rec.mhd;
        if (value) {
          row.mhds.push_back(*value);
        }
        result.cycles.push_back({row.label, static_cast<int>(r), rec});
      }
    }
    row.summary = summarize(row.mhds, options.threshold, row.label);
    result.rows.push_back(std::move(row));
  }
  result.runs = std::move(runs);
  return result;
}

}  // namespace replan
