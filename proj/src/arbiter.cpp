#include "replan/arbiter.hpp"

#include "replan/aligned_lattice.hpp"
#include "replan/errors.hpp"
#include "replan/metrics.hpp"

#include <algorithm>
#include <array>
#include <limits>
#include <utility>

namespace replan
{

void ArbiterConfig::validate() const
{
  if (!(alpha > 0.0 && alpha <= 1.0)) {
    throw InvalidArgument("alpha must lie in (0, 1]");
  }
  if (!(repair.lateral_spacing > 0.0) || !(repair.station_spacing > 0.0) ||
      !(repair.lateral_width >= repair.lateral_spacing)) {
    throw InvalidArgument("repair widths must be positive with lateral_width >= lateral_spacing");
  }
  if (divergence_threshold && !(*divergence_threshold > 0.0)) {
    throw InvalidArgument("divergence_threshold must be positive");
  }
  search.validate();
}

namespace
{
constexpr std::array<std::pair<Route, std::string_view>, 5> kRouteNames{{
  {Route::First, "First"},
  {Route::New, "New"},
  {Route::Keep, "Keep"},
  {Route::Repair, "Repair"},
  {Route::RepairFailedFallback, "RepairFailedFallback"},
}};
}  // namespace

std::string_view to_string(Route r)
{
  for (const auto & [route, name] : kRouteNames) {
    if (route == r) {
      return name;
    }
  }
  return "?";
}

std::optional<Route> route_from_string(std::string_view s)
{
  for (const auto & [route, name] : kRouteNames) {
    if (name == s) {
      return route;
    }
  }
  return std::nullopt;
}

UpdatedTrajectory update_previous(const Trajectory & previous, Point2 x_now, const CostMap & map)
{
  if (previous.empty()) {
    throw EmptyTrajectory("cannot update an empty trajectory");
  }
  std::size_t nearest = 0;
  double best = std::numeric_limits<double>::infinity();
  for (std::size_t k = 0; k < previous.waypoints.size(); ++k) {
    const double d = distance(previous.waypoints[k].pose.position(), x_now);
    if (d < best) {
      best = d;
      nearest = k;
    }
  }

  UpdatedTrajectory out;
  Trajectory & t = out.trajectory;
  t.id = previous.id;
  t.birth_cycle = previous.birth_cycle;
  t.waypoints.assign(previous.waypoints.begin() + static_cast<std::ptrdiff_t>(nearest), previous.waypoints.end());
  t.edges.assign(previous.edges.begin() + static_cast<std::ptrdiff_t>(nearest), previous.edges.end());
  for (auto & e : t.edges) {
    const auto d = swath_duration(e.swath, e.arc_length, map);
    e.feasible = d.has_value();
    if (d) {
      e.duration = *d;
    } else {
      out.in_collision = true;
    }
  }
  t.retime();
  return out;
}

RepairOutcome repair(
  const Trajectory & updated, const CostMap & map, const ArbiterConfig & config, std::uint64_t id,
  int birth_cycle)
{
  if (updated.empty()) {
    throw EmptyTrajectory("cannot repair an empty trajectory");
  }
  RepairOutcome out;
  AlignedLattice lattice;
  try {
    lattice = build_aligned_lattice(
      updated, config.repair.lateral_width, config.repair.lateral_spacing,
      config.repair.station_spacing, map);
  } catch (const DegenerateBase &) {
    return out;
  }

  const std::size_t start = lattice.node_id(0, lattice.center_index());
  const std::size_t goal = lattice.node_id(lattice.stations.size() - 1, lattice.center_index());
  const Point2 goal_point = lattice.position(lattice.stations.size() - 1, lattice.center_index());
  const double v_max = map.v_max();
  const auto result = ara_star(
    lattice, start, [goal](std::size_t s) { return s == goal; },
    [&](std::size_t s) {
      const auto [station, lateral] = lattice.node(s);
      return heuristic_time(lattice.position(station, lateral), goal_point, v_max);
    },
    config.search);
  out.status = result.status;
  out.expansions = result.total_expansions;
  if (const Solution * best = result.best()) {
    out.trajectory = trajectory_from_aligned_path(lattice, best->path, id, birth_cycle);
    // The base itself competes when it is still collision-free.
    const bool base_feasible = std::all_of(updated.edges.begin(), updated.edges.end(), [&](const TrajectoryEdge & e) {
      return swath_duration(e.swath, e.arc_length, map).has_value();
    });
    if (base_feasible && updated.duration <= out.trajectory->duration) {
      out.trajectory = updated;
    }
  }
  return out;
}

Selection select(
  const Trajectory & now, const Trajectory * candidate, CandidateKind kind, double alpha, Route fallback)
{
  if (candidate == nullptr) {
    return {&now, fallback};
  }
  if (prefer_new(now.duration, candidate->duration, alpha)) {
    return {&now, Route::New};
  }
  return {candidate, kind == CandidateKind::Updated ? Route::Keep : Route::Repair};
}

PlanOutcome plan_trajectory(
  const CostMap & map, const Pose2 & start, Point2 goal, const ArbiterConfig & config,
  std::uint64_t id, int birth_cycle, const ExpansionObserver & observer)
{
  const auto set = build_control_set(config.lattice.headings, config.lattice.primitive_spacing, map.resolution());
  const auto snapped = snap_to_lattice(start, map, set);
  if (!snapped) {
    throw PoseOutOfBounds("start pose lies outside the map");
  }
  if (!map.contains(goal)) {
    throw PoseOutOfBounds("goal lies outside the map");
  }
  const LatticeGraph graph(map, set);
  const double tol = config.search.goal_tolerance;
  const double v_max = map.v_max();

  PlanOutcome out;
  out.search = ara_star(
    graph, graph.index(*snapped),
    [&](std::size_t s) { return distance(graph.position(s), goal) <= tol + 1e-9; },
    [&](std::size_t s) { return heuristic_time(graph.position(s), goal, v_max, tol); },
    config.search, observer);
  if (const Solution * best = out.search.best()) {
    std::vector<LatticeState> states;
    states.reserve(best->path.size());
    for (const auto s : best->path) {
      states.push_back(graph.state(s));
    }
    out.trajectory = trajectory_from_states(states, map, set, id, birth_cycle);
  }
  return out;
}

CycleOutput plan_cycle(
  const ArbiterState & state, const Pose2 & x_now, Point2 x_goal, const CostMap & map,
  const ArbiterConfig & config, const ExpansionObserver & observer)
{
  config.validate();
  ArbiterState next = state;
  if (next.goal && distance(*next.goal, x_goal) > 1e-9) {
    next.previous.reset();
  }
  next.goal = x_goal;

  const int cycle = state.cycle_index;
  CycleRecord record;
  record.cycle = cycle;
  record.alpha = config.alpha;

  auto now = plan_trajectory(map, x_now, x_goal, config, next.next_id++, cycle, observer);
  record.expansions_now = now.search.total_expansions;
  if (now.trajectory) {
    record.cost_now = now.trajectory->duration;
  }

  std::optional<UpdatedTrajectory> updated;
  std::optional<Trajectory> repaired;
  const Trajectory * candidate = nullptr;
  CandidateKind kind = CandidateKind::Updated;
  Route fallback = Route::First;

  if (next.previous) {
    updated = update_previous(*next.previous, x_now.position(), map);
    record.cost_prev_updated = updated->trajectory.duration;
    fallback = Route::New;
    if (config.arbitrate) {
      if (!updated->in_collision) {
        candidate = &updated->trajectory;
      } else {
        fallback = Route::RepairFailedFallback;
        if (config.repair.enabled) {
          auto fixed = repair(updated->trajectory, map, config, next.next_id++, cycle);
          record.expansions_repair = fixed.expansions;
          if (fixed.trajectory) {
            repaired = std::move(fixed.trajectory);
            record.cost_prev_repaired = repaired->duration;
            candidate = &*repaired;
            kind = CandidateKind::Repaired;
          }
        }
      }
      if (candidate != nullptr && config.divergence_threshold && now.trajectory &&
          distance_to_path(*candidate, x_now.position()) > *config.divergence_threshold) {
        candidate = nullptr;
        fallback = Route::New;
        record.diverged = true;
      }
    }
  }

  Trajectory selected;
  if (now.trajectory) {
    const auto sel = select(*now.trajectory, candidate, kind, config.alpha, fallback);
    record.route = sel.route;
    selected = *sel.selected;
  } else if (candidate != nullptr) {
    record.route = kind == CandidateKind::Updated ? Route::Keep : Route::Repair;
    selected = *candidate;
  } else {
    throw PlanningFailed("no fresh plan and no usable previous trajectory");
  }
  record.selected_id = selected.id;

  if (updated) {
    const double spacing = map.resolution();
    const auto a = trajectory_points(selected, spacing);
    const auto b = trajectory_points(updated->trajectory, spacing);
    // Identical shapes split at different vertices resample with last-bit noise.
    constexpr double same_shape = 1e-9;
    auto snap = [](double v) { return v < same_shape ? 0.0 : v; };
    record.mhd = snap(mhd(a, b));
    record.mhd_directed = snap(directed_mhd(a, b));
  }

  next.previous = selected;
  next.cycle_index = cycle + 1;
  return {std::move(selected), record, std::move(next)};
}

}  // namespace replan
