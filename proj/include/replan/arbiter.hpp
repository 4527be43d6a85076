#pragma once

#include "replan/gridmap.hpp"
#include "replan/lattice.hpp"
#include "replan/search.hpp"
#include "replan/trajectory.hpp"

#include <cstdint>
#include <optional>
#include <string>
#include <string_view>

namespace replan
{

struct RepairConfig
{
  bool enabled{true};
  double lateral_width{5 * kDefaultResolution};
  double lateral_spacing{kDefaultResolution};
  double station_spacing{1.0};
};

struct LatticeConfig
{
  int headings{16};
  double primitive_spacing{1.0};
};

inline constexpr double kDefaultDivergenceThreshold = 3.0;

struct ArbiterConfig
{
  double alpha{0.95};
  RepairConfig repair;
  SearchConfig search;
  LatticeConfig lattice;
  /// Distance from the kept trajectory beyond which t_now is forced. Disabled when empty.
  std::optional<double> divergence_threshold;
  /// When false every cycle publishes the fresh plan (the baseline planner).
  bool arbitrate{true};

  /// Throws InvalidArgument.
  void validate() const;
};

enum class Route { First, New, Keep, Repair, RepairFailedFallback };

std::string_view to_string(Route r);
std::optional<Route> route_from_string(std::string_view s);

struct ArbiterState
{
  std::optional<Trajectory> previous;
  int cycle_index{0};
  std::optional<Point2> goal;
  std::uint64_t next_id{1};
};

struct CycleRecord
{
  int cycle{0};
  Route route{Route::First};
  std::optional<double> cost_now;
  std::optional<double> cost_prev_updated;
  std::optional<double> cost_prev_repaired;
  std::uint64_t selected_id{0};
  /// Against the previous selection trimmed to the current pose; absent on a fresh start.
  std::optional<double> mhd;
  std::optional<double> mhd_directed;
  double alpha{1.0};
  bool diverged{false};
  std::size_t expansions_now{0};
  std::size_t expansions_repair{0};

  friend bool operator==(const CycleRecord &, const CycleRecord &) = default;
};

struct UpdatedTrajectory
{
  Trajectory trajectory;
  bool in_collision{false};
};

/// Drops the waypoints before the one nearest to x_now (earlier index on ties)
/// and re-costs the remaining edges on `map`. Blocked edges keep their previous
/// duration and flag a collision. Throws EmptyTrajectory.
UpdatedTrajectory update_previous(const Trajectory & previous, Point2 x_now, const CostMap & map);

struct RepairOutcome
{
  std::optional<Trajectory> trajectory;  // empty: repair failed
  SearchStatus status{SearchStatus::NoPath};
  std::size_t expansions{0};
};

/// Searches the lateral lattice around `updated` between its end points.
RepairOutcome repair(
  const Trajectory & updated, const CostMap & map, const ArbiterConfig & config,
  std::uint64_t id = 0, int birth_cycle = 0);

/// The fresh plan wins only when strictly cheaper than alpha times the candidate.
inline bool prefer_new(double cost_now, double cost_candidate, double alpha)
{
  return cost_now < alpha * cost_candidate;
}

enum class CandidateKind { Updated, Repaired };

struct Selection
{
  const Trajectory * selected;
  Route route;
};

/// `fallback` is the route reported when no candidate exists.
Selection select(
  const Trajectory & now, const Trajectory * candidate, CandidateKind kind, double alpha,
  Route fallback = Route::First);

struct PlanOutcome
{
  std::optional<Trajectory> trajectory;
  SearchResult search;
};

/// Plans on the full state lattice from the pose to the goal region.
PlanOutcome plan_trajectory(
  const CostMap & map, const Pose2 & start, Point2 goal, const ArbiterConfig & config,
  std::uint64_t id = 0, int birth_cycle = 0, const ExpansionObserver & observer = {});

struct CycleOutput
{
  Trajectory selected;
  CycleRecord record;
  ArbiterState state;
};

/// One planning cycle. Throws PlanningFailed when neither a fresh plan nor a
/// usable previous trajectory exists, PoseOutOfBounds for off-map poses.
CycleOutput plan_cycle(
  const ArbiterState & state, const Pose2 & x_now, Point2 x_goal, const CostMap & map,
  const ArbiterConfig & config, const ExpansionObserver & observer = {});

}  // namespace replan
