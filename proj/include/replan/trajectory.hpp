#pragma once

#include "replan/geometry.hpp"
#include "replan/gridmap.hpp"

#include <cstdint>
#include <optional>
#include <span>
#include <vector>

namespace replan
{

struct Waypoint
{
  Pose2 pose;
  double arrival_time{0.0};

  friend bool operator==(const Waypoint &, const Waypoint &) = default;
};

/// Connection between two consecutive waypoints.
struct TrajectoryEdge
{
  std::vector<Point2> via;        // interior shape points, endpoints excluded
  std::vector<CellIndex> swath;   // absolute cells swept
  double arc_length{0.0};
  double duration{0.0};
  bool feasible{true};

  friend bool operator==(const TrajectoryEdge &, const TrajectoryEdge &) = default;
};

/// Time-parameterized path. Edge i joins waypoints i and i+1; arrival times are
/// the running sum of edge durations starting at 0.
struct Trajectory
{
  std::vector<Waypoint> waypoints;
  std::vector<TrajectoryEdge> edges;
  double duration{0.0};
  std::uint64_t id{0};
  int birth_cycle{0};

  bool empty() const { return waypoints.empty(); }
  /// Waypoints and edge via points in path order.
  std::vector<Point2> polyline() const;
  double length() const;
  /// Recomputes arrival times and duration from the edge durations.
  void retime();

  friend bool operator==(const Trajectory &, const Trajectory &) = default;
};

/// Time to traverse `arc_length` spread equally over the swath cells, or
/// nullopt when a cell is blocked or off-map.
std::optional<double> swath_duration(
  std::span<const CellIndex> swath, double arc_length, const CostMap & map);

/// Position reached `time` seconds along the trajectory (clamped to its ends),
/// interpolated along each edge's shape in proportion to elapsed edge time.
Pose2 pose_at_time(const Trajectory & t, double time);

/// Time at the point of the trajectory closest to `p`.
double time_at_projection(const Trajectory & t, Point2 p);

/// Distance from `p` to the nearest point on the trajectory's polyline.
double distance_to_path(const Trajectory & t, Point2 p);

}  // namespace replan
