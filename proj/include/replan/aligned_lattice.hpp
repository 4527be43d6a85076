#pragma once

#include "replan/gridmap.hpp"
#include "replan/trajectory.hpp"

#include <optional>
#include <utility>
#include <vector>

namespace replan
{

struct Station
{
  double arc_position{0.0};  // along the base polyline
  Point2 point;
  double heading{0.0};
  Point2 normal;  // unit, left of the heading
};

/// Connection between lateral sample `from` at station i and `to` at station i+1.
struct AlignedEdge
{
  int from{0};  // lateral index into AlignedLattice::offsets
  int to{0};
  std::vector<Point2> via;
  std::vector<CellIndex> swath;
  double arc_length{0.0};
  std::optional<double> duration;  // nullopt: blocked or off-map

  bool feasible() const { return duration.has_value(); }
};

/// Lattice of lateral samples around a base trajectory.
///
/// Node (i, k) sits at stations[i].point + offsets[k] * stations[i].normal.
/// Edges follow the base shape between consecutive stations while the lateral
/// offset blends linearly; with equal offsets at 0 they trace the base exactly.
/// Blocked edges stay in the structure, flagged infeasible.
class AlignedLattice
{
public:
  static constexpr int kBranchLimit = 1;

  std::vector<Station> stations;
  std::vector<double> offsets;  // ascending, symmetric about 0
  std::vector<std::vector<AlignedEdge>> edges;  // edges[i]: station i -> i+1
  Trajectory base;

  int lateral_count() const { return static_cast<int>(offsets.size()); }
  int center_index() const { return lateral_count() / 2; }
  std::size_t size() const { return stations.size() * offsets.size(); }
  std::size_t node_id(std::size_t station, int lateral) const
  {
    return station * offsets.size() + static_cast<std::size_t>(lateral);
  }
  std::pair<std::size_t, int> node(std::size_t id) const
  {
    return {id / offsets.size(), static_cast<int>(id % offsets.size())};
  }
  Point2 position(std::size_t station, int lateral) const;

  const AlignedEdge * edge(std::size_t station, int from, int to) const;

  void successors(std::size_t id, std::vector<std::pair<std::size_t, double>> & out) const;
};

/// Throws DegenerateBase when the base has fewer than two waypoints or zero
/// length, InvalidArgument on non-positive spacings or width < spacing.
AlignedLattice build_aligned_lattice(
  const Trajectory & base, double lateral_width, double lateral_spacing, double station_spacing,
  const CostMap & map);

/// Trajectory following a path of node ids through the lattice.
Trajectory trajectory_from_aligned_path(
  const AlignedLattice & lattice, const std::vector<std::size_t> & path, std::uint64_t id = 0,
  int birth_cycle = 0);

}  // namespace replan
