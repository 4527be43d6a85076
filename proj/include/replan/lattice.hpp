#pragma once

#include "replan/gridmap.hpp"
#include "replan/trajectory.hpp"

#include <cstdint>
#include <optional>
#include <string>
#include <utility>
#include <vector>

namespace replan
{

/// Lattice node. Positions are cell indices of the map, so states built from
/// different primitive sequences compare exactly equal.
struct LatticeState
{
  int x{0};
  int y{0};
  int heading{0};

  friend bool operator==(const LatticeState &, const LatticeState &) = default;
};

struct MotionPrimitive
{
  int start_heading{0};
  int dx{0};  // cells
  int dy{0};  // cells
  int dh{0};  // heading steps, end = (start + dh) mod H
  double arc_length{0.0};
  std::vector<CellIndex> swath;  // relative to the start cell
  std::vector<Point2> via;       // interior shape points relative to the start cell center

  friend bool operator==(const MotionPrimitive &, const MotionPrimitive &) = default;
};

struct ControlSet
{
  int headings{16};
  double spacing{1.0};
  double resolution{kDefaultResolution};
  std::vector<std::vector<MotionPrimitive>> by_heading;

  double heading_angle(int h) const;
  int nearest_heading(double angle) const;
  const std::vector<MotionPrimitive> & at(int heading) const
  {
    return by_heading[static_cast<std::size_t>(heading)];
  }
  LatticeState apply(const MotionPrimitive & p, const LatticeState & s) const;
};

/// Per heading: a straight move of `spacing`, a short straight move, and a
/// gentle turn to either neighbouring heading. Throws UnsupportedHeadingCount
/// unless headings is 8 or 16, InvalidArgument unless spacing is a positive
/// multiple of resolution.
ControlSet build_control_set(int headings, double spacing, double resolution = kDefaultResolution);

std::string control_set_to_json(const ControlSet & set);

std::optional<double> edge_duration(
  const MotionPrimitive & primitive, const LatticeState & start, const CostMap & map);

std::vector<std::pair<LatticeState, double>> successors(
  const LatticeState & state, const CostMap & map, const ControlSet & set);

/// Dense-index adapter of the full lattice for graph search.
class LatticeGraph
{
public:
  LatticeGraph(const CostMap & map, const ControlSet & set) : map_(&map), set_(&set) {}

  std::size_t size() const
  {
    return static_cast<std::size_t>(map_->width()) * static_cast<std::size_t>(map_->height()) *
           static_cast<std::size_t>(set_->headings);
  }
  std::size_t index(const LatticeState & s) const
  {
    return (static_cast<std::size_t>(s.y) * static_cast<std::size_t>(map_->width()) +
            static_cast<std::size_t>(s.x)) *
             static_cast<std::size_t>(set_->headings) +
           static_cast<std::size_t>(s.heading);
  }
  LatticeState state(std::size_t id) const;
  Point2 position(std::size_t id) const;

  void successors(std::size_t id, std::vector<std::pair<std::size_t, double>> & out) const;

  const CostMap & map() const { return *map_; }
  const ControlSet & control_set() const { return *set_; }

private:
  const CostMap * map_;
  const ControlSet * set_;
};

/// Nearest lattice state to a pose, or nullopt when the pose is off-map.
std::optional<LatticeState> snap_to_lattice(const Pose2 & pose, const CostMap & map, const ControlSet & set);

/// Builds the trajectory traced by consecutive lattice states. Throws
/// InvalidArgument when two states are not joined by a primitive.
Trajectory trajectory_from_states(
  const std::vector<LatticeState> & states, const CostMap & map, const ControlSet & set,
  std::uint64_t id = 0, int birth_cycle = 0);

}  // namespace replan
