#include "replan/aligned_lattice.hpp"

#include "replan/errors.hpp"
#include "replan/raster.hpp"

#include <cmath>

namespace replan
{

namespace
{

Point2 left_normal(Point2 a, Point2 b)
{
  const double len = distance(a, b);
  return {-(b.y - a.y) / len, (b.x - a.x) / len};
}

struct BasePath
{
  std::vector<Point2> points;
  std::vector<double> cum;          // arc position of each point
  std::vector<Point2> seg_normal;   // per segment
  std::vector<Point2> vertex_normal;

  explicit BasePath(const std::vector<Point2> & raw)
  {
    for (const auto & p : raw) {
      if (points.empty() || distance(points.back(), p) > 1e-12) {
        points.push_back(p);
      }
    }
    cum.assign(points.size(), 0.0);
    for (std::size_t k = 1; k < points.size(); ++k) {
      cum[k] = cum[k - 1] + distance(points[k - 1], points[k]);
      seg_normal.push_back(left_normal(points[k - 1], points[k]));
    }
    vertex_normal.resize(points.size());
    for (std::size_t k = 0; k < points.size() && !seg_normal.empty(); ++k) {
      if (k == 0) {
        vertex_normal[k] = seg_normal.front();
      } else if (k + 1 == points.size()) {
        vertex_normal[k] = seg_normal.back();
      } else {
        const Point2 sum{seg_normal[k - 1].x + seg_normal[k].x, seg_normal[k - 1].y + seg_normal[k].y};
        const double len = std::hypot(sum.x, sum.y);
        vertex_normal[k] = len > 1e-9 ? Point2{sum.x / len, sum.y / len} : seg_normal[k];
      }
    }
  }

  double length() const { return cum.empty() ? 0.0 : cum.back(); }

  Station station_at(double s) const
  {
    constexpr double eps = 1e-9;
    Station st;
    st.arc_position = s;
    for (std::size_t k = 0; k < points.size(); ++k) {
      if (std::abs(cum[k] - s) <= eps) {
        st.point = points[k];
        st.normal = vertex_normal[k];
        st.heading = std::atan2(-st.normal.x, st.normal.y);
        return st;
      }
    }
    std::size_t seg = 0;
    while (seg + 2 < points.size() && cum[seg + 1] < s) {
      ++seg;
    }
    const double len = cum[seg + 1] - cum[seg];
    st.point = lerp(points[seg], points[seg + 1], (s - cum[seg]) / len);
    st.normal = seg_normal[seg];
    st.heading = std::atan2(-st.normal.x, st.normal.y);
    return st;
  }
};

Point2 offset_point(Point2 p, Point2 n, double d) { return {p.x + d * n.x, p.y + d * n.y}; }

}  // namespace

Point2 AlignedLattice::position(std::size_t station, int lateral) const
{
  const auto & st = stations[station];
  return offset_point(st.point, st.normal, offsets[static_cast<std::size_t>(lateral)]);
}

const AlignedEdge * AlignedLattice::edge(std::size_t station, int from, int to) const
{
  if (station >= edges.size()) {
    return nullptr;
  }
  for (const auto & e : edges[station]) {
    if (e.from == from && e.to == to) {
      return &e;
    }
  }
  return nullptr;
}

void AlignedLattice::successors(std::size_t id, std::vector<std::pair<std::size_t, double>> & out) const
{
  out.clear();
  const auto [station, lateral] = node(id);
  if (station + 1 >= stations.size()) {
    return;
  }
  for (const auto & e : edges[station]) {
    if (e.from == lateral && e.duration) {
      out.emplace_back(node_id(station + 1, e.to), *e.duration);
    }
  }
}

AlignedLattice build_aligned_lattice(
  const Trajectory & base, double lateral_width, double lateral_spacing, double station_spacing,
  const CostMap & map)
{
  if (!(lateral_spacing > 0.0) || !(station_spacing > 0.0)) {
    throw InvalidArgument("lateral and station spacing must be positive");
  }
  if (lateral_width < 0.0) {
    throw InvalidArgument("lateral width must be non-negative");
  }
  if (base.waypoints.size() < 2) {
    throw DegenerateBase("aligned lattice needs a base with at least two waypoints");
  }
  const BasePath path(base.polyline());
  const double total = path.length();
  if (path.points.size() < 2 || total < 1e-9) {
    throw DegenerateBase("aligned lattice base has zero length");
  }

  AlignedLattice lat;
  lat.base = base;

  std::vector<double> positions;
  const auto whole = static_cast<int>(std::floor(total / station_spacing + 1e-9));
  for (int m = 0; m <= whole; ++m) {
    positions.push_back(m * station_spacing);
  }
  // Fold a short remainder into the last interval instead of adding a sliver.
  if (positions.size() > 1 && total - positions.back() <= 0.5 * station_spacing) {
    positions.back() = total;
  } else if (total - positions.back() > 1e-9) {
    positions.push_back(total);
  }
  for (const double s : positions) {
    lat.stations.push_back(path.station_at(s));
  }

  const int half = static_cast<int>(std::floor(lateral_width / lateral_spacing + 1e-9));
  for (int k = -half; k <= half; ++k) {
    lat.offsets.push_back(k * lateral_spacing);
  }

  const int lateral_count = lat.lateral_count();
  lat.edges.resize(lat.stations.size() - 1);
  for (std::size_t i = 0; i + 1 < lat.stations.size(); ++i) {
    const double s0 = lat.stations[i].arc_position;
    const double s1 = lat.stations[i + 1].arc_position;
    std::vector<std::size_t> interior;
    for (std::size_t v = 0; v < path.points.size(); ++v) {
      if (path.cum[v] > s0 + 1e-9 && path.cum[v] < s1 - 1e-9) {
        interior.push_back(v);
      }
    }
    for (int from = 0; from < lateral_count; ++from) {
      for (int to = from - AlignedLattice::kBranchLimit; to <= from + AlignedLattice::kBranchLimit; ++to) {
        if (to < 0 || to >= lateral_count) {
          continue;
        }
        const double d0 = lat.offsets[static_cast<std::size_t>(from)];
        const double d1 = lat.offsets[static_cast<std::size_t>(to)];
        std::vector<Point2> shape{lat.position(i, from)};
        for (const std::size_t v : interior) {
          const double f = (path.cum[v] - s0) / (s1 - s0);
          shape.push_back(offset_point(path.points[v], path.vertex_normal[v], d0 + (d1 - d0) * f));
        }
        shape.push_back(lat.position(i + 1, to));

        AlignedEdge e;
        e.from = from;
        e.to = to;
        e.via.assign(shape.begin() + 1, shape.end() - 1);
        e.arc_length = polyline_length(shape);
        e.swath = trace_polyline(shape, map.resolution(), map.origin());
        e.duration = swath_duration(e.swath, e.arc_length, map);
        lat.edges[i].push_back(std::move(e));
      }
    }
  }
  return lat;
}

Trajectory trajectory_from_aligned_path(
  const AlignedLattice & lattice, const std::vector<std::size_t> & path, std::uint64_t id,
  int birth_cycle)
{
  Trajectory t;
  t.id = id;
  t.birth_cycle = birth_cycle;
  for (std::size_t k = 0; k < path.size(); ++k) {
    const auto [station, lateral] = lattice.node(path[k]);
    const Point2 p = lattice.position(station, lateral);
    t.waypoints.push_back({{p.x, p.y, lattice.stations[station].heading}, 0.0});
    if (k + 1 == path.size()) {
      break;
    }
    const auto [next_station, next_lateral] = lattice.node(path[k + 1]);
    const AlignedEdge * e =
      next_station == station + 1 ? lattice.edge(station, lateral, next_lateral) : nullptr;
    if (e == nullptr) {
      throw InvalidArgument("aligned path visits unconnected nodes");
    }
    TrajectoryEdge te;
    te.via = e->via;
    te.swath = e->swath;
    te.arc_length = e->arc_length;
    te.feasible = e->feasible();
    te.duration = e->duration.value_or(e->arc_length / lattice.base.length() * lattice.base.duration);
    t.edges.push_back(std::move(te));
  }
  t.retime();
  return t;
}

}  // namespace replan
