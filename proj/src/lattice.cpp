#include "replan/lattice.hpp"

#include "replan/errors.hpp"
#include "replan/raster.hpp"

#include "json.hpp"

#include <cmath>
#include <numbers>

namespace replan
{

double ControlSet::heading_angle(int h) const
{
  return normalize_angle(2.0 * std::numbers::pi * h / headings);
}

int ControlSet::nearest_heading(double angle) const
{
  const double step = 2.0 * std::numbers::pi / headings;
  const int h = static_cast<int>(std::lround(normalize_angle(angle) / step));
  return ((h % headings) + headings) % headings;
}

LatticeState ControlSet::apply(const MotionPrimitive & p, const LatticeState & s) const
{
  return {s.x + p.dx, s.y + p.dy, ((s.heading + p.dh) % headings + headings) % headings};
}

namespace
{

CellIndex round_offset(double length_cells, double angle)
{
  return {
    static_cast<int>(std::lround(length_cells * std::cos(angle))),
    static_cast<int>(std::lround(length_cells * std::sin(angle)))};
}

MotionPrimitive make_primitive(
  int h, CellIndex end, int dh, double start_angle, double end_angle, double resolution)
{
  MotionPrimitive p;
  p.start_heading = h;
  p.dx = end.i;
  p.dy = end.j;
  p.dh = dh;

  const Point2 e{end.i * resolution, end.j * resolution};
  std::vector<Point2> shape{{0.0, 0.0}};
  if (dh != 0) {
    // Cubic Hermite curve matching both end headings.
    const double chord = std::hypot(e.x, e.y);
    const Point2 t0{chord * std::cos(start_angle), chord * std::sin(start_angle)};
    const Point2 t1{chord * std::cos(end_angle), chord * std::sin(end_angle)};
    constexpr int samples = 8;
    for (int k = 1; k < samples; ++k) {
      const double s = static_cast<double>(k) / samples;
      const double h10 = s * s * s - 2 * s * s + s;
      const double h01 = -2 * s * s * s + 3 * s * s;
      const double h11 = s * s * s - s * s;
      shape.push_back({h10 * t0.x + h01 * e.x + h11 * t1.x, h10 * t0.y + h01 * e.y + h11 * t1.y});
    }
  }
  shape.push_back(e);
  p.via.assign(shape.begin() + 1, shape.end() - 1);
  p.arc_length = polyline_length(shape);
  // Start cell center sits at the origin, so cell (0, 0) spans [-res/2, res/2).
  p.swath = trace_polyline(shape, resolution, {-resolution / 2.0, -resolution / 2.0});
  return p;
}

}  // namespace

ControlSet build_control_set(int headings, double spacing, double resolution)
{
  if (headings != 8 && headings != 16) {
    throw UnsupportedHeadingCount("heading count must be 8 or 16, got " + std::to_string(headings));
  }
  if (!(resolution > 0.0) || !(spacing > 0.0)) {
    throw InvalidArgument("spacing and resolution must be positive");
  }
  const double ratio = spacing / resolution;
  const double cells = std::round(ratio);
  if (cells < 1.0 || std::abs(ratio - cells) > 1e-6) {
    throw InvalidArgument("primitive spacing must be a multiple of the map resolution");
  }

  ControlSet set;
  set.headings = headings;
  set.spacing = spacing;
  set.resolution = resolution;
  set.by_heading.resize(static_cast<std::size_t>(headings));

  for (int h = 0; h < headings; ++h) {
    const double a0 = set.heading_angle(h);
    auto & out = set.by_heading[static_cast<std::size_t>(h)];

    const CellIndex straight = round_offset(cells, a0);
    out.push_back(make_primitive(h, straight, 0, a0, a0, resolution));

    // Shortest straight whose rounded direction stays close to the heading.
    for (int m = 1; m < static_cast<int>(cells); ++m) {
      const CellIndex e = round_offset(m, a0);
      if (e.i == 0 && e.j == 0) {
        continue;
      }
      const double err = std::abs(normalize_angle(std::atan2(e.j, e.i) - a0));
      if (err < 0.2) {
        out.push_back(make_primitive(h, e, 0, a0, a0, resolution));
        break;
      }
    }

    for (int turn : {1, -1}) {
      const double a1 = set.heading_angle(h + turn);
      const double mid = a0 + normalize_angle(a1 - a0) / 2.0;
      out.push_back(make_primitive(h, round_offset(cells, mid), turn, a0, a1, resolution));
    }
  }
  return set;
}

std::string control_set_to_json(const ControlSet & set)
{
  nlohmann::ordered_json doc;
  doc["H"] = set.headings;
  doc["spacing"] = set.spacing;
  auto prims = nlohmann::ordered_json::array();
  for (const auto & list : set.by_heading) {
    for (const auto & p : list) {
      nlohmann::ordered_json j;
      j["h0"] = p.start_heading;
      j["dx"] = p.dx;
      j["dy"] = p.dy;
      j["dh"] = p.dh;
      j["arc"] = p.arc_length;
      auto swath = nlohmann::ordered_json::array();
      for (const auto & c : p.swath) {
        swath.push_back({c.i, c.j});
      }
      j["swath"] = std::move(swath);
      prims.push_back(std::move(j));
    }
  }
  doc["primitives"] = std::move(prims);
  return doc.dump();
}

std::optional<double> edge_duration(
  const MotionPrimitive & primitive, const LatticeState & start, const CostMap & map)
{
  if (primitive.swath.empty()) {
    return 0.0;
  }
  const double share = primitive.arc_length / static_cast<double>(primitive.swath.size());
  double total = 0.0;
  for (const auto & off : primitive.swath) {
    const CellIndex c{start.x + off.i, start.y + off.j};
    if (map.blocked(c)) {
      return std::nullopt;
    }
    total += share / map.at(c).speed;
  }
  return total;
}

std::vector<std::pair<LatticeState, double>> successors(
  const LatticeState & state, const CostMap & map, const ControlSet & set)
{
  std::vector<std::pair<LatticeState, double>> out;
  for (const auto & p : set.at(state.heading)) {
    if (const auto d = edge_duration(p, state, map)) {
      out.emplace_back(set.apply(p, state), *d);
    }
  }
  return out;
}

LatticeState LatticeGraph::state(std::size_t id) const
{
  const auto hcount = static_cast<std::size_t>(set_->headings);
  const auto w = static_cast<std::size_t>(map_->width());
  const std::size_t cell = id / hcount;
  return {static_cast<int>(cell % w), static_cast<int>(cell / w), static_cast<int>(id % hcount)};
}

Point2 LatticeGraph::position(std::size_t id) const
{
  const auto s = state(id);
  return map_->cell_center({s.x, s.y});
}

void LatticeGraph::successors(std::size_t id, std::vector<std::pair<std::size_t, double>> & out) const
{
  out.clear();
  const auto s = state(id);
  for (const auto & p : set_->at(s.heading)) {
    if (const auto d = edge_duration(p, s, *map_)) {
      out.emplace_back(index(set_->apply(p, s)), *d);
    }
  }
}

std::optional<LatticeState> snap_to_lattice(const Pose2 & pose, const CostMap & map, const ControlSet & set)
{
  const auto cell = map.cell_at(pose.position());
  if (!cell) {
    return std::nullopt;
  }
  return LatticeState{cell->i, cell->j, set.nearest_heading(pose.heading)};
}

Trajectory trajectory_from_states(
  const std::vector<LatticeState> & states, const CostMap & map, const ControlSet & set,
  std::uint64_t id, int birth_cycle)
{
  Trajectory t;
  t.id = id;
  t.birth_cycle = birth_cycle;
  for (std::size_t k = 0; k < states.size(); ++k) {
    const auto & s = states[k];
    const Point2 c = map.cell_center({s.x, s.y});
    t.waypoints.push_back({{c.x, c.y, set.heading_angle(s.heading)}, 0.0});
    if (k + 1 == states.size()) {
      break;
    }
    const MotionPrimitive * prim = nullptr;
    for (const auto & p : set.at(s.heading)) {
      if (set.apply(p, s) == states[k + 1]) {
        prim = &p;
        break;
      }
    }
    if (prim == nullptr) {
      throw InvalidArgument("consecutive lattice states are not joined by a primitive");
    }
    TrajectoryEdge e;
    for (const auto & v : prim->via) {
      e.via.push_back({c.x + v.x, c.y + v.y});
    }
    for (const auto & off : prim->swath) {
      e.swath.push_back({s.x + off.i, s.y + off.j});
    }
    e.arc_length = prim->arc_length;
    const auto d = edge_duration(*prim, s, map);
    e.feasible = d.has_value();
    e.duration = d.value_or(prim->arc_length / map.v_max());
    t.edges.push_back(std::move(e));
  }
  t.retime();
  return t;
}

}  // namespace replan
