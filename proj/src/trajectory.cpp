#include "replan/trajectory.hpp"

#include "replan/errors.hpp"
#include "replan/raster.hpp"

#include <algorithm>
#include <cmath>
#include <limits>

namespace replan
{

std::vector<Point2> Trajectory::polyline() const
{
  std::vector<Point2> out;
  for (std::size_t k = 0; k < waypoints.size(); ++k) {
    out.push_back(waypoints[k].pose.position());
    if (k < edges.size()) {
      out.insert(out.end(), edges[k].via.begin(), edges[k].via.end());
    }
  }
  return out;
}

double Trajectory::length() const { return polyline_length(polyline()); }

void Trajectory::retime()
{
  double t = 0.0;
  for (std::size_t k = 0; k < waypoints.size(); ++k) {
    waypoints[k].arrival_time = t;
    if (k < edges.size()) {
      t += edges[k].duration;
    }
  }
  duration = t;
}

std::optional<double> swath_duration(
  std::span<const CellIndex> swath, double arc_length, const CostMap & map)
{
  if (swath.empty()) {
    return 0.0;
  }
  const double share = arc_length / static_cast<double>(swath.size());
  double total = 0.0;
  for (const auto & c : swath) {
    if (map.blocked(c)) {
      return std::nullopt;
    }
    total += share / map.at(c).speed;
  }
  return total;
}

namespace
{

std::vector<Point2> edge_shape(const Trajectory & t, std::size_t k)
{
  std::vector<Point2> pts{t.waypoints[k].pose.position()};
  pts.insert(pts.end(), t.edges[k].via.begin(), t.edges[k].via.end());
  pts.push_back(t.waypoints[k + 1].pose.position());
  return pts;
}

Pose2 along_shape(const std::vector<Point2> & pts, double fraction)
{
  const double total = polyline_length(pts);
  double target = std::clamp(fraction, 0.0, 1.0) * total;
  for (std::size_t s = 0; s + 1 < pts.size(); ++s) {
    const double len = distance(pts[s], pts[s + 1]);
    const double heading = std::atan2(pts[s + 1].y - pts[s].y, pts[s + 1].x - pts[s].x);
    if (target <= len || s + 2 == pts.size()) {
      const Point2 p = len > 0.0 ? lerp(pts[s], pts[s + 1], std::min(1.0, target / len)) : pts[s];
      return {p.x, p.y, heading};
    }
    target -= len;
  }
  return {pts.back().x, pts.back().y, 0.0};
}

// Closest point on segment ab to p, as the parameter in [0, 1].
double project_segment(Point2 a, Point2 b, Point2 p)
{
  const double dx = b.x - a.x;
  const double dy = b.y - a.y;
  const double len2 = dx * dx + dy * dy;
  if (len2 == 0.0) {
    return 0.0;
  }
  return std::clamp(((p.x - a.x) * dx + (p.y - a.y) * dy) / len2, 0.0, 1.0);
}

}  // namespace

Pose2 pose_at_time(const Trajectory & t, double time)
{
  if (t.empty()) {
    throw EmptyTrajectory("pose_at_time on an empty trajectory");
  }
  if (t.edges.empty() || time <= 0.0) {
    if (t.edges.empty()) {
      return t.waypoints.front().pose;
    }
    const Pose2 p = along_shape(edge_shape(t, 0), 0.0);
    return {p.x, p.y, p.heading};
  }
  if (time >= t.duration) {
    const auto last = t.edges.size() - 1;
    return along_shape(edge_shape(t, last), 1.0);
  }
  for (std::size_t k = 0; k < t.edges.size(); ++k) {
    const double t0 = t.waypoints[k].arrival_time;
    const double t1 = t.waypoints[k + 1].arrival_time;
    if (time <= t1 || k + 1 == t.edges.size()) {
      const double span = t1 - t0;
      const double f = span > 0.0 ? (time - t0) / span : 1.0;
      return along_shape(edge_shape(t, k), f);
    }
  }
  return t.waypoints.back().pose;
}

double time_at_projection(const Trajectory & t, Point2 p)
{
  if (t.empty()) {
    throw EmptyTrajectory("time_at_projection on an empty trajectory");
  }
  double best_d = std::numeric_limits<double>::infinity();
  double best_time = 0.0;
  for (std::size_t k = 0; k < t.edges.size(); ++k) {
    const auto pts = edge_shape(t, k);
    const double total = polyline_length(pts);
    double before = 0.0;
    for (std::size_t s = 0; s + 1 < pts.size(); ++s) {
      const double len = distance(pts[s], pts[s + 1]);
      const double u = project_segment(pts[s], pts[s + 1], p);
      const double d = distance(lerp(pts[s], pts[s + 1], u), p);
      if (d < best_d) {
        best_d = d;
        const double frac = total > 0.0 ? (before + u * len) / total : 0.0;
        best_time = t.waypoints[k].arrival_time + frac * t.edges[k].duration;
      }
      before += len;
    }
  }
  return best_time;
}

double distance_to_path(const Trajectory & t, Point2 p)
{
  if (t.empty()) {
    throw EmptyTrajectory("distance_to_path on an empty trajectory");
  }
  const auto pts = t.polyline();
  double best = distance(pts.front(), p);
  for (std::size_t s = 0; s + 1 < pts.size(); ++s) {
    const double u = project_segment(pts[s], pts[s + 1], p);
    best = std::min(best, distance(lerp(pts[s], pts[s + 1], u), p));
  }
  return best;
}

}  // namespace replan
