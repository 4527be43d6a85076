#include "replan/raster.hpp"

#include <algorithm>
#include <cmath>
#include <cstdlib>
#include <limits>
#include <set>

namespace replan
{

std::vector<CellIndex> supercover(Point2 a, Point2 b, double resolution, Point2 origin)
{
  const double ax = (a.x - origin.x) / resolution;
  const double ay = (a.y - origin.y) / resolution;
  const double bx = (b.x - origin.x) / resolution;
  const double by = (b.y - origin.y) / resolution;

  int i = static_cast<int>(std::floor(ax));
  int j = static_cast<int>(std::floor(ay));
  const int i_end = static_cast<int>(std::floor(bx));
  const int j_end = static_cast<int>(std::floor(by));

  std::vector<CellIndex> cells{{i, j}};
  const double dx = bx - ax;
  const double dy = by - ay;
  constexpr double inf = std::numeric_limits<double>::infinity();
  const int step_i = dx > 0.0 ? 1 : (dx < 0.0 ? -1 : 0);
  const int step_j = dy > 0.0 ? 1 : (dy < 0.0 ? -1 : 0);
  const double delta_i = step_i != 0 ? 1.0 / std::abs(dx) : inf;
  const double delta_j = step_j != 0 ? 1.0 / std::abs(dy) : inf;
  double t_i = step_i > 0 ? (i + 1 - ax) / dx : (step_i < 0 ? (ax - i) / -dx : inf);
  double t_j = step_j > 0 ? (j + 1 - ay) / dy : (step_j < 0 ? (ay - j) / -dy : inf);

  const int max_steps = std::abs(i_end - i) + std::abs(j_end - j) + 2;
  constexpr double corner_eps = 1e-12;
  for (int n = 0; n < max_steps && (i != i_end || j != j_end); ++n) {
    if (std::abs(t_i - t_j) < corner_eps) {
      if (t_i > 1.0) {
        break;
      }
      cells.push_back({i + step_i, j});
      cells.push_back({i, j + step_j});
      i += step_i;
      j += step_j;
      t_i += delta_i;
      t_j += delta_j;
    } else if (t_i < t_j) {
      if (t_i > 1.0) {
        break;
      }
      i += step_i;
      t_i += delta_i;
    } else {
      if (t_j > 1.0) {
        break;
      }
      j += step_j;
      t_j += delta_j;
    }
    cells.push_back({i, j});
  }
  if (cells.back() != CellIndex{i_end, j_end}) {
    cells.push_back({i_end, j_end});
  }
  return cells;
}

std::vector<CellIndex> trace_polyline(std::span<const Point2> points, double resolution, Point2 origin)
{
  std::vector<CellIndex> out;
  if (points.empty()) {
    return out;
  }
  std::set<CellIndex> seen;
  auto add = [&](const CellIndex & c) {
    if (seen.insert(c).second) {
      out.push_back(c);
    }
  };
  if (points.size() == 1) {
    add(supercover(points[0], points[0], resolution, origin).front());
    return out;
  }
  for (std::size_t k = 0; k + 1 < points.size(); ++k) {
    for (const auto & c : supercover(points[k], points[k + 1], resolution, origin)) {
      add(c);
    }
  }
  return out;
}

double polyline_length(std::span<const Point2> points)
{
  double total = 0.0;
  for (std::size_t k = 0; k + 1 < points.size(); ++k) {
    total += distance(points[k], points[k + 1]);
  }
  return total;
}

}  // namespace replan
