#pragma once

// Independent reference implementations used to derive and check expected values.

#include "replan/geometry.hpp"
#include "replan/gridmap.hpp"

#include <cmath>
#include <functional>
#include <limits>
#include <queue>
#include <utility>
#include <vector>

namespace oracle
{

/// Plain Dijkstra to the cheapest goal node; +inf when unreachable.
template <class Graph>
double dijkstra(const Graph & graph, std::size_t start, const std::function<bool(std::size_t)> & is_goal)
{
  const double inf = std::numeric_limits<double>::infinity();
  std::vector<double> dist(graph.size(), inf);
  using Item = std::pair<double, std::size_t>;
  std::priority_queue<Item, std::vector<Item>, std::greater<>> pq;
  dist[start] = 0.0;
  pq.push({0.0, start});
  std::vector<std::pair<std::size_t, double>> succ;
  while (!pq.empty()) {
    const auto [d, s] = pq.top();
    pq.pop();
    if (d > dist[s]) {
      continue;
    }
    if (is_goal(s)) {
      return d;
    }
    graph.successors(s, succ);
    for (const auto & [t, c] : succ) {
      if (d + c < dist[t]) {
        dist[t] = d + c;
        pq.push({dist[t], t});
      }
    }
  }
  return inf;
}

/// O(|A||B|) directed modified Hausdorff distance.
inline double directed_mhd(const std::vector<replan::Point2> & a, const std::vector<replan::Point2> & b)
{
  double sum = 0.0;
  for (const auto & p : a) {
    double best = std::numeric_limits<double>::infinity();
    for (const auto & q : b) {
      best = std::min(best, std::hypot(p.x - q.x, p.y - q.y));
    }
    sum += best;
  }
  return sum / static_cast<double>(a.size());
}

/// Textbook 2-D gradient noise over a given permutation table: explicit
/// gradient vectors, quintic fade, bilinear blend of corner dot products.
inline double gradient_noise(const std::vector<int> & perm, double x, double y)
{
  static const double gradients[8][2] = {{1, 1}, {-1, 1}, {1, -1}, {-1, -1}, {1, 0}, {-1, 0}, {0, 1}, {0, -1}};
  const double x0 = std::floor(x);
  const double y0 = std::floor(y);
  const int cx = static_cast<int>(x0) & 255;
  const int cy = static_cast<int>(y0) & 255;
  const double fx = x - x0;
  const double fy = y - y0;
  auto corner = [&](int dx, int dy) {
    const int hash = perm[static_cast<std::size_t>(perm[static_cast<std::size_t>(cx + dx)] + cy + dy)] & 7;
    return gradients[hash][0] * (fx - dx) + gradients[hash][1] * (fy - dy);
  };
  auto fade = [](double t) { return 6 * std::pow(t, 5) - 15 * std::pow(t, 4) + 10 * std::pow(t, 3); };
  const double u = fade(fx);
  const double v = fade(fy);
  const double bottom = corner(0, 0) * (1 - u) + corner(1, 0) * u;
  const double top = corner(0, 1) * (1 - u) + corner(1, 1) * u;
  return std::clamp(bottom * (1 - v) + top * v, -1.0, 1.0);
}

inline double fractal_noise(const std::vector<int> & perm, double x, double y, const replan::NoiseParams & p)
{
  double total = 0.0;
  double norm = 0.0;
  for (int o = 0; o < p.octaves; ++o) {
    const double amp = std::pow(p.persistence, o);
    const double freq = std::pow(p.lacunarity, o);
    total += amp * gradient_noise(perm, x * freq, y * freq);
    norm += amp;
  }
  return std::clamp(total / norm, -1.0, 1.0);
}

/// Cells whose center lies within `radius` of `center` (inclusive or strict).
inline std::vector<replan::CellIndex> disk_cells(
  const replan::CostMap & map, replan::Point2 center, double radius, bool inclusive)
{
  std::vector<replan::CellIndex> out;
  for (int j = 0; j < map.height(); ++j) {
    for (int i = 0; i < map.width(); ++i) {
      const double d = replan::distance(map.cell_center({i, j}), center);
      if (inclusive ? d <= radius + 1e-9 : d < radius) {
        out.push_back({i, j});
      }
    }
  }
  return out;
}

}  // namespace oracle
