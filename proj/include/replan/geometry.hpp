#pragma once

#include <cmath>
#include <numbers>

namespace replan
{

struct Point2
{
  double x{0.0};
  double y{0.0};

  friend bool operator==(const Point2 &, const Point2 &) = default;
};

/// Planar pose; heading in radians, counter-clockwise from +x.
struct Pose2
{
  double x{0.0};
  double y{0.0};
  double heading{0.0};

  Point2 position() const { return {x, y}; }

  friend bool operator==(const Pose2 &, const Pose2 &) = default;
};

inline double distance(const Point2 & a, const Point2 & b) { return std::hypot(a.x - b.x, a.y - b.y); }

inline Point2 lerp(const Point2 & a, const Point2 & b, double t)
{
  return {a.x + (b.x - a.x) * t, a.y + (b.y - a.y) * t};
}

/// Wraps an angle into [-pi, pi).
inline double normalize_angle(double a)
{
  constexpr double two_pi = 2.0 * std::numbers::pi;
  a = std::fmod(a + std::numbers::pi, two_pi);
  if (a < 0.0) {
    a += two_pi;
  }
  return a - std::numbers::pi;
}

}  // namespace replan
