#include "replan/metrics.hpp"

#include "replan/errors.hpp"
#include "replan/format.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <numeric>
#include <sstream>

namespace replan
{

double directed_mhd(std::span<const Point2> a, std::span<const Point2> b)
{
  if (a.empty() || b.empty()) {
    throw EmptySet("modified Hausdorff distance needs two non-empty point sets");
  }
  // Nearest neighbour by sweeping outward from each query's x position in B
  // sorted by x; stops once the x gap alone exceeds the best distance.
  std::vector<Point2> sorted(b.begin(), b.end());
  std::sort(sorted.begin(), sorted.end(), [](const Point2 & p, const Point2 & q) {
    return p.x < q.x || (p.x == q.x && p.y < q.y);
  });
  double sum = 0.0;
  for (const auto & p : a) {
    const auto mid = std::lower_bound(
      sorted.begin(), sorted.end(), p.x, [](const Point2 & q, double x) { return q.x < x; });
    double best = std::numeric_limits<double>::infinity();
    for (auto it = mid; it != sorted.end() && it->x - p.x < best; ++it) {
      best = std::min(best, distance(p, *it));
    }
    for (auto it = mid; it != sorted.begin();) {
      --it;
      if (p.x - it->x >= best) {
        break;
      }
      best = std::min(best, distance(p, *it));
    }
    sum += best;
  }
  return sum / static_cast<double>(a.size());
}

double mhd(std::span<const Point2> a, std::span<const Point2> b)
{
  return std::max(directed_mhd(a, b), directed_mhd(b, a));
}

PointSet trajectory_points(const Trajectory & t, double spacing)
{
  if (t.empty()) {
    throw EmptyTrajectory("cannot resample an empty trajectory");
  }
  if (!(spacing > 0.0)) {
    throw InvalidArgument("resampling spacing must be positive");
  }
  const auto line = t.polyline();
  PointSet out{line.front()};
  double next = spacing;   // arc position of the next sample
  double walked = 0.0;     // arc position of line[k]
  for (std::size_t k = 0; k + 1 < line.size(); ++k) {
    const double len = distance(line[k], line[k + 1]);
    while (len > 0.0 && next <= walked + len + 1e-9) {
      out.push_back(lerp(line[k], line[k + 1], std::min(1.0, (next - walked) / len)));
      next += spacing;
    }
    walked += len;
  }
  if (distance(out.back(), line.back()) > 1e-9) {
    out.push_back(line.back());
  } else {
    out.back() = line.back();
  }
  return out;
}

StabilitySummary summarize(std::span<const double> mhds, double threshold, std::string label)
{
  if (threshold < 0.0) {
    throw InvalidArgument("filter threshold must be non-negative");
  }
  StabilitySummary s;
  s.label = std::move(label);
  s.threshold = threshold;
  s.raw_count = mhds.size();
  double sum = 0.0;
  for (const double v : mhds) {
    if (v == 0.0) {
      ++s.zero_count;
    }
    if (v >= threshold) {
      ++s.filtered_count;
      sum += v;
    }
  }
  if (s.filtered_count > 0) {
    s.mean_filtered_mhd = sum / static_cast<double>(s.filtered_count);
  }
  return s;
}

std::string summary_csv_header()
{
  return "label,alpha,mean_filtered_mhd,filtered_count,zero_count,raw_count,threshold";
}

std::string summary_csv_row(const StabilitySummary & s, std::optional<double> alpha)
{
  std::ostringstream os;
  os << s.label << ',';
  if (alpha) {
    os << format_number(*alpha);
  }
  os << ',';
  if (s.mean_filtered_mhd) {
    os << format_number(*s.mean_filtered_mhd);
  }
  os << ',' << s.filtered_count << ',' << s.zero_count << ',' << s.raw_count << ','
     << format_number(s.threshold);
  return os.str();
}

}  // namespace replan
