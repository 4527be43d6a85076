#pragma once

#include "replan/geometry.hpp"
#include "replan/trajectory.hpp"

#include <optional>
#include <span>
#include <string>
#include <vector>

namespace replan
{

using PointSet = std::vector<Point2>;

/// Mean over a in A of the distance to the nearest b in B. Throws EmptySet.
double directed_mhd(std::span<const Point2> a, std::span<const Point2> b);

/// Symmetric modified Hausdorff distance: the larger of both directed values.
double mhd(std::span<const Point2> a, std::span<const Point2> b);

/// Positions every `spacing` meters of arc length, plus the final point.
/// Throws EmptyTrajectory, InvalidArgument for spacing <= 0.
PointSet trajectory_points(const Trajectory & t, double spacing);

inline constexpr double kDefaultMhdThreshold = 0.2;

struct StabilitySummary
{
  std::string label;
  std::optional<double> mean_filtered_mhd;  // absent when nothing passes the filter
  std::size_t filtered_count{0};
  std::size_t zero_count{0};
  std::size_t raw_count{0};
  double threshold{kDefaultMhdThreshold};
};

/// Keeps values >= threshold for the mean; zeros are counted exactly.
StabilitySummary summarize(std::span<const double> mhds, double threshold, std::string label);

std::string summary_csv_header();
std::string summary_csv_row(const StabilitySummary & s, std::optional<double> alpha);

}  // namespace replan
