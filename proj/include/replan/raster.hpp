#pragma once

#include "replan/geometry.hpp"
#include "replan/gridmap.hpp"

#include <span>
#include <vector>

namespace replan
{

/// Every cell the segment a->b touches, in traversal order. Both cells are
/// emitted when the segment passes exactly through a cell corner. Cells may lie
/// outside the map.
std::vector<CellIndex> supercover(Point2 a, Point2 b, double resolution, Point2 origin);

/// Supercover of a polyline; each cell appears once, in order of first visit.
std::vector<CellIndex> trace_polyline(std::span<const Point2> points, double resolution, Point2 origin);

double polyline_length(std::span<const Point2> points);

}  // namespace replan
