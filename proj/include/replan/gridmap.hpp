#pragma once

#include "replan/geometry.hpp"

#include <cstdint>
#include <optional>
#include <span>
#include <string>
#include <string_view>
#include <vector>

namespace replan
{

enum class CellState : std::uint8_t { Unknown, Free, Obstacle, Inflated };

char to_char(CellState state);
std::optional<CellState> cell_state_from_char(char c);

struct Cell
{
  CellState state{CellState::Free};
  double speed{0.0};

  friend bool operator==(const Cell &, const Cell &) = default;
};

/// Grid cell address: i is the column (x), j the row (y).
struct CellIndex
{
  int i{0};
  int j{0};

  friend bool operator==(const CellIndex &, const CellIndex &) = default;
  friend auto operator<=>(const CellIndex &, const CellIndex &) = default;
};

inline constexpr double kDefaultResolution = 0.2;
inline constexpr double kDefaultUnknownSpeedFactor = 0.5;

/// Row-major occupancy grid with a per-cell speed limit.
///
/// Cell (i, j) covers [origin.x + i*res, origin.x + (i+1)*res) in x and likewise in y.
/// Speeds always agree with the cell state: blocked cells have speed 0, free cells
/// travel in (0, v_max], unknown cells at unknown_speed_factor * v_max.
class CostMap
{
public:
  CostMap(
    int width, int height, double resolution, Point2 origin, double v_max,
    CellState fill = CellState::Free,
    double unknown_speed_factor = kDefaultUnknownSpeedFactor);

  int width() const { return width_; }
  int height() const { return height_; }
  double resolution() const { return resolution_; }
  Point2 origin() const { return origin_; }
  double v_max() const { return v_max_; }
  double unknown_speed_factor() const { return unknown_speed_factor_; }
  std::size_t size() const { return cells_.size(); }

  bool contains(CellIndex c) const
  {
    return c.i >= 0 && c.j >= 0 && c.i < width_ && c.j < height_;
  }
  /// True when the point lies within the map's rectangular extent.
  bool contains(Point2 p) const;
  std::optional<CellIndex> cell_at(Point2 p) const;
  Point2 cell_center(CellIndex c) const
  {
    return {origin_.x + (c.i + 0.5) * resolution_, origin_.y + (c.j + 0.5) * resolution_};
  }
  std::size_t linear_index(CellIndex c) const
  {
    return static_cast<std::size_t>(c.j) * static_cast<std::size_t>(width_) +
           static_cast<std::size_t>(c.i);
  }

  const Cell & at(CellIndex c) const { return cells_[linear_index(c)]; }
  std::span<const Cell> cells() const { return cells_; }

  /// Sets the state and the state's default speed.
  void set_state(CellIndex c, CellState state);
  /// Sets state and speed together; throws InvalidArgument when they are inconsistent.
  void set_cell(CellIndex c, Cell cell);

  double default_speed(CellState state) const;

  /// Obstacle, Inflated or off-map cells block motion.
  bool blocked(CellIndex c) const
  {
    if (!contains(c)) {
      return true;
    }
    const auto s = at(c).state;
    return s == CellState::Obstacle || s == CellState::Inflated;
  }

  std::size_t count(CellState state) const;

  friend bool operator==(const CostMap &, const CostMap &) = default;

private:
  int width_;
  int height_;
  double resolution_;
  Point2 origin_;
  double v_max_;
  double unknown_speed_factor_;
  std::vector<Cell> cells_;
};

struct NoiseParams
{
  double frequency{0.3};  // cycles per meter at the first octave
  int octaves{3};
  double persistence{0.5};
  double lacunarity{2.0};
};

/// Seeded 2-D lattice gradient noise (improved Perlin gradients), output in [-1, 1].
class GradientNoise
{
public:
  explicit GradientNoise(std::uint64_t seed);

  double noise(double x, double y) const;
  /// Octave sum normalized by the total amplitude.
  double fractal(double x, double y, const NoiseParams & params) const;

  /// Doubled permutation table, perm[i] == perm[i + 256].
  const std::vector<int> & permutation() const { return perm_; }

private:
  std::vector<int> perm_;
};

CostMap generate_perlin_map(
  std::uint64_t seed, int width, int height, double resolution, double obstacle_threshold,
  double v_max, const NoiseParams & params = {});

/// Marks every Free/Unknown cell whose center is within footprint_radius of an
/// Obstacle cell center as Inflated.
CostMap inflate_obstacles(const CostMap & map, double footprint_radius);

/// Ground truth plus the part of it the robot has observed so far.
class RevealModel
{
public:
  RevealModel(CostMap ground_truth, double sensor_radius);

  /// Copies every ground-truth cell whose center is strictly closer than
  /// sensor_radius to the pose. Throws PoseOutOfBounds.
  void reveal(Point2 robot_position);

  const CostMap & ground_truth() const { return ground_truth_; }
  const CostMap & revealed() const { return revealed_; }
  double sensor_radius() const { return sensor_radius_; }
  std::size_t revealed_count() const { return revealed_count_; }

private:
  CostMap ground_truth_;
  CostMap revealed_;
  std::vector<bool> known_;
  std::size_t revealed_count_{0};
  double sensor_radius_;
};

std::string store_map(const CostMap & map);
/// Throws MalformedHeader or DimensionMismatch.
CostMap load_map(std::string_view bytes);

}  // namespace replan
