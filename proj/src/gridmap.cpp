#include "replan/gridmap.hpp"

#include "replan/errors.hpp"

#include "json.hpp"

#include <algorithm>
#include <cmath>
#include <random>

namespace replan
{

char to_char(CellState state)
{
  switch (state) {
    case CellState::Unknown:
      return 'U';
    case CellState::Free:
      return 'F';
    case CellState::Obstacle:
      return 'O';
    case CellState::Inflated:
      return 'I';
  }
  return '?';
}

std::optional<CellState> cell_state_from_char(char c)
{
  switch (c) {
    case 'U':
      return CellState::Unknown;
    case 'F':
      return CellState::Free;
    case 'O':
      return CellState::Obstacle;
    case 'I':
      return CellState::Inflated;
    default:
      return std::nullopt;
  }
}

CostMap::CostMap(
  int width, int height, double resolution, Point2 origin, double v_max, CellState fill,
  double unknown_speed_factor)
: width_(width),
  height_(height),
  resolution_(resolution),
  origin_(origin),
  v_max_(v_max),
  unknown_speed_factor_(unknown_speed_factor)
{
  if (width < 1 || height < 1) {
    throw InvalidArgument("map dimensions must be at least 1x1");
  }
  if (!(resolution > 0.0)) {
    throw InvalidArgument("map resolution must be positive");
  }
  if (!(v_max > 0.0)) {
    throw InvalidArgument("v_max must be positive");
  }
  if (!(unknown_speed_factor > 0.0 && unknown_speed_factor <= 1.0)) {
    throw InvalidArgument("unknown_speed_factor must lie in (0, 1]");
  }
  cells_.assign(
    static_cast<std::size_t>(width) * static_cast<std::size_t>(height),
    Cell{fill, default_speed(fill)});
}

bool CostMap::contains(Point2 p) const
{
  return p.x >= origin_.x && p.y >= origin_.y && p.x <= origin_.x + width_ * resolution_ &&
         p.y <= origin_.y + height_ * resolution_;
}

std::optional<CellIndex> CostMap::cell_at(Point2 p) const
{
  if (!contains(p)) {
    return std::nullopt;
  }
  // The far boundary belongs to the last cell.
  const int i = std::min(width_ - 1, static_cast<int>(std::floor((p.x - origin_.x) / resolution_)));
  const int j = std::min(height_ - 1, static_cast<int>(std::floor((p.y - origin_.y) / resolution_)));
  return CellIndex{i, j};
}

double CostMap::default_speed(CellState state) const
{
  switch (state) {
    case CellState::Free:
      return v_max_;
    case CellState::Unknown:
      return unknown_speed_factor_ * v_max_;
    case CellState::Obstacle:
    case CellState::Inflated:
      return 0.0;
  }
  return 0.0;
}

void CostMap::set_state(CellIndex c, CellState state)
{
  cells_[linear_index(c)] = Cell{state, default_speed(state)};
}

void CostMap::set_cell(CellIndex c, Cell cell)
{
  switch (cell.state) {
    case CellState::Obstacle:
    case CellState::Inflated:
      if (cell.speed != 0.0) {
        throw InvalidArgument("blocked cells must have speed 0");
      }
      break;
    case CellState::Free:
      if (!(cell.speed > 0.0 && cell.speed <= v_max_)) {
        throw InvalidArgument("free cell speed must lie in (0, v_max]");
      }
      break;
    case CellState::Unknown:
      if (cell.speed != default_speed(CellState::Unknown)) {
        throw InvalidArgument("unknown cell speed is fixed by unknown_speed_factor");
      }
      break;
  }
  cells_[linear_index(c)] = cell;
}

std::size_t CostMap::count(CellState state) const
{
  return static_cast<std::size_t>(
    std::count_if(cells_.begin(), cells_.end(), [state](const Cell & c) { return c.state == state; }));
}

// ---------------------------------------------------------------------------
// Gradient noise

GradientNoise::GradientNoise(std::uint64_t seed) : perm_(512)
{
  std::vector<int> p(256);
  for (int i = 0; i < 256; ++i) {
    p[static_cast<std::size_t>(i)] = i;
  }
  // Explicit Fisher-Yates: std::shuffle is not portable across standard libraries.
  std::mt19937_64 rng(seed);
  for (std::size_t i = 255; i > 0; --i) {
    const auto j = static_cast<std::size_t>(rng() % (i + 1));
    std::swap(p[i], p[j]);
  }
  for (std::size_t i = 0; i < 512; ++i) {
    perm_[i] = p[i & 255U];
  }
}

namespace
{

double fade(double t) { return t * t * t * (t * (t * 6.0 - 15.0) + 10.0); }

double grad(int hash, double x, double y)
{
  switch (hash & 7) {
    case 0:
      return x + y;
    case 1:
      return -x + y;
    case 2:
      return x - y;
    case 3:
      return -x - y;
    case 4:
      return x;
    case 5:
      return -x;
    case 6:
      return y;
    default:
      return -y;
  }
}

}  // namespace

double GradientNoise::noise(double x, double y) const
{
  const double fx = std::floor(x);
  const double fy = std::floor(y);
  const int xi = static_cast<int>(static_cast<long long>(fx) & 255);
  const int yi = static_cast<int>(static_cast<long long>(fy) & 255);
  x -= fx;
  y -= fy;
  const double u = fade(x);
  const double v = fade(y);

  const auto & p = perm_;
  const int aa = p[static_cast<std::size_t>(p[static_cast<std::size_t>(xi)] + yi)];
  const int ab = p[static_cast<std::size_t>(p[static_cast<std::size_t>(xi)] + yi + 1)];
  const int ba = p[static_cast<std::size_t>(p[static_cast<std::size_t>(xi + 1)] + yi)];
  const int bb = p[static_cast<std::size_t>(p[static_cast<std::size_t>(xi + 1)] + yi + 1)];

  const double x1 = std::lerp(grad(aa, x, y), grad(ba, x - 1.0, y), u);
  const double x2 = std::lerp(grad(ab, x, y - 1.0), grad(bb, x - 1.0, y - 1.0), u);
  return std::clamp(std::lerp(x1, x2, v), -1.0, 1.0);
}

double GradientNoise::fractal(double x, double y, const NoiseParams & params) const
{
  double total = 0.0;
  double amplitude = 1.0;
  double norm = 0.0;
  double frequency = 1.0;
  for (int o = 0; o < std::max(1, params.octaves); ++o) {
    total += amplitude * noise(x * frequency, y * frequency);
    norm += amplitude;
    amplitude *= params.persistence;
    frequency *= params.lacunarity;
  }
  return std::clamp(total / norm, -1.0, 1.0);
}

CostMap generate_perlin_map(
  std::uint64_t seed, int width, int height, double resolution, double obstacle_threshold,
  double v_max, const NoiseParams & params)
{
  CostMap map(width, height, resolution, {0.0, 0.0}, v_max, CellState::Free);
  const GradientNoise noise(seed);
  for (int j = 0; j < height; ++j) {
    for (int i = 0; i < width; ++i) {
      const Point2 c = map.cell_center({i, j});
      const double value =
        noise.fractal(c.x * params.frequency, c.y * params.frequency, params);
      if (value > obstacle_threshold) {
        map.set_state({i, j}, CellState::Obstacle);
      }
    }
  }
  return map;
}

CostMap inflate_obstacles(const CostMap & map, double footprint_radius)
{
  if (footprint_radius < 0.0) {
    throw InvalidArgument("footprint_radius must be non-negative");
  }
  CostMap out = map;
  const double r_cells = footprint_radius / map.resolution();
  const int reach = static_cast<int>(std::floor(r_cells + 1e-9));
  if (reach == 0) {
    return out;
  }
  const double r2 = r_cells * r_cells + 1e-9;
  std::vector<CellIndex> stencil;
  for (int dj = -reach; dj <= reach; ++dj) {
    for (int di = -reach; di <= reach; ++di) {
      if ((di != 0 || dj != 0) && di * di + dj * dj <= r2) {
        stencil.push_back({di, dj});
      }
    }
  }
  for (int j = 0; j < map.height(); ++j) {
    for (int i = 0; i < map.width(); ++i) {
      if (map.at({i, j}).state != CellState::Obstacle) {
        continue;
      }
      for (const auto & d : stencil) {
        const CellIndex n{i + d.i, j + d.j};
        if (!out.contains(n)) {
          continue;
        }
        const auto s = out.at(n).state;
        if (s == CellState::Free || s == CellState::Unknown) {
          out.set_state(n, CellState::Inflated);
        }
      }
    }
  }
  return out;
}

// ---------------------------------------------------------------------------
// Partial observability

RevealModel::RevealModel(CostMap ground_truth, double sensor_radius)
: ground_truth_(std::move(ground_truth)),
  revealed_(
    ground_truth_.width(), ground_truth_.height(), ground_truth_.resolution(),
    ground_truth_.origin(), ground_truth_.v_max(), CellState::Unknown,
    ground_truth_.unknown_speed_factor()),
  known_(ground_truth_.size(), false),
  sensor_radius_(sensor_radius)
{
  if (sensor_radius < 0.0) {
    throw InvalidArgument("sensor_radius must be non-negative");
  }
}

void RevealModel::reveal(Point2 robot_position)
{
  if (!ground_truth_.contains(robot_position)) {
    throw PoseOutOfBounds("reveal pose lies outside the map");
  }
  const double res = ground_truth_.resolution();
  const Point2 o = ground_truth_.origin();
  const int i0 = std::max(0, static_cast<int>(std::floor((robot_position.x - sensor_radius_ - o.x) / res)));
  const int i1 = std::min(
    ground_truth_.width() - 1,
    static_cast<int>(std::floor((robot_position.x + sensor_radius_ - o.x) / res)));
  const int j0 = std::max(0, static_cast<int>(std::floor((robot_position.y - sensor_radius_ - o.y) / res)));
  const int j1 = std::min(
    ground_truth_.height() - 1,
    static_cast<int>(std::floor((robot_position.y + sensor_radius_ - o.y) / res)));
  for (int j = j0; j <= j1; ++j) {
    for (int i = i0; i <= i1; ++i) {
      const CellIndex c{i, j};
      const std::size_t k = ground_truth_.linear_index(c);
      if (known_[k] || !(distance(ground_truth_.cell_center(c), robot_position) < sensor_radius_)) {
        continue;
      }
      known_[k] = true;
      ++revealed_count_;
      revealed_.set_cell(c, ground_truth_.at(c));
    }
  }
}

// ---------------------------------------------------------------------------
// Serialization

std::string store_map(const CostMap & map)
{
  nlohmann::ordered_json doc;
  doc["width"] = map.width();
  doc["height"] = map.height();
  doc["resolution"] = map.resolution();
  doc["origin"] = {map.origin().x, map.origin().y};
  doc["v_max"] = map.v_max();
  if (map.unknown_speed_factor() != kDefaultUnknownSpeedFactor) {
    doc["unknown_speed_factor"] = map.unknown_speed_factor();
  }
  std::string cells;
  cells.reserve(map.size());
  bool custom_speeds = false;
  for (const auto & c : map.cells()) {
    cells.push_back(to_char(c.state));
    custom_speeds = custom_speeds || c.speed != map.default_speed(c.state);
  }
  doc["cells"] = std::move(cells);
  if (custom_speeds) {
    auto speeds = nlohmann::ordered_json::array();
    for (const auto & c : map.cells()) {
      speeds.push_back(c.speed);
    }
    doc["speeds"] = std::move(speeds);
  }
  return doc.dump();
}

CostMap load_map(std::string_view bytes)
{
  nlohmann::json doc;
  try {
    doc = nlohmann::json::parse(bytes);
  } catch (const nlohmann::json::parse_error & e) {
    throw MalformedHeader(std::string("map is not valid JSON: ") + e.what());
  }
  if (!doc.is_object()) {
    throw MalformedHeader("map document must be a JSON object");
  }
  for (const char * key : {"width", "height", "resolution", "origin", "v_max", "cells"}) {
    if (!doc.contains(key)) {
      throw MalformedHeader(std::string("map is missing field '") + key + "'");
    }
  }
  int width = 0;
  int height = 0;
  double resolution = 0.0;
  double v_max = 0.0;
  Point2 origin;
  std::string cells;
  double unknown_factor = kDefaultUnknownSpeedFactor;
  try {
    width = doc.at("width").get<int>();
    height = doc.at("height").get<int>();
    resolution = doc.at("resolution").get<double>();
    v_max = doc.at("v_max").get<double>();
    const auto & o = doc.at("origin");
    if (!o.is_array() || o.size() != 2) {
      throw MalformedHeader("origin must be [x, y]");
    }
    origin = {o[0].get<double>(), o[1].get<double>()};
    cells = doc.at("cells").get<std::string>();
    if (doc.contains("unknown_speed_factor")) {
      unknown_factor = doc.at("unknown_speed_factor").get<double>();
    }
  } catch (const nlohmann::json::exception & e) {
    throw MalformedHeader(std::string("bad map header: ") + e.what());
  }
  if (width < 1 || height < 1 || !(resolution > 0.0) || !(v_max > 0.0)) {
    throw MalformedHeader("map header has non-positive dimensions, resolution or v_max");
  }
  const auto expected = static_cast<std::size_t>(width) * static_cast<std::size_t>(height);
  if (cells.size() != expected) {
    throw DimensionMismatch(
      "header claims " + std::to_string(width) + "x" + std::to_string(height) + " but found " +
      std::to_string(cells.size()) + " cells");
  }
  CostMap map(width, height, resolution, origin, v_max, CellState::Free, unknown_factor);
  std::vector<double> speeds;
  if (doc.contains("speeds")) {
    try {
      speeds = doc.at("speeds").get<std::vector<double>>();
    } catch (const nlohmann::json::exception & e) {
      throw MalformedHeader(std::string("bad speeds array: ") + e.what());
    }
    if (speeds.size() != expected) {
      throw DimensionMismatch("speeds array length does not match cell count");
    }
  }
  for (int j = 0; j < height; ++j) {
    for (int i = 0; i < width; ++i) {
      const std::size_t k = map.linear_index({i, j});
      const auto state = cell_state_from_char(cells[k]);
      if (!state) {
        throw MalformedHeader(std::string("unknown cell code '") + cells[k] + "'");
      }
      if (speeds.empty()) {
        map.set_state({i, j}, *state);
      } else {
        try {
          map.set_cell({i, j}, Cell{*state, speeds[k]});
        } catch (const InvalidArgument & e) {
          throw MalformedHeader(std::string("inconsistent cell speed: ") + e.what());
        }
      }
    }
  }
  return map;
}

}  // namespace replan
