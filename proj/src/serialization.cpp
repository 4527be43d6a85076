#include "replan/serialization.hpp"

#include "replan/errors.hpp"

#include <cstdio>
#include <fstream>
#include <sstream>

namespace replan
{

namespace
{

template <class T>
nlohmann::ordered_json optional_json(const std::optional<T> & v)
{
  return v ? nlohmann::ordered_json(*v) : nlohmann::ordered_json(nullptr);
}

template <class T>
std::optional<T> optional_from(const nlohmann::json & j, const char * key)
{
  if (!j.contains(key) || j.at(key).is_null()) {
    return std::nullopt;
  }
  return j.at(key).get<T>();
}

template <class T>
T value_or(const nlohmann::json & j, const char * key, T fallback)
{
  return j.contains(key) && !j.at(key).is_null() ? j.at(key).get<T>() : fallback;
}

}  // namespace

nlohmann::ordered_json cycle_record_to_json(const CycleRecord & r)
{
  nlohmann::ordered_json j;
  j["cycle"] = r.cycle;
  j["route"] = std::string(to_string(r.route));
  j["cost_now"] = optional_json(r.cost_now);
  j["cost_prev_updated"] = optional_json(r.cost_prev_updated);
  j["cost_prev_repaired"] = optional_json(r.cost_prev_repaired);
  j["selected_id"] = r.selected_id;
  j["mhd"] = optional_json(r.mhd);
  j["alpha"] = r.alpha;
  j["mhd_directed"] = optional_json(r.mhd_directed);
  j["diverged"] = r.diverged;
  j["expansions_now"] = r.expansions_now;
  j["expansions_repair"] = r.expansions_repair;
  return j;
}

CycleRecord cycle_record_from_json(const nlohmann::json & j)
{
  try {
    CycleRecord r;
    r.cycle = j.at("cycle").get<int>();
    const auto route = route_from_string(j.at("route").get<std::string>());
    if (!route) {
      throw MalformedHeader("unknown route '" + j.at("route").get<std::string>() + "'");
    }
    r.route = *route;
    r.cost_now = optional_from<double>(j, "cost_now");
    r.cost_prev_updated = optional_from<double>(j, "cost_prev_updated");
    r.cost_prev_repaired = optional_from<double>(j, "cost_prev_repaired");
    r.selected_id = j.at("selected_id").get<std::uint64_t>();
    r.mhd = optional_from<double>(j, "mhd");
    r.alpha = j.at("alpha").get<double>();
    r.mhd_directed = optional_from<double>(j, "mhd_directed");
    r.diverged = value_or(j, "diverged", false);
    r.expansions_now = value_or<std::size_t>(j, "expansions_now", 0);
    r.expansions_repair = value_or<std::size_t>(j, "expansions_repair", 0);
    return r;
  } catch (const nlohmann::json::exception & e) {
    throw MalformedHeader(std::string("bad cycle record: ") + e.what());
  }
}

nlohmann::ordered_json trajectory_to_json(const Trajectory & t)
{
  nlohmann::ordered_json j;
  j["id"] = t.id;
  j["birth_cycle"] = t.birth_cycle;
  j["duration"] = t.duration;
  auto wps = nlohmann::ordered_json::array();
  for (const auto & w : t.waypoints) {
    wps.push_back({w.pose.x, w.pose.y, w.pose.heading, w.arrival_time});
  }
  j["waypoints"] = std::move(wps);
  return j;
}

nlohmann::ordered_json expansion_to_json(const ExpansionEvent & e, Point2 position)
{
  nlohmann::ordered_json j;
  j["node"] = e.node;
  j["x"] = position.x;
  j["y"] = position.y;
  j["g"] = e.g;
  j["f"] = e.f;
  j["epsilon"] = e.epsilon;
  return j;
}

nlohmann::ordered_json scenario_to_json(const Scenario & s)
{
  nlohmann::ordered_json j;
  if (const auto * gen = std::get_if<GeneratedMap>(&s.map_source)) {
    j["map_source"] = {
      {"seed", gen->seed},
      {"width", gen->width},
      {"height", gen->height},
      {"resolution", gen->resolution},
      {"threshold", gen->threshold},
      {"v_max", gen->v_max},
      {"noise",
       {{"frequency", gen->noise.frequency},
        {"octaves", gen->noise.octaves},
        {"persistence", gen->noise.persistence},
        {"lacunarity", gen->noise.lacunarity}}},
      {"clear_radius", gen->clear_radius}};
  } else {
    j["map_source"] = {{"map", nlohmann::ordered_json::parse(store_map(std::get<CostMap>(s.map_source)))}};
  }
  j["start"] = {s.start.x, s.start.y, s.start.heading};
  j["goal"] = {s.goal.x, s.goal.y};
  j["sensor_radius"] = s.sensor_radius;
  j["step_time"] = s.step_time;
  j["max_cycles"] = s.max_cycles;
  const auto & a = s.arbiter;
  j["arbiter"] = {
    {"alpha", a.alpha},
    {"repair",
     {{"enabled", a.repair.enabled},
      {"lateral_width", a.repair.lateral_width},
      {"lateral_spacing", a.repair.lateral_spacing},
      {"station_spacing", a.repair.station_spacing}}},
    {"search",
     {{"epsilon_start", a.search.epsilon_start},
      {"epsilon_step", a.search.epsilon_step},
      {"expansion_budget", a.search.expansion_budget},
      {"goal_tolerance", a.search.goal_tolerance}}},
    {"lattice", {{"headings", a.lattice.headings}, {"primitive_spacing", a.lattice.primitive_spacing}}},
    {"divergence_threshold", optional_json(a.divergence_threshold)},
    {"arbitrate", a.arbitrate}};
  j["rng_seed"] = s.rng_seed;
  j["footprint_radius"] = s.footprint_radius;
  j["tracking_noise_sigma"] = s.tracking_noise_sigma;
  j["cadence"] = std::string(to_string(s.cadence));
  return j;
}

Scenario scenario_from_json(const nlohmann::json & j, const std::filesystem::path & base_dir)
{
  try {
    Scenario s;
    const auto & src = j.at("map_source");
    if (src.contains("file")) {
      const auto path = base_dir / src.at("file").get<std::string>();
      std::ifstream in(path, std::ios::binary);
      if (!in) {
        throw MalformedHeader("cannot open map file " + path.string());
      }
      std::ostringstream buf;
      buf << in.rdbuf();
      s.map_source = load_map(buf.str());
    } else if (src.contains("map")) {
      s.map_source = load_map(src.at("map").dump());
    } else {
      GeneratedMap gen;
      gen.seed = value_or(src, "seed", gen.seed);
      gen.width = value_or(src, "width", gen.width);
      gen.height = value_or(src, "height", gen.height);
      gen.resolution = value_or(src, "resolution", gen.resolution);
      gen.threshold = value_or(src, "threshold", gen.threshold);
      gen.v_max = value_or(src, "v_max", gen.v_max);
      gen.clear_radius = value_or(src, "clear_radius", gen.clear_radius);
      if (src.contains("noise")) {
        const auto & n = src.at("noise");
        gen.noise.frequency = value_or(n, "frequency", gen.noise.frequency);
        gen.noise.octaves = value_or(n, "octaves", gen.noise.octaves);
        gen.noise.persistence = value_or(n, "persistence", gen.noise.persistence);
        gen.noise.lacunarity = value_or(n, "lacunarity", gen.noise.lacunarity);
      }
      s.map_source = gen;
    }
    const auto & start = j.at("start");
    s.start = {start.at(0).get<double>(), start.at(1).get<double>(), start.size() > 2 ? start.at(2).get<double>() : 0.0};
    const auto & goal = j.at("goal");
    s.goal = {goal.at(0).get<double>(), goal.at(1).get<double>()};
    s.sensor_radius = value_or(j, "sensor_radius", s.sensor_radius);
    s.step_time = value_or(j, "step_time", s.step_time);
    s.max_cycles = value_or(j, "max_cycles", s.max_cycles);
    s.rng_seed = value_or(j, "rng_seed", s.rng_seed);
    s.footprint_radius = value_or(j, "footprint_radius", s.footprint_radius);
    s.tracking_noise_sigma = value_or(j, "tracking_noise_sigma", s.tracking_noise_sigma);
    if (j.contains("cadence")) {
      const auto c = cadence_from_string(j.at("cadence").get<std::string>());
      if (!c) {
        throw MalformedHeader("unknown cadence " + j.at("cadence").dump());
      }
      s.cadence = *c;
    }
    if (j.contains("arbiter")) {
      const auto & a = j.at("arbiter");
      auto & cfg = s.arbiter;
      cfg.alpha = value_or(a, "alpha", cfg.alpha);
      cfg.arbitrate = value_or(a, "arbitrate", cfg.arbitrate);
      cfg.divergence_threshold = optional_from<double>(a, "divergence_threshold");
      if (a.contains("repair")) {
        const auto & r = a.at("repair");
        cfg.repair.enabled = value_or(r, "enabled", cfg.repair.enabled);
        cfg.repair.lateral_width = value_or(r, "lateral_width", cfg.repair.lateral_width);
        cfg.repair.lateral_spacing = value_or(r, "lateral_spacing", cfg.repair.lateral_spacing);
        cfg.repair.station_spacing = value_or(r, "station_spacing", cfg.repair.station_spacing);
      }
      if (a.contains("search")) {
        const auto & q = a.at("search");
        cfg.search.epsilon_start = value_or(q, "epsilon_start", cfg.search.epsilon_start);
        cfg.search.epsilon_step = value_or(q, "epsilon_step", cfg.search.epsilon_step);
        cfg.search.expansion_budget = value_or(q, "expansion_budget", cfg.search.expansion_budget);
        cfg.search.goal_tolerance = value_or(q, "goal_tolerance", cfg.search.goal_tolerance);
      }
      if (a.contains("lattice")) {
        const auto & l = a.at("lattice");
        cfg.lattice.headings = value_or(l, "headings", cfg.lattice.headings);
        cfg.lattice.primitive_spacing = value_or(l, "primitive_spacing", cfg.lattice.primitive_spacing);
      }
    }
    s.validate();
    return s;
  } catch (const nlohmann::json::exception & e) {
    throw MalformedHeader(std::string("bad scenario: ") + e.what());
  } catch (const InvalidArgument & e) {
    throw MalformedHeader(std::string("invalid scenario: ") + e.what());
  }
}

std::string scenario_digest(const Scenario & s)
{
  // FNV-1a over the canonical JSON form.
  std::uint64_t hash = 1469598103934665603ULL;
  for (const unsigned char c : scenario_to_json(s).dump()) {
    hash ^= c;
    hash *= 1099511628211ULL;
  }
  char buf[17];
  std::snprintf(buf, sizeof(buf), "%016llx", static_cast<unsigned long long>(hash));
  return buf;
}

}  // namespace replan
