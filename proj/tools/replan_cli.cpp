// Command-line front end: map generation, single planning cycles, scenario
// simulation, alpha sweeps and MHD summaries.

#include "replan/arbiter.hpp"
#include "replan/errors.hpp"
#include "replan/gridmap.hpp"
#include "replan/harness.hpp"
#include "replan/lattice.hpp"
#include "replan/metrics.hpp"
#include "replan/serialization.hpp"

#include "CLI11.hpp"
#include "json.hpp"

#include <filesystem>
#include <fstream>
#include <iostream>
#include <map>
#include <sstream>
#include <string>
#include <vector>

using namespace replan;

namespace
{

std::string read_file(const std::string & path)
{
  std::ifstream in(path, std::ios::binary);
  if (!in) {
    throw Error("cannot open " + path);
  }
  std::ostringstream buf;
  buf << in.rdbuf();
  return buf.str();
}

std::ofstream open_out(const std::string & path)
{
  std::ofstream out(path, std::ios::binary);
  if (!out) {
    throw Error("cannot write " + path);
  }
  return out;
}

std::vector<double> parse_numbers(const std::string & text, const char * what)
{
  std::vector<double> out;
  std::stringstream ss(text);
  std::string item;
  while (std::getline(ss, item, ',')) {
    std::size_t used = 0;
    try {
      out.push_back(std::stod(item, &used));
    } catch (const std::exception &) {
      used = 0;
    }
    if (used == 0 || used != item.size()) {
      throw InvalidArgument(std::string("bad ") + what + ": '" + text + "'");
    }
  }
  return out;
}

Scenario load_scenario(const std::string & path)
{
  nlohmann::json j;
  try {
    j = nlohmann::json::parse(read_file(path));
  } catch (const nlohmann::json::parse_error & e) {
    throw MalformedHeader(path + ": " + e.what());
  }
  return scenario_from_json(j, std::filesystem::path(path).parent_path());
}

struct GenMapArgs
{
  std::uint64_t seed{1};
  int width{64};
  int height{64};
  double resolution{kDefaultResolution};
  double threshold{0.3};
  double v_max{1.0};
  std::string out;
};

void gen_map(const GenMapArgs & a)
{
  const auto map = generate_perlin_map(a.seed, a.width, a.height, a.resolution, a.threshold, a.v_max);
  open_out(a.out) << store_map(map) << '\n';
  std::cout << "wrote " << a.out << ": " << map.width() << "x" << map.height() << ", "
            << map.count(CellState::Obstacle) << " obstacle cells\n";
}

struct PlanArgs
{
  std::string map;
  std::string start;
  std::string goal;
  double alpha{0.95};
  std::size_t budget{SearchConfig{}.expansion_budget};
  double footprint{0.3};
  std::string out;
  std::string trace;
  std::string trajectory;
};

void plan(const PlanArgs & a)
{
  const auto start = parse_numbers(a.start, "start");
  const auto goal = parse_numbers(a.goal, "goal");
  if (start.size() != 3 || goal.size() != 2) {
    throw InvalidArgument("--start takes x,y,heading and --goal takes x,y");
  }
  const auto map = inflate_obstacles(load_map(read_file(a.map)), a.footprint);
  ArbiterConfig cfg;
  cfg.alpha = a.alpha;
  cfg.search.expansion_budget = a.budget;

  std::ofstream trace;
  ExpansionObserver observer;
  std::unique_ptr<ControlSet> set;
  std::unique_ptr<LatticeGraph> graph;
  if (!a.trace.empty()) {
    trace = open_out(a.trace);
    set = std::make_unique<ControlSet>(build_control_set(cfg.lattice.headings, cfg.lattice.primitive_spacing, map.resolution()));
    graph = std::make_unique<LatticeGraph>(map, *set);
    observer = [&](const ExpansionEvent & e) { trace << expansion_to_json(e, graph->position(e.node)).dump() << '\n'; };
  }

  const auto out = plan_cycle(ArbiterState{}, {start[0], start[1], start[2]}, {goal[0], goal[1]}, map, cfg, observer);
  open_out(a.out) << cycle_record_to_json(out.record).dump() << '\n';
  if (!a.trajectory.empty()) {
    open_out(a.trajectory) << trajectory_to_json(out.selected).dump(2) << '\n';
  }
  std::cout << "route " << to_string(out.record.route) << ", duration " << out.selected.duration << " s, "
            << out.record.expansions_now << " expansions\n";
}

void simulate(const std::string & scenario, const std::string & out_path)
{
  const auto s = load_scenario(scenario);
  const auto log = run_scenario(s);
  auto out = open_out(out_path);
  for (const auto & r : log.cycles) {
    out << cycle_record_to_json(r).dump() << '\n';
  }
  std::cout << "scenario " << log.scenario_digest << ": " << to_string(log.outcome) << " after "
            << log.cycles.size() << " cycles, path " << log.total_path_length << " m";
  if (log.failure) {
    std::cout << " (" << *log.failure << ")";
  }
  std::cout << '\n';
}

struct SweepArgs
{
  std::string scenario;
  std::string alphas{"0.95,0.96,0.97,0.98,0.99,0.999"};
  int reps{10};
  double threshold{kDefaultMhdThreshold};
  bool directed{false};
  unsigned threads{0};
  std::string out;
  std::string cycles_out;
};

void write_summary(const std::string & path, const std::vector<std::pair<StabilitySummary, std::optional<double>>> & rows)
{
  auto out = open_out(path);
  out << summary_csv_header() << '\n';
  for (const auto & [summary, alpha] : rows) {
    out << summary_csv_row(summary, alpha) << '\n';
  }
}

void sweep(const SweepArgs & a)
{
  const auto base = load_scenario(a.scenario);
  SweepOptions opts;
  opts.threshold = a.threshold;
  opts.directed = a.directed;
  opts.threads = a.threads;
  const auto res = alpha_sweep(base, parse_numbers(a.alphas, "alphas"), a.reps, opts);

  std::vector<std::pair<StabilitySummary, std::optional<double>>> rows;
  for (const auto & row : res.rows) {
    rows.emplace_back(row.summary, row.alpha);
  }
  write_summary(a.out, rows);
  if (!a.cycles_out.empty()) {
    auto out = open_out(a.cycles_out);
    for (const auto & c : res.cycles) {
      nlohmann::ordered_json j{{"label", c.label}, {"rep", c.rep}};
      j.update(cycle_record_to_json(c.record));
      out << j.dump() << '\n';
    }
  }
  for (const auto & row : res.rows) {
    std::cout << summary_csv_row(row.summary, row.alpha) << '\n';
  }
}

void metrics(const std::string & cycles, double threshold, bool directed, const std::string & out_path)
{
  std::ifstream in(cycles);
  if (!in) {
    throw Error("cannot open " + cycles);
  }
  // Labels in order of first appearance.
  std::vector<std::string> order;
  std::map<std::string, std::vector<double>> values;
  std::map<std::string, std::optional<double>> alphas;
  std::string line;
  int line_no = 0;
  while (std::getline(in, line)) {
    ++line_no;
    if (line.find_first_not_of(" \t\r") == std::string::npos) {
      continue;
    }
    nlohmann::json j;
    try {
      j = nlohmann::json::parse(line);
    } catch (const nlohmann::json::parse_error & e) {
      throw MalformedHeader(cycles + ":" + std::to_string(line_no) + ": " + e.what());
    }
    const auto record = cycle_record_from_json(j);
    const std::string label = j.contains("label") ? j.at("label").get<std::string>() : alpha_label(record.alpha);
    if (!values.count(label)) {
      order.push_back(label);
      values[label];
      alphas[label] = label == kBaselineLabel ? std::nullopt : std::optional<double>(record.alpha);
    }
    const auto & v = directed ? record.mhd_directed : record.mhd;
    if (v) {
      values[label].push_back(*v);
    }
  }
  std::vector<std::pair<StabilitySummary, std::optional<double>>> rows;
  for (const auto & label : order) {
    rows.emplace_back(summarize(values[label], threshold, label), alphas[label]);
  }
  write_summary(out_path, rows);
  for (const auto & [summary, alpha] : rows) {
    std::cout << summary_csv_row(summary, alpha) << '\n';
  }
}

}  // namespace

int main(int argc, char ** argv)
{
  CLI::App app{"Trajectory arbitration planner: maps, planning cycles, simulations and stability metrics"};
  app.require_subcommand(1);

  GenMapArgs gm;
  auto * gen_cmd = app.add_subcommand("gen-map", "Generate a Perlin-noise cost map");
  gen_cmd->add_option("--seed", gm.seed, "Noise seed");
  gen_cmd->add_option("--width", gm.width, "Width in cells")->check(CLI::PositiveNumber);
  gen_cmd->add_option("--height", gm.height, "Height in cells")->check(CLI::PositiveNumber);
  gen_cmd->add_option("--resolution", gm.resolution, "Meters per cell")->check(CLI::PositiveNumber);
  gen_cmd->add_option("--threshold", gm.threshold, "Noise value above which a cell is an obstacle");
  gen_cmd->add_option("--v-max", gm.v_max, "Free-cell speed in m/s")->check(CLI::PositiveNumber);
  gen_cmd->add_option("--out", gm.out, "Output map JSON")->required();

  PlanArgs pa;
  auto * plan_cmd = app.add_subcommand("plan", "Run one planning cycle on a map");
  plan_cmd->add_option("--map", pa.map, "Map JSON")->required();
  plan_cmd->add_option("--start", pa.start, "Start pose x,y,heading")->required();
  plan_cmd->add_option("--goal", pa.goal, "Goal position x,y")->required();
  plan_cmd->add_option("--alpha", pa.alpha, "Selection bias");
  plan_cmd->add_option("--budget", pa.budget, "Expansion budget");
  plan_cmd->add_option("--footprint", pa.footprint, "Obstacle inflation radius in meters");
  plan_cmd->add_option("--out", pa.out, "Output cycle record JSONL")->required();
  plan_cmd->add_option("--trace", pa.trace, "Optional expansion trace JSONL");
  plan_cmd->add_option("--trajectory", pa.trajectory, "Optional selected trajectory JSON");

  std::string sim_scenario;
  std::string sim_out;
  auto * sim_cmd = app.add_subcommand("simulate", "Run a scenario and log every cycle");
  sim_cmd->add_option("--scenario", sim_scenario, "Scenario JSON")->required();
  sim_cmd->add_option("--out", sim_out, "Output cycle records JSONL")->required();

  SweepArgs sw;
  auto * sweep_cmd = app.add_subcommand("sweep", "Run an alpha sweep plus the baseline");
  sweep_cmd->add_option("--scenario", sw.scenario, "Base scenario JSON")->required();
  sweep_cmd->add_option("--alphas", sw.alphas, "Comma-separated alpha values");
  sweep_cmd->add_option("--reps", sw.reps, "Repetitions per configuration")->check(CLI::PositiveNumber);
  sweep_cmd->add_option("--threshold", sw.threshold, "MHD filter threshold in meters");
  sweep_cmd->add_flag("--directed", sw.directed, "Summarize the directed MHD");
  sweep_cmd->add_option("--threads", sw.threads, "Worker threads (0: all cores)");
  sweep_cmd->add_option("--out", sw.out, "Output summary CSV")->required();
  sweep_cmd->add_option("--cycles-out", sw.cycles_out, "Optional cycle records JSONL");

  std::string mt_cycles;
  std::string mt_out;
  double mt_threshold = kDefaultMhdThreshold;
  bool mt_directed = false;
  auto * metrics_cmd = app.add_subcommand("metrics", "Summarize MHDs from cycle records");
  metrics_cmd->add_option("--cycles", mt_cycles, "Cycle records JSONL")->required();
  metrics_cmd->add_option("--threshold", mt_threshold, "MHD filter threshold in meters");
  metrics_cmd->add_flag("--directed", mt_directed, "Summarize the directed MHD");
  metrics_cmd->add_option("--out", mt_out, "Output summary CSV")->required();

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError & e) {
    return app.exit(e);
  }

  try {
    if (*gen_cmd) {
      gen_map(gm);
    } else if (*plan_cmd) {
      plan(pa);
    } else if (*sim_cmd) {
      simulate(sim_scenario, sim_out);
    } else if (*sweep_cmd) {
      sweep(sw);
    } else if (*metrics_cmd) {
      metrics(mt_cycles, mt_threshold, mt_directed, mt_out);
    }
  } catch (const std::exception & e) {
    std::cerr << "error: " << e.what() << '\n';
    return 1;
  }
  return 0;
}
