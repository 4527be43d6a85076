#pragma once

#include "replan/arbiter.hpp"
#include "replan/gridmap.hpp"
#include "replan/metrics.hpp"

#include <cstdint>
#include <functional>
#include <optional>
#include <random>
#include <string>
#include <variant>
#include <vector>

namespace replan
{

struct GeneratedMap
{
  std::uint64_t seed{1};
  int width{64};
  int height{64};
  double resolution{kDefaultResolution};
  double threshold{0.3};
  double v_max{1.0};
  NoiseParams noise;
  /// Obstacles within this radius of start and goal are removed before inflation.
  double clear_radius{1.0};
};

/// When a planning cycle fires: after exactly step_time of travel, or at the
/// first trajectory waypoint reached after step_time.
enum class Cadence { Continuous, Waypoint };

std::string_view to_string(Cadence c);
std::optional<Cadence> cadence_from_string(std::string_view s);

struct Scenario
{
  std::variant<GeneratedMap, CostMap> map_source{GeneratedMap{}};
  Pose2 start;
  Point2 goal;
  double sensor_radius{3.0};
  double step_time{1.0};
  int max_cycles{60};
  ArbiterConfig arbiter;
  std::uint64_t rng_seed{0};
  double footprint_radius{0.3};
  double tracking_noise_sigma{0.0};
  Cadence cadence{Cadence::Continuous};

  /// Throws InvalidArgument.
  void validate() const;
};

enum class Outcome { GoalReached, Stuck, CycleLimit };
std::string_view to_string(Outcome o);

struct RunLog
{
  std::string scenario_digest;
  std::vector<CycleRecord> cycles;
  Outcome outcome{Outcome::CycleLimit};
  double total_path_length{0.0};
  std::optional<std::string> failure;  // diagnostic when the run ended Stuck

  friend bool operator==(const RunLog &, const RunLog &) = default;
};

inline constexpr int kStallCycles = 10;

/// Ground-truth map of a scenario: generated or loaded, then inflated.
CostMap scenario_ground_truth(const Scenario & s);

/// Advances `step_time` seconds past `time_offset` along the trajectory and
/// adds zero-mean lateral noise. Throws EmptyTrajectory.
Pose2 follow_step(
  const Trajectory & selected, double time_offset, double step_time, double tracking_noise_sigma,
  std::mt19937_64 & rng);

/// Observes every cycle: the record, the published trajectory and the map it was planned on.
using CycleObserver =
  std::function<void(const CycleRecord &, const Trajectory &, const CostMap &)>;

RunLog run_scenario(const Scenario & s, const CycleObserver & observer = {});

/// Scenario for repetition `rep`: generated-map and rng seeds shifted by `rep`.
Scenario scenario_variant(const Scenario & base, int rep);

struct SweepRow
{
  std::string label;
  std::optional<double> alpha;  // empty for the baseline
  StabilitySummary summary;
  std::vector<double> mhds;
};

struct SweepCycle
{
  std::string label;
  int rep{0};
  CycleRecord record;
};

struct SweepResult
{
  std::vector<SweepRow> rows;  // one per alpha, then the baseline
  std::vector<SweepCycle> cycles;
  std::vector<RunLog> runs;    // config-major, rep-minor
};

struct SweepOptions
{
  double threshold{kDefaultMhdThreshold};
  bool directed{false};  // summarize the directed MHD instead of the symmetric one
  unsigned threads{0};   // 0: hardware concurrency
  CycleObserver observer;  // must be thread-safe when threads != 1
};

std::string alpha_label(double alpha);
inline constexpr const char * kBaselineLabel = "baseline";

SweepResult alpha_sweep(
  const Scenario & base, const std::vector<double> & alphas, int repetitions,
  const SweepOptions & options = {});

}  // namespace replan
