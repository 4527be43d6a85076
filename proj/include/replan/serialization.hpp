#pragma once

#include "replan/arbiter.hpp"
#include "replan/harness.hpp"
#include "replan/search.hpp"
#include "replan/trajectory.hpp"

#include "json.hpp"

#include <filesystem>
#include <string>

namespace replan
{

/// One JSONL line: {cycle, route, cost_now, cost_prev_updated, cost_prev_repaired,
/// selected_id, mhd, alpha, ...}. Absent values are null.
nlohmann::ordered_json cycle_record_to_json(const CycleRecord & r);
/// Throws MalformedHeader.
CycleRecord cycle_record_from_json(const nlohmann::json & j);

nlohmann::ordered_json trajectory_to_json(const Trajectory & t);

nlohmann::ordered_json expansion_to_json(const ExpansionEvent & e, Point2 position);

nlohmann::ordered_json scenario_to_json(const Scenario & s);
/// Map files named by "map_source": {"file": ...} resolve against `base_dir`.
/// Throws MalformedHeader.
Scenario scenario_from_json(const nlohmann::json & j, const std::filesystem::path & base_dir = {});

std::string scenario_digest(const Scenario & s);

}  // namespace replan
