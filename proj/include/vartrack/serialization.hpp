#pragma once

#include <string>

#include <json.hpp>

#include "vartrack/scenario.hpp"
#include "vartrack/trackers.hpp"

namespace vartrack {

nlohmann::json to_json(const ScenarioConfig& cfg);
ScenarioConfig scenario_config_from_json(const nlohmann::json& j);

nlohmann::json to_json(const Scenario& scenario, int run_id);
Scenario scenario_from_json(const nlohmann::json& j);
int scenario_run_id(const nlohmann::json& j);

/// Per step, per sensor, per target mean and covariance.
nlohmann::json to_json(const TrackHistory& history, const std::string& mode,
                       int consensus_iters, int run_id);

void save_json(const nlohmann::json& j, const std::string& path);
nlohmann::json load_json(const std::string& path);

}  // namespace vartrack
