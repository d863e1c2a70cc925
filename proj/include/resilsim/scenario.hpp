#pragma once

#include "resilsim/fragility.hpp"
#include "resilsim/hazard.hpp"
#include "resilsim/network.hpp"

#include <filesystem>
#include <optional>
#include <string>

namespace resilsim {

/// Everything a scenario file carries. Units are part of the key names:
/// mph, inches, inches/hour, meters.
struct ScenarioConfig {
    HazardScenario hazard;
    FragilityModel fragility;
    RepairModel repair = RepairModel::defaults();
    std::optional<int> teams;
    std::optional<Point> fuel_source_m;
};

/// Parses scenario JSON against a loaded road network (runoff keys are link
/// ids). Throws ParseError for malformed documents and unknown keys,
/// ReferenceError for unknown links, InvalidParams for bad fragility data.
ScenarioConfig parse_scenario(const std::string& json_text, const RoadNetwork& roads,
                              const std::string& label = "<scenario>");

ScenarioConfig load_scenario(const std::filesystem::path& path, const RoadNetwork& roads);

}  // namespace resilsim
