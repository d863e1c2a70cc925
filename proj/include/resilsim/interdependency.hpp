#pragma once

#include "resilsim/hazard.hpp"
#include "resilsim/network.hpp"

namespace resilsim {

/// Crews reach a component through its nearest road link; always true when
/// crew access dependence is off.
bool component_accessible(const PowerComponent& component, const FloodState& flood,
                          const HazardScenario& scenario);

/// True when some path of passable links joins the plant's fuel source to the
/// road node at the plant. Covers first, second, ... shortest routes alike.
bool fuel_route_available(std::size_t plant_slot, const PowerNetwork& net, const RoadNetwork& roads,
                          const FloodState& flood, const HazardScenario& scenario);

bool plant_operational(std::size_t plant_slot, const PowerNetwork& net, const RoadNetwork& roads,
                       const FloodState& flood, const HazardScenario& scenario);

/// Refreshes `net.plant_fueled` for the current tick.
void update_plant_fuel(PowerNetwork& net, const RoadNetwork& roads, const FloodState& flood,
                       const HazardScenario& scenario);

/// Fills unset fuel sources with the road node nearest `fuel_location`.
void assign_fuel_sources(PowerNetwork& net, const RoadNetwork& roads, Point fuel_location);

}  // namespace resilsim
