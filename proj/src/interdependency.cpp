#include "resilsim/interdependency.hpp"

#include <vector>

namespace resilsim {

bool component_accessible(const PowerComponent& component, const FloodState& flood,
                          const HazardScenario& scenario) {
    if (!scenario.crew_access_dependence) return true;
    return link_passable(flood, scenario, component.nearest_road_link);
}

bool fuel_route_available(std::size_t plant_slot, const PowerNetwork& net, const RoadNetwork& roads,
                          const FloodState& flood, const HazardScenario& scenario) {
    if (!scenario.fuel_dependence) return true;
    const Index source = net.fuel_source.at(plant_slot);
    const Index target = net.plant_road_node.at(plant_slot);
    if (source == kNoIndex || target == kNoIndex) return false;
    if (source == target) return true;

    std::vector<bool> seen(roads.intersections.size(), false);
    std::vector<Index> stack{source};
    seen[source] = true;
    while (!stack.empty()) {
        const Index u = stack.back();
        stack.pop_back();
        for (auto [link, v] : roads.adjacency[u]) {
            if (seen[v] || !link_passable(flood, scenario, link)) continue;
            if (v == target) return true;
            seen[v] = true;
            stack.push_back(v);
        }
    }
    return false;
}

bool plant_operational(std::size_t plant_slot, const PowerNetwork& net, const RoadNetwork& roads,
                       const FloodState& flood, const HazardScenario& scenario) {
    return fuel_route_available(plant_slot, net, roads, flood, scenario);
}

void update_plant_fuel(PowerNetwork& net, const RoadNetwork& roads, const FloodState& flood,
                       const HazardScenario& scenario) {
    for (std::size_t k = 0; k < net.plants.size(); ++k) {
        net.plant_fueled[k] = plant_operational(k, net, roads, flood, scenario) ? 1 : 0;
    }
}

void assign_fuel_sources(PowerNetwork& net, const RoadNetwork& roads, Point fuel_location) {
    const Index node = nearest_node(roads, fuel_location);
    for (auto& src : net.fuel_source) {
        if (src == kNoIndex) src = node;
    }
}

}  // namespace resilsim
