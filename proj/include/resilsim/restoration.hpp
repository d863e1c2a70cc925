#pragma once

#include "resilsim/fragility.hpp"
#include "resilsim/hazard.hpp"
#include "resilsim/network.hpp"
#include "resilsim/random.hpp"

#include <optional>
#include <string>
#include <string_view>
#include <vector>

namespace resilsim {

enum class Strategy { ComponentBased, DistanceBased, TrafficLightBased };

std::string_view to_string(Strategy s);

/// Accepts "component", "distance", "traffic-light". Throws
/// std::invalid_argument listing the valid names otherwise.
Strategy parse_strategy(std::string_view text);

inline constexpr Strategy kAllStrategies[] = {Strategy::ComponentBased, Strategy::DistanceBased,
                                              Strategy::TrafficLightBased};

struct CrewPool {
    int total = 0;
    int available = 0;

    explicit CrewPool(int teams = 0);
    void debit(int crews);
    void credit(int crews);
};

struct RepairJob {
    Index component = kNoIndex;
    int start_hour = 0;
    int duration_hours = 1;
    int crews = 1;

    int finish_hour() const { return start_hour + duration_hours; }
};

/// Static facts about the pristine networks that the strategies sort by.
/// Built once per network pair and shared read-only across replications.
class RestorationContext {
public:
    RestorationContext(const PowerNetwork& net, const RoadNetwork& roads, const std::vector<Household>& households);

    /// Parent on the pristine breadth-first tree rooted at the plants.
    Index parent(Index c) const { return parent_[c]; }
    /// First substation on the pristine path from a plant; kNoIndex above it.
    Index feeding_substation(Index c) const { return feeding_substation_[c]; }
    /// Road distance (m) from the component to the nearest plant.
    double dist_to_plant(Index c) const { return dist_to_plant_[c]; }
    /// Road distance (m) from the component to its feeding substation.
    double dist_to_substation(Index c) const { return dist_to_substation_[c]; }

    const std::vector<Index>& household_substation() const { return household_substation_; }
    const std::vector<Index>& light_substation() const { return light_substation_; }

private:
    std::vector<Index> parent_;
    std::vector<Index> feeding_substation_;
    std::vector<double> dist_to_plant_;
    std::vector<double> dist_to_substation_;
    std::vector<Index> household_substation_;
    std::vector<Index> light_substation_;
};

/// Per-tick service state the strategies read.
struct ServiceView {
    const std::vector<bool>& powered;
    const std::vector<Household>& households;  // `powered` flags current
};

/// Ordered repair list for the failed (not yet under repair) components.
/// Every strategy puts transmission and substations ahead of distribution.
std::vector<Index> priority_order(Strategy strategy, const std::vector<Index>& failed, const PowerNetwork& net,
                                  const RoadNetwork& roads, const RestorationContext& ctx,
                                  const ServiceView& service, Rng& rng);

/// Failed components on the pristine path feeding any unpowered light.
std::vector<bool> light_feeding_failures(const PowerNetwork& net, const RoadNetwork& roads,
                                         const RestorationContext& ctx, const std::vector<bool>& powered);

class RestorationScheduler {
public:
    explicit RestorationScheduler(int teams);

    const CrewPool& pool() const { return pool_; }
    const std::vector<RepairJob>& active_jobs() const { return active_; }

    /// Records the sampled repair for a newly failed component.
    void assign_repair(PowerComponent& component, Index index, RepairAssignment repair);
    int planned_hours(Index c) const;

    /// Completes every job with start + duration <= hour; credits crews.
    std::vector<Index> complete_due(int hour, PowerNetwork& net);

    /// Walks `order`, skipping inaccessible components and those needing more
    /// crews than are free. A job larger than the whole pool starts with every
    /// crew once the walk leaves the pool completely idle.
    std::vector<Index> start_jobs(int hour, const std::vector<Index>& order, PowerNetwork& net,
                                  const FloodState& flood, const HazardScenario& scenario);

    /// Crews held by active jobs plus free crews equal the pool size.
    bool crews_conserved() const;

private:
    void start(int hour, Index c, int crews, PowerNetwork& net);

    CrewPool pool_;
    std::vector<RepairJob> active_;
    std::vector<int> planned_;  // by component index, 0 when unassigned
};

/// One hour of the restoration flow: complete due jobs, order the remaining
/// failures and start what crews and roads allow.
struct TickOutcome {
    std::vector<Index> completed;
    std::vector<Index> started;
};

TickOutcome schedule_tick(int hour, Strategy strategy, RestorationScheduler& scheduler, PowerNetwork& net,
                          const RoadNetwork& roads, std::vector<Household>& households,
                          const RestorationContext& ctx, const FloodState& flood, const HazardScenario& scenario,
                          Rng& rng);

}  // namespace resilsim
