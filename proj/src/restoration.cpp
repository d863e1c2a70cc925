#include "resilsim/restoration.hpp"

#include "resilsim/interdependency.hpp"

#include <algorithm>
#include <deque>
#include <limits>
#include <numeric>
#include <stdexcept>
#include <string>
#include <tuple>

namespace resilsim {

std::string_view to_string(Strategy s) {
    switch (s) {
        case Strategy::ComponentBased: return "component";
        case Strategy::DistanceBased: return "distance";
        case Strategy::TrafficLightBased: return "traffic-light";
    }
    return "?";
}

Strategy parse_strategy(std::string_view text) {
    for (Strategy s : kAllStrategies) {
        if (to_string(s) == text) return s;
    }
    throw std::invalid_argument("unknown strategy '" + std::string(text) +
                                "' (valid: component, distance, traffic-light)");
}

CrewPool::CrewPool(int teams) : total(teams), available(teams) {
    if (teams < 0) throw std::invalid_argument("crew pool size must be non-negative");
}

void CrewPool::debit(int crews) {
    if (crews < 0 || crews > available) throw std::logic_error("crew debit exceeds available crews");
    available -= crews;
}

void CrewPool::credit(int crews) {
    if (crews < 0 || available + crews > total) throw std::logic_error("crew credit exceeds pool size");
    available += crews;
}

// ---------------------------------------------------------------------------

RestorationContext::RestorationContext(const PowerNetwork& net, const RoadNetwork& roads,
                                       const std::vector<Household>& households) {
    const std::size_t n = net.size();
    const double inf = std::numeric_limits<double>::infinity();
    parent_.assign(n, kNoIndex);
    feeding_substation_.assign(n, kNoIndex);
    dist_to_plant_.assign(n, inf);
    dist_to_substation_.assign(n, inf);

    std::vector<bool> seen(n, false);
    std::deque<Index> queue;
    for (Index p : net.plants) {
        seen[p] = true;
        queue.push_back(p);
    }
    while (!queue.empty()) {
        const Index u = queue.front();
        queue.pop_front();
        const auto& cu = net.components[u];
        if (cu.kind == ComponentKind::Substation) {
            feeding_substation_[u] = u;
        } else if (parent_[u] != kNoIndex) {
            feeding_substation_[u] = feeding_substation_[parent_[u]];
        }
        for (Index v : net.adjacency[u]) {
            if (seen[v]) continue;
            seen[v] = true;
            parent_[v] = u;
            queue.push_back(v);
        }
    }

    std::vector<Index> access(n);
    for (Index c = 0; c < n; ++c) access[c] = access_node(roads, net.components[c]);

    const auto from_plants = road_distances(roads, net.plant_road_node);
    for (Index c = 0; c < n; ++c) {
        if (access[c] != kNoIndex) dist_to_plant_[c] = from_plants[access[c]];
    }

    std::vector<std::vector<Index>> served(n);
    for (Index c = 0; c < n; ++c) {
        if (feeding_substation_[c] != kNoIndex) served[feeding_substation_[c]].push_back(c);
    }
    for (Index s = 0; s < n; ++s) {
        if (served[s].empty() || access[s] == kNoIndex) continue;
        const auto d = road_distances(roads, {access[s]});
        for (Index c : served[s]) {
            if (access[c] != kNoIndex) dist_to_substation_[c] = d[access[c]];
        }
    }

    household_substation_.reserve(households.size());
    for (const auto& h : households) household_substation_.push_back(feeding_substation_[h.attachment]);
    light_substation_.reserve(roads.traffic_lights.size());
    for (const auto& l : roads.traffic_lights) light_substation_.push_back(feeding_substation_[l.feeder]);
}

std::vector<bool> light_feeding_failures(const PowerNetwork& net, const RoadNetwork& roads,
                                         const RestorationContext& ctx, const std::vector<bool>& powered) {
    std::vector<bool> marked(net.size(), false);
    std::vector<bool> visited(net.size(), false);
    for (const auto& light : roads.traffic_lights) {
        if (powered[light.feeder]) continue;
        for (Index u = light.feeder; u != kNoIndex && !visited[u]; u = ctx.parent(u)) {
            visited[u] = true;
            if (!conducts(net.components[u].status)) marked[u] = true;
        }
    }
    return marked;
}

namespace {

struct Tiers {
    std::vector<Index> transmission;
    std::vector<Index> substations;
    std::vector<Index> distribution;
};

Tiers split_tiers(const std::vector<Index>& failed, const PowerNetwork& net) {
    Tiers t;
    for (Index c : failed) {
        const auto kind = net.components[c].kind;
        if (is_transmission(kind)) {
            t.transmission.push_back(c);
        } else if (kind == ComponentKind::Substation) {
            t.substations.push_back(c);
        } else if (is_distribution(kind)) {
            t.distribution.push_back(c);
        }
    }
    return t;
}

// Ascending key, ties by lowest component id.
template <class Key>
void sort_ascending(std::vector<Index>& v, const PowerNetwork& net, Key key) {
    std::sort(v.begin(), v.end(), [&](Index a, Index b) {
        const double ka = key(a);
        const double kb = key(b);
        if (ka != kb) return ka < kb;
        return net.components[a].id < net.components[b].id;
    });
}

std::vector<double> unpowered_per_substation(const std::vector<Index>& substation_of,
                                             const std::vector<bool>& is_powered, std::size_t n) {
    std::vector<double> counts(n, 0.0);
    for (std::size_t i = 0; i < substation_of.size(); ++i) {
        if (!is_powered[i] && substation_of[i] != kNoIndex) counts[substation_of[i]] += 1.0;
    }
    return counts;
}

void append(std::vector<Index>& out, const std::vector<Index>& part) {
    out.insert(out.end(), part.begin(), part.end());
}

std::pair<std::vector<Index>, std::vector<Index>> partition_by(const std::vector<Index>& v,
                                                               const std::vector<bool>& mark) {
    std::pair<std::vector<Index>, std::vector<Index>> out;
    for (Index c : v) (mark[c] ? out.first : out.second).push_back(c);
    return out;
}

}  // namespace

std::vector<Index> priority_order(Strategy strategy, const std::vector<Index>& failed, const PowerNetwork& net,
                                  const RoadNetwork& roads, const RestorationContext& ctx,
                                  const ServiceView& service, Rng& rng) {
    Tiers t = split_tiers(failed, net);

    std::vector<bool> household_on(service.households.size());
    for (std::size_t i = 0; i < service.households.size(); ++i) household_on[i] = service.households[i].powered;
    const auto n_households = unpowered_per_substation(ctx.household_substation(), household_on, net.size());

    auto by_plant_distance = [&](Index c) { return ctx.dist_to_plant(c); };
    auto by_substation_distance = [&](Index c) { return ctx.dist_to_substation(c); };
    auto by_households = [&](Index c) { return -n_households[c]; };

    std::vector<Index> order;
    order.reserve(failed.size());

    switch (strategy) {
        case Strategy::ComponentBased: {
            std::sort(t.transmission.begin(), t.transmission.end());
            sort_ascending(t.substations, net, by_households);
            std::sort(t.distribution.begin(), t.distribution.end());
            std::shuffle(t.distribution.begin(), t.distribution.end(), rng);
            append(order, t.transmission);
            append(order, t.substations);
            append(order, t.distribution);
            break;
        }
        case Strategy::DistanceBased: {
            sort_ascending(t.transmission, net, by_plant_distance);
            sort_ascending(t.substations, net, by_households);
            sort_ascending(t.distribution, net, by_substation_distance);
            append(order, t.transmission);
            append(order, t.substations);
            append(order, t.distribution);
            break;
        }
        case Strategy::TrafficLightBased: {
            const auto feeds_light = light_feeding_failures(net, roads, ctx, service.powered);
            std::vector<bool> light_on(roads.traffic_lights.size());
            for (std::size_t i = 0; i < roads.traffic_lights.size(); ++i)
                light_on[i] = service.powered[roads.traffic_lights[i].feeder];
            const auto n_lights = unpowered_per_substation(ctx.light_substation(), light_on, net.size());
            auto by_lights = [&](Index c) { return -n_lights[c]; };

            auto [tx_light, tx_rest] = partition_by(t.transmission, feeds_light);
            auto [sub_light, sub_rest] = partition_by(t.substations, feeds_light);
            auto [dist_light, dist_rest] = partition_by(t.distribution, feeds_light);
            sort_ascending(tx_light, net, by_plant_distance);
            sort_ascending(sub_light, net, by_lights);
            sort_ascending(tx_rest, net, by_plant_distance);
            sort_ascending(sub_rest, net, by_households);
            sort_ascending(dist_light, net, by_substation_distance);
            sort_ascending(dist_rest, net, by_substation_distance);
            append(order, tx_light);
            append(order, sub_light);
            append(order, tx_rest);
            append(order, sub_rest);
            append(order, dist_light);
            append(order, dist_rest);
            break;
        }
    }
    return order;
}

// ---------------------------------------------------------------------------

RestorationScheduler::RestorationScheduler(int teams) : pool_(teams) {
    if (teams < 1) throw std::invalid_argument("at least one restoration team is required");
}

void RestorationScheduler::assign_repair(PowerComponent& component, Index index, RepairAssignment repair) {
    if (planned_.size() <= index) planned_.resize(index + 1, 0);
    planned_[index] = repair.hours;
    component.crews_required = repair.crews;
}

int RestorationScheduler::planned_hours(Index c) const {
    return c < planned_.size() ? planned_[c] : 0;
}

std::vector<Index> RestorationScheduler::complete_due(int hour, PowerNetwork& net) {
    std::vector<Index> done;
    auto keep = active_.begin();
    for (auto& job : active_) {
        auto& c = net.components[job.component];
        if (job.finish_hour() <= hour) {
            c.status = ComponentStatus::Repaired;
            c.repair_hours_remaining = 0.0;
            pool_.credit(job.crews);
            done.push_back(job.component);
        } else {
            c.repair_hours_remaining = static_cast<double>(job.finish_hour() - hour);
            *keep++ = job;
        }
    }
    active_.erase(keep, active_.end());
    return done;
}

void RestorationScheduler::start(int hour, Index c, int crews, PowerNetwork& net) {
    const int hours = planned_hours(c);
    if (hours < 1) throw std::logic_error("no repair duration assigned to '" + net.components[c].id + "'");
    pool_.debit(crews);
    active_.push_back({c, hour, hours, crews});
    auto& comp = net.components[c];
    comp.status = ComponentStatus::UnderRepair;
    comp.repair_hours_remaining = static_cast<double>(hours);
}

std::vector<Index> RestorationScheduler::start_jobs(int hour, const std::vector<Index>& order, PowerNetwork& net,
                                                    const FloodState& flood, const HazardScenario& scenario) {
    std::vector<Index> started;
    std::optional<Index> oversized;
    for (Index c : order) {
        if (pool_.available == 0) break;
        const auto& comp = net.components[c];
        if (comp.status != ComponentStatus::Failed) continue;
        if (!component_accessible(comp, flood, scenario)) continue;
        if (comp.crews_required > pool_.total) {
            if (!oversized) oversized = c;
            continue;
        }
        if (comp.crews_required > pool_.available) continue;
        start(hour, c, comp.crews_required, net);
        started.push_back(c);
    }
    if (oversized && pool_.available == pool_.total) {
        start(hour, *oversized, pool_.total, net);
        started.push_back(*oversized);
    }
    return started;
}

bool RestorationScheduler::crews_conserved() const {
    int held = 0;
    for (const auto& job : active_) held += job.crews;
    return held + pool_.available == pool_.total && pool_.available >= 0;
}

TickOutcome schedule_tick(int hour, Strategy strategy, RestorationScheduler& scheduler, PowerNetwork& net,
                          const RoadNetwork& roads, std::vector<Household>& households,
                          const RestorationContext& ctx, const FloodState& flood, const HazardScenario& scenario,
                          Rng& rng) {
    TickOutcome out;
    out.completed = scheduler.complete_due(hour, net);
    const auto powered = powered_set(net);
    powered_households(powered, households);
    std::vector<Index> failed;
    for (Index c = 0; c < net.size(); ++c) {
        if (net.components[c].status == ComponentStatus::Failed) failed.push_back(c);
    }
    const auto order = priority_order(strategy, failed, net, roads, ctx, {powered, households}, rng);
    out.started = scheduler.start_jobs(hour, order, net, flood, scenario);
    return out;
}

}  // namespace resilsim
