#include "resilsim/network.hpp"

#include "resilsim/text_records.hpp"

#include <algorithm>
#include <cmath>
#include <deque>
#include <fstream>
#include <functional>
#include <queue>
#include <sstream>

namespace resilsim {

double distance(Point a, Point b) {
    return std::hypot(a.x - b.x, a.y - b.y);
}

std::string_view to_string(ComponentKind kind) {
    switch (kind) {
        case ComponentKind::Plant: return "plant";
        case ComponentKind::Substation: return "substation";
        case ComponentKind::TransmissionTower: return "tower";
        case ComponentKind::TransmissionLine: return "line";
        case ComponentKind::DistributionPole: return "pole";
        case ComponentKind::Conductor: return "conductor";
    }
    return "?";
}

std::string_view to_string(ComponentStatus status) {
    switch (status) {
        case ComponentStatus::Operational: return "operational";
        case ComponentStatus::Failed: return "failed";
        case ComponentStatus::UnderRepair: return "under-repair";
        case ComponentStatus::Repaired: return "repaired";
    }
    return "?";
}

std::string_view to_string(DamageLevel level) {
    switch (level) {
        case DamageLevel::Moderate: return "moderate";
        case DamageLevel::Severe: return "severe";
        case DamageLevel::Complete: return "complete";
    }
    return "?";
}

ComponentKind parse_component_kind(std::string_view text) {
    for (auto k : {ComponentKind::Plant, ComponentKind::Substation, ComponentKind::TransmissionTower,
                   ComponentKind::TransmissionLine, ComponentKind::DistributionPole,
                   ComponentKind::Conductor}) {
        if (to_string(k) == text) return k;
    }
    throw std::invalid_argument("unknown component kind '" + std::string(text) + "'");
}

bool is_distribution(ComponentKind kind) {
    return kind == ComponentKind::DistributionPole || kind == ComponentKind::Conductor;
}

bool is_transmission(ComponentKind kind) {
    return kind == ComponentKind::TransmissionTower || kind == ComponentKind::TransmissionLine;
}

ParseError::ParseError(const std::string& file, std::size_t line, const std::string& what)
    : std::runtime_error(file + ":" + std::to_string(line) + ": " + what), line_(line) {}

ReferenceError::ReferenceError(std::string id, const std::string& context)
    : std::runtime_error("dangling reference to '" + id + "' (" + context + ")"), id_(std::move(id)) {}

Index PowerNetwork::find(std::string_view id) const {
    auto it = index_of.find(std::string(id));
    if (it == index_of.end()) throw ReferenceError(std::string(id), "power component");
    return it->second;
}

Index PowerNetwork::add_component(PowerComponent c) {
    auto idx = static_cast<Index>(components.size());
    if (!index_of.emplace(c.id, idx).second)
        throw std::invalid_argument("duplicate power component id '" + c.id + "'");
    if (c.kind == ComponentKind::Plant) {
        plants.push_back(idx);
        fuel_source.push_back(kNoIndex);
        plant_road_node.push_back(kNoIndex);
        plant_fueled.push_back(1);
    }
    components.push_back(std::move(c));
    adjacency.emplace_back();
    return idx;
}

void PowerNetwork::connect(Index a, Index b) {
    adjacency.at(a).push_back(b);
    adjacency.at(b).push_back(a);
}

Index RoadNetwork::find_node(std::string_view id) const {
    auto it = node_index.find(std::string(id));
    if (it == node_index.end()) throw ReferenceError(std::string(id), "road intersection");
    return it->second;
}

Index RoadNetwork::find_link(std::string_view id) const {
    auto it = link_index.find(std::string(id));
    if (it == link_index.end()) throw ReferenceError(std::string(id), "road link");
    return it->second;
}

Point RoadNetwork::midpoint(Index link) const {
    const auto& l = links.at(link);
    const auto& a = intersections[l.from].location;
    const auto& b = intersections[l.to].location;
    return {(a.x + b.x) / 2.0, (a.y + b.y) / 2.0};
}

Index RoadNetwork::add_node(Intersection n) {
    auto idx = static_cast<Index>(intersections.size());
    if (!node_index.emplace(n.id, idx).second)
        throw std::invalid_argument("duplicate intersection id '" + n.id + "'");
    intersections.push_back(std::move(n));
    adjacency.emplace_back();
    return idx;
}

Index RoadNetwork::add_link(RoadLink l) {
    if (!(l.length_m > 0.0)) throw std::invalid_argument("road link '" + l.id + "' must have positive length");
    auto idx = static_cast<Index>(links.size());
    if (!link_index.emplace(l.id, idx).second)
        throw std::invalid_argument("duplicate road link id '" + l.id + "'");
    adjacency.at(l.from).emplace_back(idx, l.to);
    adjacency.at(l.to).emplace_back(idx, l.from);
    links.push_back(std::move(l));
    return idx;
}

Index nearest_link(const RoadNetwork& roads, Point p) {
    Index best = kNoIndex;
    double best_d2 = std::numeric_limits<double>::infinity();
    for (Index i = 0; i < roads.links.size(); ++i) {
        const Point m = roads.midpoint(i);
        const double dx = m.x - p.x;
        const double dy = m.y - p.y;
        const double d2 = dx * dx + dy * dy;
        if (d2 < best_d2) {
            best_d2 = d2;
            best = i;
        }
    }
    return best;
}

Index access_node(const RoadNetwork& roads, const PowerComponent& c) {
    if (c.nearest_road_link == kNoIndex) return kNoIndex;
    const auto& l = roads.links[c.nearest_road_link];
    const double da = distance(roads.intersections[l.from].location, c.location);
    const double db = distance(roads.intersections[l.to].location, c.location);
    return db < da ? l.to : l.from;
}

Index nearest_node(const RoadNetwork& roads, Point p) {
    Index best = kNoIndex;
    double best_d = std::numeric_limits<double>::infinity();
    for (Index i = 0; i < roads.intersections.size(); ++i) {
        const double d = distance(roads.intersections[i].location, p);
        if (d < best_d) {
            best_d = d;
            best = i;
        }
    }
    return best;
}

std::vector<bool> powered_set(const PowerNetwork& net) {
    std::vector<bool> seen(net.size(), false);
    std::vector<Index> stack;
    for (std::size_t k = 0; k < net.plants.size(); ++k) {
        const Index p = net.plants[k];
        if (!net.plant_fueled[k] || !conducts(net.components[p].status)) continue;
        seen[p] = true;
        stack.push_back(p);
    }
    while (!stack.empty()) {
        const Index u = stack.back();
        stack.pop_back();
        for (Index v : net.adjacency[u]) {
            if (seen[v] || !conducts(net.components[v].status)) continue;
            seen[v] = true;
            stack.push_back(v);
        }
    }
    return seen;
}

double powered_households(const std::vector<bool>& powered, std::vector<Household>& households) {
    if (households.empty()) return 1.0;
    std::size_t on = 0;
    for (auto& h : households) {
        h.powered = powered[h.attachment];
        on += h.powered ? 1 : 0;
    }
    return static_cast<double>(on) / static_cast<double>(households.size());
}

double powered_traffic_lights(const std::vector<bool>& powered, const RoadNetwork& roads) {
    if (roads.traffic_lights.empty()) return 1.0;
    std::size_t on = 0;
    for (const auto& light : roads.traffic_lights) on += powered[light.feeder] ? 1 : 0;
    return static_cast<double>(on) / static_cast<double>(roads.traffic_lights.size());
}

std::vector<double> road_distances(const RoadNetwork& roads, const std::vector<Index>& sources) {
    const double inf = std::numeric_limits<double>::infinity();
    std::vector<double> dist(roads.intersections.size(), inf);
    using Entry = std::pair<double, Index>;
    std::priority_queue<Entry, std::vector<Entry>, std::greater<>> queue;
    for (Index s : sources) {
        if (s == kNoIndex) continue;
        dist[s] = 0.0;
        queue.emplace(0.0, s);
    }
    while (!queue.empty()) {
        auto [d, u] = queue.top();
        queue.pop();
        if (d > dist[u]) continue;
        for (auto [link, v] : roads.adjacency[u]) {
            const double nd = d + roads.links[link].length_m;
            if (nd < dist[v]) {
                dist[v] = nd;
                queue.emplace(nd, v);
            }
        }
    }
    return dist;
}

namespace {

void parse_power(std::istream& in, const std::string& label, PowerNetwork& net) {
    struct PendingEdge {
        std::size_t line;
        std::string a, b;
    };
    std::vector<PendingEdge> edges;
    for_each_record(in, label, [&](const Record& r) {
        if (r.tag() == "component") {
            r.expect_fields(5);
            PowerComponent c;
            c.id = r.text(1);
            try {
                c.kind = parse_component_kind(r.text(2));
            } catch (const std::invalid_argument& e) {
                throw ParseError(label, r.line, e.what());
            }
            c.location = {r.number(3), r.number(4)};
            try {
                net.add_component(std::move(c));
            } catch (const std::invalid_argument& e) {
                throw ParseError(label, r.line, e.what());
            }
        } else if (r.tag() == "edge") {
            r.expect_fields(3);
            edges.push_back({r.line, r.text(1), r.text(2)});
        } else {
            throw ParseError(label, r.line, "unknown record type '" + r.tag() + "'");
        }
    });
    for (const auto& e : edges) {
        const std::string ctx = label + ":" + std::to_string(e.line) + " edge";
        auto ia = net.index_of.find(e.a);
        if (ia == net.index_of.end()) throw ReferenceError(e.a, ctx);
        auto ib = net.index_of.find(e.b);
        if (ib == net.index_of.end()) throw ReferenceError(e.b, ctx);
        net.connect(ia->second, ib->second);
    }
}

void parse_roads(std::istream& in, const std::string& label, RoadNetwork& roads) {
    for_each_record(in, label, [&](const Record& r) {
        if (r.tag() == "node") {
            r.expect_fields(4);
            try {
                roads.add_node({r.text(1), {r.number(2), r.number(3)}});
            } catch (const std::invalid_argument& e) {
                throw ParseError(label, r.line, e.what());
            }
        } else if (r.tag() == "link") {
            r.expect_fields(5);
            const std::string ctx = label + ":" + std::to_string(r.line) + " link";
            auto from = roads.node_index.find(r.text(2));
            if (from == roads.node_index.end()) throw ReferenceError(r.text(2), ctx);
            auto to = roads.node_index.find(r.text(3));
            if (to == roads.node_index.end()) throw ReferenceError(r.text(3), ctx);
            try {
                roads.add_link({r.text(1), from->second, to->second, r.number(4)});
            } catch (const std::invalid_argument& e) {
                throw ParseError(label, r.line, e.what());
            }
        } else {
            throw ParseError(label, r.line, "unknown record type '" + r.tag() + "'");
        }
    });
}

void parse_couplings(std::istream& in, const std::string& label, Networks& nets) {
    std::unordered_map<std::string, std::size_t> seen_households;
    std::unordered_map<std::string, std::size_t> seen_lights;
    for_each_record(in, label, [&](const Record& r) {
        const std::string ctx = label + ":" + std::to_string(r.line) + " " + r.tag();
        auto component = [&](std::size_t field) {
            auto it = nets.power.index_of.find(r.text(field));
            if (it == nets.power.index_of.end()) throw ReferenceError(r.text(field), ctx);
            return it->second;
        };
        auto node = [&](std::size_t field) {
            auto it = nets.roads.node_index.find(r.text(field));
            if (it == nets.roads.node_index.end()) throw ReferenceError(r.text(field), ctx);
            return it->second;
        };
        if (r.tag() == "household") {
            r.expect_fields(5);
            if (!seen_households.emplace(r.text(1), r.line).second)
                throw ParseError(label, r.line, "duplicate household id '" + r.text(1) + "'");
            nets.households.push_back({r.text(1), {r.number(2), r.number(3)}, component(4), true});
        } else if (r.tag() == "light") {
            r.expect_fields(4);
            if (!seen_lights.emplace(r.text(1), r.line).second)
                throw ParseError(label, r.line, "duplicate traffic light id '" + r.text(1) + "'");
            nets.roads.traffic_lights.push_back({r.text(1), node(2), component(3)});
        } else if (r.tag() == "fuel") {
            r.expect_fields(3);
            const Index plant = component(1);
            auto slot = std::find(nets.power.plants.begin(), nets.power.plants.end(), plant);
            if (slot == nets.power.plants.end())
                throw ParseError(label, r.line, "'" + r.text(1) + "' is not a plant");
            nets.power.fuel_source[static_cast<std::size_t>(slot - nets.power.plants.begin())] = node(2);
        } else {
            throw ParseError(label, r.line, "unknown record type '" + r.tag() + "'");
        }
    });
}

std::ifstream open_input(const std::filesystem::path& p) {
    std::ifstream in(p);
    if (!in) throw std::runtime_error("cannot open '" + p.string() + "'");
    return in;
}

void finalize(Networks& nets) {
    if (nets.roads.links.empty()) throw TopologyError("road network has no links");
    for (auto& c : nets.power.components) c.nearest_road_link = nearest_link(nets.roads, c.location);
    for (std::size_t k = 0; k < nets.power.plants.size(); ++k) {
        nets.power.plant_road_node[k] =
            access_node(nets.roads, nets.power.components[nets.power.plants[k]]);
    }
    const auto powered = powered_set(nets.power);
    for (const auto& h : nets.households) {
        if (!powered[h.attachment]) {
            throw TopologyError("household '" + h.id + "' cannot reach a plant in the pristine grid");
        }
    }
}

}  // namespace

Networks load_networks(std::istream& power, std::istream& roads, std::istream& couplings,
                       const std::string& label) {
    Networks nets;
    parse_power(power, label + " (power)", nets.power);
    parse_roads(roads, label + " (roads)", nets.roads);
    parse_couplings(couplings, label + " (couplings)", nets);
    finalize(nets);
    return nets;
}

Networks load_networks(const std::filesystem::path& power_file, const std::filesystem::path& road_file,
                       const std::filesystem::path& coupling_file) {
    auto power = open_input(power_file);
    auto roads = open_input(road_file);
    auto couplings = open_input(coupling_file);
    Networks nets;
    parse_power(power, power_file.string(), nets.power);
    parse_roads(roads, road_file.string(), nets.roads);
    parse_couplings(couplings, coupling_file.string(), nets);
    finalize(nets);
    return nets;
}

}  // namespace resilsim
