#pragma once

#include <cstdint>
#include <filesystem>
#include <iosfwd>
#include <limits>
#include <optional>
#include <stdexcept>
#include <string>
#include <string_view>
#include <unordered_map>
#include <utility>
#include <vector>

namespace resilsim {

using Index = std::uint32_t;
inline constexpr Index kNoIndex = std::numeric_limits<Index>::max();

/// Planar coordinate in meters.
struct Point {
    double x = 0.0;
    double y = 0.0;
};

double distance(Point a, Point b);

enum class ComponentKind {
    Plant,
    Substation,
    TransmissionTower,
    TransmissionLine,
    DistributionPole,
    Conductor,
};

enum class ComponentStatus { Operational, Failed, UnderRepair, Repaired };

/// Substation damage classes, ordered by severity.
enum class DamageLevel { Moderate, Severe, Complete };

std::string_view to_string(ComponentKind kind);
std::string_view to_string(ComponentStatus status);
std::string_view to_string(DamageLevel level);
ComponentKind parse_component_kind(std::string_view text);

/// Transmission, substations (and plants) form the critical tier; poles and
/// conductors are the distribution tier.
bool is_distribution(ComponentKind kind);
bool is_transmission(ComponentKind kind);

/// Operational and Repaired components conduct; everything else blocks.
inline bool conducts(ComponentStatus s) {
    return s == ComponentStatus::Operational || s == ComponentStatus::Repaired;
}

struct PowerComponent {
    std::string id;
    ComponentKind kind = ComponentKind::DistributionPole;
    Point location;
    ComponentStatus status = ComponentStatus::Operational;
    std::optional<DamageLevel> damage;  // substations only, once damaged
    Index nearest_road_link = kNoIndex;
    int crews_required = 1;
    double repair_hours_remaining = 0.0;
};

struct PowerNetwork {
    std::vector<PowerComponent> components;
    std::vector<std::vector<Index>> adjacency;
    std::vector<Index> plants;

    // Parallel to `plants`.
    std::vector<Index> fuel_source;       // road node, kNoIndex until assigned
    std::vector<Index> plant_road_node;   // road node "at" the plant
    std::vector<char> plant_fueled;       // fuel predicate for the current tick

    std::unordered_map<std::string, Index> index_of;

    std::size_t size() const { return components.size(); }
    Index find(std::string_view id) const;  // throws ReferenceError
    Index add_component(PowerComponent c);
    void connect(Index a, Index b);
};

struct Intersection {
    std::string id;
    Point location;
};

struct RoadLink {
    std::string id;
    Index from = kNoIndex;
    Index to = kNoIndex;
    double length_m = 0.0;
};

struct TrafficLight {
    std::string id;
    Index intersection = kNoIndex;
    Index feeder = kNoIndex;  // power component index
};

struct RoadNetwork {
    std::vector<Intersection> intersections;
    std::vector<RoadLink> links;
    std::vector<TrafficLight> traffic_lights;

    /// node -> (link, neighbor node)
    std::vector<std::vector<std::pair<Index, Index>>> adjacency;

    std::unordered_map<std::string, Index> node_index;
    std::unordered_map<std::string, Index> link_index;

    Index find_node(std::string_view id) const;
    Index find_link(std::string_view id) const;
    Point midpoint(Index link) const;
    Index add_node(Intersection n);
    Index add_link(RoadLink l);
};

struct Household {
    std::string id;
    Point location;
    Index attachment = kNoIndex;
    bool powered = true;
};

struct Networks {
    PowerNetwork power;
    RoadNetwork roads;
    std::vector<Household> households;
};

class ParseError : public std::runtime_error {
public:
    ParseError(const std::string& file, std::size_t line, const std::string& what);
    std::size_t line() const { return line_; }

private:
    std::size_t line_;
};

class ReferenceError : public std::runtime_error {
public:
    ReferenceError(std::string id, const std::string& context);
    const std::string& id() const { return id_; }

private:
    std::string id_;
};

class TopologyError : public std::runtime_error {
public:
    using std::runtime_error::runtime_error;
};

/// Reads the three line-record files, resolves references, maps every
/// component onto its nearest road link and verifies the pristine grid
/// powers every household.
Networks load_networks(const std::filesystem::path& power_file,
                       const std::filesystem::path& road_file,
                       const std::filesystem::path& coupling_file);

Networks load_networks(std::istream& power, std::istream& roads, std::istream& couplings,
                       const std::string& label = "<stream>");

/// Nearest link by Euclidean distance to link midpoints; ties go to the
/// lowest link index.
Index nearest_link(const RoadNetwork& roads, Point p);

/// Endpoint of the component's nearest link that lies closer to it.
Index access_node(const RoadNetwork& roads, const PowerComponent& c);

Index nearest_node(const RoadNetwork& roads, Point p);

/// Components reachable from a fueled plant through conducting components.
std::vector<bool> powered_set(const PowerNetwork& net);

/// Updates each household's `powered` flag and returns the powered fraction.
double powered_households(const std::vector<bool>& powered, std::vector<Household>& households);

double powered_traffic_lights(const std::vector<bool>& powered, const RoadNetwork& roads);

/// Multi-source shortest-path lengths (meters) over the road graph.
std::vector<double> road_distances(const RoadNetwork& roads, const std::vector<Index>& sources);

}  // namespace resilsim
