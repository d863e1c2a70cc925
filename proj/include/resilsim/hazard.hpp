#pragma once

#include "resilsim/network.hpp"

#include <stdexcept>
#include <string>
#include <variant>
#include <vector>

namespace resilsim {

/// Axis-aligned rectangle carrying one wind speed (e.g. a census tract).
struct WindCell {
    std::string name;
    double x_min = 0.0;
    double y_min = 0.0;
    double x_max = 0.0;
    double y_max = 0.0;
    double mph = 0.0;

    bool contains(Point p) const { return p.x >= x_min && p.x <= x_max && p.y >= y_min && p.y <= y_max; }
};

class OutOfExtentError : public std::runtime_error {
public:
    using std::runtime_error::runtime_error;
};

/// Peak wind, either uniform or piecewise constant over cells. Static for
/// the whole replication.
class WindField {
public:
    WindField() = default;
    explicit WindField(double uniform_mph);
    explicit WindField(std::vector<WindCell> cells);

    bool is_uniform() const { return std::holds_alternative<double>(field_); }
    double uniform_mph() const { return std::get<double>(field_); }
    const std::vector<WindCell>& cells() const { return std::get<std::vector<WindCell>>(field_); }

    /// First containing cell wins when cells overlap.
    double at(Point p) const;

private:
    std::variant<double, std::vector<WindCell>> field_ = 0.0;
};

struct HazardScenario {
    WindField wind;
    std::vector<double> initial_runoff_in;  // per road link index, post-storm peak
    double drainage_in_per_hr = 0.65;
    double passability_threshold_in = 2.0;
    bool fuel_dependence = true;
    bool crew_access_dependence = true;

    /// Throws std::invalid_argument on negative wind/depths, non-positive
    /// drainage or a runoff vector that does not match `link_count`.
    void validate(std::size_t link_count) const;
};

struct FloodState {
    std::vector<double> depth_in;  // per road link index
    int clock = 0;                 // hour
};

double wind_at(const HazardScenario& scenario, Point location);

FloodState initial_flood(const HazardScenario& scenario);

/// Advances one hour: every depth drops by the drainage rate, floored at 0.
FloodState drain_step(const FloodState& flood, const HazardScenario& scenario);

/// Inclusive at the threshold. Throws std::out_of_range for an unknown link.
bool link_passable(const FloodState& flood, const HazardScenario& scenario, Index link);

std::size_t passable_link_count(const FloodState& flood, const HazardScenario& scenario);

}  // namespace resilsim
