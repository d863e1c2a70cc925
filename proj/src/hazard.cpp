#include "resilsim/hazard.hpp"

#include <algorithm>
#include <cmath>

namespace resilsim {

namespace {
// Absorbs rounding in initial - rate * hours so that a link drained exactly to
// the threshold counts as passable.
constexpr double kDepthTolerance = 1e-9;
}  // namespace

WindField::WindField(double uniform_mph) : field_(uniform_mph) {
    if (!(uniform_mph >= 0.0)) throw std::invalid_argument("wind speed must be non-negative");
}

WindField::WindField(std::vector<WindCell> cells) {
    if (cells.empty()) throw std::invalid_argument("wind cell map is empty");
    for (const auto& c : cells) {
        if (!(c.mph >= 0.0)) throw std::invalid_argument("wind cell '" + c.name + "' has negative speed");
        if (c.x_max < c.x_min || c.y_max < c.y_min)
            throw std::invalid_argument("wind cell '" + c.name + "' has inverted bounds");
    }
    field_ = std::move(cells);
}

double WindField::at(Point p) const {
    if (is_uniform()) return uniform_mph();
    for (const auto& c : cells()) {
        if (c.contains(p)) return c.mph;
    }
    throw OutOfExtentError("location (" + std::to_string(p.x) + ", " + std::to_string(p.y) +
                           ") is outside every wind cell");
}

void HazardScenario::validate(std::size_t link_count) const {
    if (!(drainage_in_per_hr > 0.0)) throw std::invalid_argument("drainage rate must be positive");
    if (!(passability_threshold_in >= 0.0)) throw std::invalid_argument("passability threshold must be >= 0");
    if (initial_runoff_in.size() != link_count) {
        throw std::invalid_argument("runoff depths cover " + std::to_string(initial_runoff_in.size()) +
                                    " links, road network has " + std::to_string(link_count));
    }
    for (double d : initial_runoff_in) {
        if (!(d >= 0.0)) throw std::invalid_argument("runoff depth must be non-negative");
    }
}

double wind_at(const HazardScenario& scenario, Point location) {
    return scenario.wind.at(location);
}

FloodState initial_flood(const HazardScenario& scenario) {
    return FloodState{scenario.initial_runoff_in, 0};
}

FloodState drain_step(const FloodState& flood, const HazardScenario& scenario) {
    FloodState next;
    next.clock = flood.clock + 1;
    const double drained = scenario.drainage_in_per_hr * next.clock;
    next.depth_in.resize(flood.depth_in.size());
    for (std::size_t i = 0; i < flood.depth_in.size(); ++i) {
        double depth = flood.depth_in[i] - scenario.drainage_in_per_hr;
        // States that track the scenario's runoff are recomputed from the
        // initial depth so repeated steps do not accumulate rounding error.
        if (i < scenario.initial_runoff_in.size()) {
            const double from_initial = scenario.initial_runoff_in[i] - drained;
            if (std::abs(from_initial - depth) < 1e-6) depth = from_initial;
        }
        next.depth_in[i] = std::max(0.0, depth);
    }
    return next;
}

bool link_passable(const FloodState& flood, const HazardScenario& scenario, Index link) {
    if (link >= flood.depth_in.size()) throw std::out_of_range("unknown road link index " + std::to_string(link));
    return flood.depth_in[link] <= scenario.passability_threshold_in + kDepthTolerance;
}

std::size_t passable_link_count(const FloodState& flood, const HazardScenario& scenario) {
    return static_cast<std::size_t>(std::count_if(flood.depth_in.begin(), flood.depth_in.end(), [&](double d) {
        return d <= scenario.passability_threshold_in + kDepthTolerance;
    }));
}

}  // namespace resilsim
