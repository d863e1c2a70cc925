#pragma once

#include "resilsim/hazard.hpp"
#include "resilsim/network.hpp"

#include <array>
#include <cmath>
#include <map>
#include <optional>
#include <random>
#include <stdexcept>
#include <utility>

namespace resilsim {

class InvalidParams : public std::invalid_argument {
public:
    using std::invalid_argument::invalid_argument;
};

/// Log-space mean and standard deviation of wind speed (mph).
struct LognormalParams {
    double mu = 0.0;
    double sigma = 1.0;
};

struct DamageProbabilities {
    double moderate = 0.0;
    double severe = 0.0;
    double complete = 0.0;
};

/// Lognormal exceedance curves for the three substation damage levels.
/// Construction rejects sigma <= 0 and any parameter set whose curves are not
/// nested (complete <= severe <= moderate) on a 0.01 mph grid over [0, 250].
class SubstationFragility {
public:
    SubstationFragility(LognormalParams moderate, LognormalParams severe, LognormalParams complete);

    /// Non-authoritative stand-ins: medians 140/170/200 mph, sigma 0.2.
    /// Replace with HAZUS-MH values for the terrain and building class.
    static SubstationFragility placeholder();

    const LognormalParams& moderate() const { return levels_[0]; }
    const LognormalParams& severe() const { return levels_[1]; }
    const LognormalParams& complete() const { return levels_[2]; }

private:
    std::array<LognormalParams, 3> levels_;
};

/// Transmission-line thresholds in mph; 0 < critical < collapse.
class LineFragility {
public:
    LineFragility(double w_critical_mph, double w_collapse_mph);

    /// 30 and 60 m/s converted to mph.
    static LineFragility defaults();

    double w_critical_mph() const { return critical_; }
    double w_collapse_mph() const { return collapse_; }

private:
    double critical_;
    double collapse_;
};

inline constexpr double kMphPerMetrePerSecond = 2.23694;

struct FragilityModel {
    SubstationFragility substation = SubstationFragility::placeholder();
    LineFragility line = LineFragility::defaults();
};

double lognormal_cdf(double x, const LognormalParams& p);

DamageProbabilities p_fail_substation(double mph, const SubstationFragility& params);
double p_fail_tower(double mph);
double p_fail_line(double mph, const LineFragility& params);
double p_fail_pole(double mph);
double p_fail_conductor(double mph);

/// Failure probability for non-substation kinds; plants never fail.
double failure_probability(ComponentKind kind, double mph, const FragilityModel& model);

/// Most severe level whose exceedance probability is above the draw.
std::optional<DamageLevel> classify_substation_damage(const DamageProbabilities& p, double r);

// ---------------------------------------------------------------------------
// Repair

struct RepairRow {
    double mean_hours = 1.0;
    double sd_hours = 0.0;
    int crews = 1;
};

class MissingRepairRow : public std::invalid_argument {
public:
    using std::invalid_argument::invalid_argument;
};

class RepairModel {
public:
    /// Published restoration-time distributions and crew requirements.
    static RepairModel defaults();

    const RepairRow& row(ComponentKind kind, std::optional<DamageLevel> damage) const;
    void set_row(ComponentKind kind, std::optional<DamageLevel> damage, RepairRow row);

private:
    using Key = std::pair<int, int>;  // kind, damage (-1 for none)
    static Key key(ComponentKind kind, std::optional<DamageLevel> damage);
    std::map<Key, RepairRow> rows_;
};

struct RepairAssignment {
    int hours = 1;
    int crews = 1;
};

/// Duration before rounding: mean + sd * z, truncated below at one hour.
double truncated_repair_hours(const RepairRow& row, double z);

/// Maps a standard-normal draw onto the row's distribution, truncated below
/// at one hour and rounded up to whole hours.
RepairAssignment repair_from_standard_normal(const RepairRow& row, double z);

template <class Gen>
RepairAssignment sample_repair(const PowerComponent& component, const RepairModel& model, Gen& rng) {
    const RepairRow& r = model.row(component.kind, component.damage);
    std::normal_distribution<double> standard(0.0, 1.0);
    return repair_from_standard_normal(r, standard(rng));
}

/// One uniform draw per non-plant component in index order; the component
/// fails when its curve probability at the local wind exceeds the draw.
/// Components with no local wind are outside the storm and never fail; the
/// constant floor of the line curve applies only under hazard exposure.
/// Their draw is still consumed so streams stay aligned across wind fields.
/// Expects a pristine network. Returns the number of failures.
template <class Gen>
std::size_t sample_failures(PowerNetwork& net, const WindField& wind, const FragilityModel& model, Gen& rng) {
    std::size_t failed = 0;
    for (auto& c : net.components) {
        if (c.kind == ComponentKind::Plant) continue;
        const double r = std::generate_canonical<double, 53>(rng);
        const double mph = wind.at(c.location);
        if (!(mph > 0.0)) continue;
        if (c.kind == ComponentKind::Substation) {
            const auto level = classify_substation_damage(p_fail_substation(mph, model.substation), r);
            if (!level) continue;
            c.damage = level;
        } else if (!(failure_probability(c.kind, mph, model) > r)) {
            continue;
        }
        c.status = ComponentStatus::Failed;
        ++failed;
    }
    return failed;
}

}  // namespace resilsim
