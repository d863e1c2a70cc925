#include "resilsim/fragility.hpp"

#include <algorithm>
#include <cmath>
#include <string>

namespace resilsim {

double lognormal_cdf(double x, const LognormalParams& p) {
    if (x <= 0.0) return 0.0;
    return 0.5 * std::erfc(-(std::log(x) - p.mu) / (p.sigma * std::sqrt(2.0)));
}

SubstationFragility::SubstationFragility(LognormalParams moderate, LognormalParams severe,
                                         LognormalParams complete)
    : levels_{moderate, severe, complete} {
    for (const auto& l : levels_) {
        if (!(l.sigma > 0.0) || !std::isfinite(l.mu)) throw InvalidParams("substation fragility needs sigma > 0");
    }
    for (int i = 0; i <= 25000; ++i) {
        const double x = 0.01 * i;
        const double m = lognormal_cdf(x, levels_[0]);
        const double s = lognormal_cdf(x, levels_[1]);
        const double c = lognormal_cdf(x, levels_[2]);
        if (c > s || s > m) {
            throw InvalidParams("substation fragility curves are not nested at " + std::to_string(x) + " mph");
        }
    }
}

SubstationFragility SubstationFragility::placeholder() {
    return {{std::log(140.0), 0.2}, {std::log(170.0), 0.2}, {std::log(200.0), 0.2}};
}

LineFragility::LineFragility(double w_critical_mph, double w_collapse_mph)
    : critical_(w_critical_mph), collapse_(w_collapse_mph) {
    if (!(critical_ > 0.0 && critical_ < collapse_))
        throw InvalidParams("line fragility needs 0 < w_critical < w_collapse");
}

LineFragility LineFragility::defaults() {
    return {30.0 * kMphPerMetrePerSecond, 60.0 * kMphPerMetrePerSecond};
}

DamageProbabilities p_fail_substation(double mph, const SubstationFragility& params) {
    return {lognormal_cdf(mph, params.moderate()), lognormal_cdf(mph, params.severe()),
            lognormal_cdf(mph, params.complete())};
}

double p_fail_tower(double mph) {
    return std::min(2e-7 * std::exp(0.0834 * mph), 1.0);
}

double p_fail_line(double mph, const LineFragility& params) {
    const double lo = params.w_critical_mph();
    const double hi = params.w_collapse_mph();
    if (mph < lo) return 0.01;
    if (mph > hi) return 1.0;
    return 0.01 + (1.0 - 0.01) * (mph - lo) / (hi - lo);
}

double p_fail_pole(double mph) {
    return std::min(1e-4 * std::exp(0.0421 * mph), 1.0);
}

double p_fail_conductor(double mph) {
    if (mph <= 0.0) return 0.0;
    return std::min(8e-12 * std::pow(mph, 5.1731), 1.0);
}

double failure_probability(ComponentKind kind, double mph, const FragilityModel& model) {
    switch (kind) {
        case ComponentKind::Plant: return 0.0;
        case ComponentKind::Substation: return p_fail_substation(mph, model.substation).moderate;
        case ComponentKind::TransmissionTower: return p_fail_tower(mph);
        case ComponentKind::TransmissionLine: return p_fail_line(mph, model.line);
        case ComponentKind::DistributionPole: return p_fail_pole(mph);
        case ComponentKind::Conductor: return p_fail_conductor(mph);
    }
    return 0.0;
}

std::optional<DamageLevel> classify_substation_damage(const DamageProbabilities& p, double r) {
    if (p.complete > r) return DamageLevel::Complete;
    if (p.severe > r) return DamageLevel::Severe;
    if (p.moderate > r) return DamageLevel::Moderate;
    return std::nullopt;
}

RepairModel::Key RepairModel::key(ComponentKind kind, std::optional<DamageLevel> damage) {
    return {static_cast<int>(kind), damage ? static_cast<int>(*damage) : -1};
}

RepairModel RepairModel::defaults() {
    RepairModel m;
    m.set_row(ComponentKind::Substation, DamageLevel::Moderate, {72.0, 36.0, 6});
    m.set_row(ComponentKind::Substation, DamageLevel::Severe, {168.0, 84.0, 14});
    m.set_row(ComponentKind::Substation, DamageLevel::Complete, {720.0, 360.0, 60});
    m.set_row(ComponentKind::TransmissionTower, std::nullopt, {72.0, 36.0, 6});
    m.set_row(ComponentKind::TransmissionLine, std::nullopt, {48.0, 24.0, 4});
    m.set_row(ComponentKind::DistributionPole, std::nullopt, {5.0, 2.5, 1});
    m.set_row(ComponentKind::Conductor, std::nullopt, {4.0, 2.0, 1});
    return m;
}

const RepairRow& RepairModel::row(ComponentKind kind, std::optional<DamageLevel> damage) const {
    auto it = rows_.find(key(kind, damage));
    if (it == rows_.end()) {
        throw MissingRepairRow("no repair row for " + std::string(to_string(kind)) +
                               (damage ? "/" + std::string(to_string(*damage)) : std::string{}));
    }
    return it->second;
}

void RepairModel::set_row(ComponentKind kind, std::optional<DamageLevel> damage, RepairRow row) {
    if (!(row.mean_hours > 0.0) || !(row.sd_hours >= 0.0) || row.crews < 1)
        throw InvalidParams("repair row needs mean > 0, sd >= 0, crews >= 1");
    rows_[key(kind, damage)] = row;
}

double truncated_repair_hours(const RepairRow& row, double z) {
    return std::max(1.0, row.mean_hours + row.sd_hours * z);
}

RepairAssignment repair_from_standard_normal(const RepairRow& row, double z) {
    const double hours = std::ceil(truncated_repair_hours(row, z) - 1e-9);
    return {static_cast<int>(hours), row.crews};
}

}  // namespace resilsim
