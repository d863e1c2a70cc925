#pragma once

#include "resilsim/fragility.hpp"
#include "resilsim/hazard.hpp"
#include "resilsim/metrics.hpp"
#include "resilsim/monte_carlo.hpp"
#include "resilsim/network.hpp"
#include "resilsim/restoration.hpp"

#include <cstdint>
#include <optional>
#include <stdexcept>
#include <string>
#include <vector>

namespace resilsim {

/// Damage imposed instead of sampling (tests and what-if runs).
struct ScriptedFailure {
    std::string component;
    std::optional<DamageLevel> damage;  // substations
    std::optional<int> repair_hours;    // sampled when absent
};

struct ReplicationConfig {
    HazardScenario hazard;
    FragilityModel fragility;
    RepairModel repair = RepairModel::defaults();
    Strategy strategy = Strategy::DistanceBased;
    int teams = 11;
    int hard_cap_hours = 10000;
    std::optional<std::vector<ScriptedFailure>> scripted_failures;
};

struct HourRecord {
    int hour = 0;
    double q_households = 1.0;
    double q_traffic_lights = 1.0;
    int failed_components = 0;  // Failed or UnderRepair
    int passable_links = 0;
};

enum class EventKind { Failure, RepairStarted, RepairCompleted };

struct Event {
    int hour = 0;
    EventKind kind = EventKind::Failure;
    Index component = kNoIndex;
};

struct ReplicationResult {
    std::uint64_t seed = 0;
    QualitySeries households;
    QualitySeries traffic_lights;
    std::vector<HourRecord> hours;
    std::vector<Event> events;
    int initial_failures = 0;
    bool crews_conserved = true;  // checked every hour
};

class HardCapExceeded : public std::runtime_error {
public:
    HardCapExceeded(int hour, int failed_components, double q_households);
    int hour;
    int failed_components;
    double q_households;
};

/// One seeded replication: sample damage at hour 0, then each hour drain the
/// flood, finish due repairs, refresh fuel and connectivity, record Q and
/// start new repairs, until every component is repaired and every household
/// has power.
ReplicationResult run_replication(const Networks& nets, const RestorationContext& ctx,
                                  const ReplicationConfig& config, std::uint64_t seed);

// ---------------------------------------------------------------------------
// Multi-treatment studies with paired seeds.

struct Treatment {
    std::string label;
    ReplicationConfig config;
};

struct TreatmentSummary {
    std::string label;
    Strategy strategy = Strategy::DistanceBased;
    std::size_t replications = 0;
    double mean_trl = 0.0;
    double mpr = 0.0;
    double trl_over_mpr_pct = 0.0;
    std::optional<double> improvement_pct;
    double mean_restore_75 = 0.0;
    double mean_restore_90 = 0.0;
    double mean_restore_100 = 0.0;
    double mean_lights_trl = 0.0;
    double mean_lights_restore_100 = 0.0;
    double mean_initial_failures = 0.0;
    ConfidenceInterval ci;  // time-averaged household Q
};

struct StudyResult {
    std::vector<Treatment> treatments;
    std::vector<std::vector<ReplicationResult>> runs;  // [treatment][replication]
    std::vector<ConfidenceInterval> intervals;
    bool converged = false;
    std::vector<TreatmentSummary> summaries;
};

/// Runs every treatment on seeds base, base+1, ... and stops once each
/// treatment's mean time-averaged household Q meets the stopping rule.
/// `baseline` names the treatment that TRL improvements and the MPR horizon
/// are measured against.
StudyResult run_study(const Networks& nets, const RestorationContext& ctx, std::vector<Treatment> treatments,
                      const MonteCarloConfig& mc, std::optional<std::size_t> baseline = std::nullopt);

std::vector<TreatmentSummary> summarize(const StudyResult& study, std::optional<std::size_t> baseline);

}  // namespace resilsim
