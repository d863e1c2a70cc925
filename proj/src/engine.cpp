#include "resilsim/engine.hpp"

#include "resilsim/interdependency.hpp"
#include "resilsim/random.hpp"

#include <algorithm>
#include <numeric>

namespace resilsim {

HardCapExceeded::HardCapExceeded(int hour_, int failed, double q)
    : std::runtime_error("replication exceeded the hard cap at hour " + std::to_string(hour_) + " with " +
                         std::to_string(failed) + " components down and Q = " + std::to_string(q)),
      hour(hour_),
      failed_components(failed),
      q_households(q) {}

namespace {

int apply_scripted(PowerNetwork& net, const std::vector<ScriptedFailure>& script) {
    int n = 0;
    for (const auto& f : script) {
        auto& c = net.components[net.find(f.component)];
        if (c.kind == ComponentKind::Plant) throw std::invalid_argument("plants cannot fail: '" + f.component + "'");
        if (c.status == ComponentStatus::Failed) continue;
        c.status = ComponentStatus::Failed;
        if (c.kind == ComponentKind::Substation) c.damage = f.damage.value_or(DamageLevel::Moderate);
        ++n;
    }
    return n;
}

}  // namespace

ReplicationResult run_replication(const Networks& nets, const RestorationContext& ctx,
                                  const ReplicationConfig& config, std::uint64_t seed) {
    const HazardScenario& hazard = config.hazard;
    hazard.validate(nets.roads.links.size());
    if (hazard.fuel_dependence &&
        std::find(nets.power.fuel_source.begin(), nets.power.fuel_source.end(), kNoIndex) !=
            nets.power.fuel_source.end()) {
        throw std::invalid_argument("fuel dependence is on but a plant has no fuel source");
    }

    PowerNetwork net = nets.power;
    std::vector<Household> households = nets.households;
    Rng failure_rng = make_stream(seed, Stream::Failures);
    Rng repair_rng = make_stream(seed, Stream::Repairs);
    Rng strategy_rng = make_stream(seed, Stream::Strategy);

    ReplicationResult out;
    out.seed = seed;

    out.initial_failures = config.scripted_failures
                               ? apply_scripted(net, *config.scripted_failures)
                               : static_cast<int>(sample_failures(net, hazard.wind, config.fragility, failure_rng));

    RestorationScheduler scheduler(config.teams);
    std::vector<Index> down;
    for (Index c = 0; c < net.size(); ++c) {
        auto& comp = net.components[c];
        if (comp.status != ComponentStatus::Failed) continue;
        RepairAssignment repair = sample_repair(comp, config.repair, repair_rng);
        if (config.scripted_failures) {
            for (const auto& f : *config.scripted_failures) {
                if (f.component == comp.id && f.repair_hours) repair.hours = std::max(1, *f.repair_hours);
            }
        }
        scheduler.assign_repair(comp, c, repair);
        out.events.push_back({0, EventKind::Failure, c});
        down.push_back(c);
    }

    FloodState flood = initial_flood(hazard);
    for (int hour = 0;; ++hour) {
        if (hour > 0) flood = drain_step(flood, hazard);

        for (Index c : scheduler.complete_due(hour, net)) out.events.push_back({hour, EventKind::RepairCompleted, c});

        update_plant_fuel(net, nets.roads, flood, hazard);
        const auto powered = powered_set(net);
        const double qh = powered_households(powered, households);
        const double ql = powered_traffic_lights(powered, nets.roads);

        down.erase(std::remove_if(down.begin(), down.end(),
                                  [&](Index c) { return conducts(net.components[c].status); }),
                   down.end());

        out.households.q.push_back(qh);
        out.traffic_lights.q.push_back(ql);
        out.hours.push_back({hour, qh, ql, static_cast<int>(down.size()),
                             static_cast<int>(passable_link_count(flood, hazard))});

        if (down.empty() && qh >= 1.0) break;
        if (hour >= config.hard_cap_hours) throw HardCapExceeded(hour, static_cast<int>(down.size()), qh);

        if (scheduler.pool().available > 0) {
            std::vector<Index> failed;
            for (Index c : down) {
                if (net.components[c].status == ComponentStatus::Failed) failed.push_back(c);
            }
            if (!failed.empty()) {
                const auto order =
                    priority_order(config.strategy, failed, net, nets.roads, ctx, {powered, households}, strategy_rng);
                for (Index c : scheduler.start_jobs(hour, order, net, flood, hazard))
                    out.events.push_back({hour, EventKind::RepairStarted, c});
            }
        }
        out.crews_conserved = out.crews_conserved && scheduler.crews_conserved();
    }
    return out;
}

// ---------------------------------------------------------------------------

namespace {

double mean_of(const std::vector<ReplicationResult>& runs, auto&& value) {
    if (runs.empty()) return 0.0;
    double s = 0.0;
    for (const auto& r : runs) s += value(r);
    return s / static_cast<double>(runs.size());
}

}  // namespace

std::vector<TreatmentSummary> summarize(const StudyResult& study, std::optional<std::size_t> baseline) {
    std::vector<TreatmentSummary> out;
    const std::size_t n = study.treatments.size();
    out.resize(n);
    for (std::size_t t = 0; t < n; ++t) {
        const auto& runs = study.runs[t];
        auto& s = out[t];
        s.label = study.treatments[t].label;
        s.strategy = study.treatments[t].config.strategy;
        s.replications = runs.size();
        s.mean_trl = mean_of(runs, [](const ReplicationResult& r) { return trl(r.households); });
        s.mean_lights_trl = mean_of(runs, [](const ReplicationResult& r) { return trl(r.traffic_lights); });
        s.mean_restore_75 = mean_of(runs, [](const ReplicationResult& r) {
            return static_cast<double>(restoration_quantiles(r.households)[0]);
        });
        s.mean_restore_90 = mean_of(runs, [](const ReplicationResult& r) {
            return static_cast<double>(restoration_quantiles(r.households)[1]);
        });
        s.mean_restore_100 = mean_of(runs, [](const ReplicationResult& r) {
            return static_cast<double>(restoration_quantiles(r.households)[2]);
        });
        s.mean_lights_restore_100 = mean_of(runs, [](const ReplicationResult& r) {
            const double full[] = {1.0};
            return static_cast<double>(restoration_quantiles(r.traffic_lights, full)[0]);
        });
        s.mean_initial_failures =
            mean_of(runs, [](const ReplicationResult& r) { return static_cast<double>(r.initial_failures); });
        if (t < study.intervals.size()) s.ci = study.intervals[t];
    }
    for (std::size_t t = 0; t < n; ++t) {
        auto& s = out[t];
        const auto& ref = baseline ? out.at(*baseline) : s;
        s.mpr = ref.mean_restore_100 > 0.0 ? mpr(ref.mean_restore_100) : 0.0;
        s.trl_over_mpr_pct = s.mpr > 0.0 ? s.mean_trl / s.mpr * 100.0 : 0.0;
        if (baseline) s.improvement_pct = improvement_pct(s.mean_trl, ref.mean_trl);
    }
    return out;
}

StudyResult run_study(const Networks& nets, const RestorationContext& ctx, std::vector<Treatment> treatments,
                      const MonteCarloConfig& mc, std::optional<std::size_t> baseline) {
    if (treatments.empty()) throw std::invalid_argument("study needs at least one treatment");
    if (baseline && *baseline >= treatments.size()) throw std::invalid_argument("baseline treatment out of range");

    auto replicate = [&](std::uint64_t seed) {
        std::vector<ReplicationResult> per_treatment;
        per_treatment.reserve(treatments.size());
        for (const auto& t : treatments) per_treatment.push_back(run_replication(nets, ctx, t.config, seed));
        return per_treatment;
    };
    auto statistics = [](const std::vector<ReplicationResult>& reps) {
        std::vector<double> s;
        for (const auto& r : reps) s.push_back(time_averaged_quality(r.households));
        return s;
    };
    auto mc_run = run_monte_carlo(mc, replicate, statistics);

    StudyResult study;
    study.treatments = std::move(treatments);
    study.runs.resize(study.treatments.size());
    for (auto& reps : mc_run.replications) {
        for (std::size_t t = 0; t < reps.size(); ++t) study.runs[t].push_back(std::move(reps[t]));
    }
    study.intervals = std::move(mc_run.intervals);
    study.converged = mc_run.converged;
    study.summaries = summarize(study, baseline);
    return study;
}

}  // namespace resilsim
