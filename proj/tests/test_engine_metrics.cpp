#include "support.hpp"

#include "resilsim/engine.hpp"
#include "resilsim/interdependency.hpp"
#include "resilsim/metrics.hpp"
#include "resilsim/monte_carlo.hpp"
#include "resilsim/testbed.hpp"

#include <doctest.h>

#include <random>
#include <sstream>

using namespace resilsim;

namespace {

Networks chain_world() {
    std::string power = testsupport::kChainPower;
    power += "component,C2,conductor,150,10\ncomponent,P2,pole,200,10\nedge,S1,C2\nedge,C2,P2\n";
    std::string couplings = "fuel,PL,C\nlight,T1,C,P2\n";
    for (int i = 0; i < 4; ++i) couplings += "household,H" + std::to_string(i) + ",200,0," + (i == 0 ? "P2" : "P1") + "\n";
    return testsupport::toy(power, testsupport::kStripRoads, couplings);
}

ReplicationConfig calm(const Networks& nets, double wind = 0.0) {
    ReplicationConfig c;
    c.hazard.wind = WindField(wind);
    c.hazard.initial_runoff_in.assign(nets.roads.links.size(), 0.0);
    c.teams = 2;
    return c;
}

Networks small_testbed(double wind) {
    TestbedParams p;
    p.grid_size = 12;
    p.households = 300;
    p.substations = 2;
    p.wind_mph = wind;
    const auto bed = generate_testbed(p);
    std::istringstream pw(bed.power), rd(bed.roads), cp(bed.couplings);
    auto nets = load_networks(pw, rd, cp, "small");
    return nets;
}

}  // namespace

TEST_CASE("TRL and MPR identities") {
    CHECK(trl({0, {1, 1, 1, 1}}) == 0.0);
    CHECK(trl({0, {1}}) == 0.0);
    CHECK(trl({0, {1, 0.5, 0.75, 1}}) == doctest::Approx(0.75));
    QualitySeries dark{0, std::vector<double>(174, 0.0)};
    dark.q.push_back(1.0);
    CHECK(dark.horizon() == 174);
    CHECK(trl(dark) == 174.0);
    CHECK(mpr(174) == 174.0);
    CHECK(mpr(456) == 456.0);
    CHECK(mpr(1) == 1.0);
    CHECK_THROWS(mpr(0));
}

TEST_CASE("improvement percentages") {
    CHECK(*improvement_pct(53.16, 58.18) == doctest::Approx(8.6).epsilon(0.01));
    CHECK(*improvement_pct(45.07, 58.18) == doctest::Approx(22.5).epsilon(0.01));
    CHECK(*improvement_pct(10, 10) == 0.0);
    CHECK_FALSE(improvement_pct(0, 0).has_value());
}

TEST_CASE("restoration quantiles") {
    CHECK(restoration_quantiles({0, {1, 1}}) == std::vector<int>{0, 0, 0});
    CHECK(restoration_quantiles({0, {0, 0.8, 0.95, 1}}) == std::vector<int>{1, 2, 3});
    CHECK_THROWS_AS(restoration_quantiles({0, {0, 0.5}}), std::invalid_argument);

    std::mt19937_64 rng(1);
    std::uniform_real_distribution<double> step(0.0, 0.1);
    for (int t = 0; t < 200; ++t) {
        QualitySeries s{0, {0.0}};
        while (s.q.back() < 1.0) s.q.push_back(std::min(1.0, s.q.back() + step(rng)));
        const double levels[] = {0.1, 0.25, 0.5, 0.75, 0.9, 0.99, 1.0};
        auto hours = restoration_quantiles(s, levels);
        REQUIRE(std::is_sorted(hours.begin(), hours.end()));
        REQUIRE(hours.back() == s.horizon());
    }
}

TEST_CASE("TRL is bounded by MPR and respects dominance") {
    std::mt19937_64 rng(2);
    std::uniform_real_distribution<double> unit(0.0, 1.0);
    for (int t = 0; t < 500; ++t) {
        QualitySeries a{0, {}};
        const int n = 2 + static_cast<int>(unit(rng) * 50);
        for (int i = 0; i < n; ++i) a.q.push_back(unit(rng));
        a.q.push_back(1.0);
        QualitySeries b = a;
        for (auto& q : b.q) q = std::min(1.0, q + unit(rng) * 0.3);
        REQUIRE(trl(a) >= 0.0);
        REQUIRE(trl(a) <= mpr(a.horizon()) + 1e-12);
        REQUIRE(trl(b) <= trl(a) + 1e-12);
    }
}

TEST_CASE("calm replication ends at hour zero with full service") {
    auto nets = chain_world();
    RestorationContext ctx(nets.power, nets.roads, nets.households);
    auto r = run_replication(nets, ctx, calm(nets), 1);
    CHECK(r.hours.size() == 1);
    CHECK(r.households.q == std::vector<double>{1.0});
    CHECK(trl(r.households) == 0.0);
    CHECK(r.initial_failures == 0);
}

TEST_CASE("scripted conductor failure dips to its share and recovers") {
    auto nets = chain_world();
    RestorationContext ctx(nets.power, nets.roads, nets.households);
    auto cfg = calm(nets);
    cfg.scripted_failures = std::vector<ScriptedFailure>{{"C2", std::nullopt, 4}};
    auto r = run_replication(nets, ctx, cfg, 1);
    CHECK(r.households.q.front() == doctest::Approx(0.75));
    CHECK(r.traffic_lights.q.front() == 0.0);
    CHECK(r.households.t1() <= 5);
    CHECK(r.households.t1() == 4);
    CHECK(r.households.q.back() == 1.0);
    CHECK(trl(r.households) == doctest::Approx(1.0));  // 4 hours at 0.75
    CHECK(r.crews_conserved);
}

TEST_CASE("replications are deterministic in the seed") {
    auto nets = small_testbed(115);
    assign_fuel_sources(nets.power, nets.roads, {1100, 1100});
    RestorationContext ctx(nets.power, nets.roads, nets.households);
    auto cfg = calm(nets, 115);
    cfg.hazard.initial_runoff_in.assign(nets.roads.links.size(), 13.0);
    cfg.teams = 5;
    auto a = run_replication(nets, ctx, cfg, 42);
    auto b = run_replication(nets, ctx, cfg, 42);
    CHECK(a.households.q == b.households.q);
    CHECK(a.traffic_lights.q == b.traffic_lights.q);
    CHECK(a.initial_failures > 0);
    CHECK(a.crews_conserved);
    // All households are dark until the fuel route reopens.
    for (int h = 0; h < 17; ++h) REQUIRE(a.households.q[h] == 0.0);
}

TEST_CASE("paired seeds share failure sets across strategies; wind never reduces failures") {
    auto nets = small_testbed(65);
    assign_fuel_sources(nets.power, nets.roads, {1100, 1100});
    RestorationContext ctx(nets.power, nets.roads, nets.households);
    for (std::uint64_t seed = 1; seed <= 10; ++seed) {
        std::vector<std::vector<Index>> sets;
        for (Strategy s : kAllStrategies) {
            auto cfg = calm(nets, 115);
            cfg.strategy = s;
            cfg.teams = 6;
            auto r = run_replication(nets, ctx, cfg, seed);
            std::vector<Index> failed;
            for (const auto& e : r.events)
                if (e.kind == EventKind::Failure) failed.push_back(e.component);
            sets.push_back(failed);
        }
        CHECK(sets[0] == sets[1]);
        CHECK(sets[1] == sets[2]);

        auto low = calm(nets, 65);
        auto high = calm(nets, 115);
        low.teams = high.teams = 6;
        CHECK(run_replication(nets, ctx, low, seed).initial_failures <=
              run_replication(nets, ctx, high, seed).initial_failures);
    }
}

TEST_CASE("hard cap aborts runaway replications") {
    auto nets = chain_world();
    RestorationContext ctx(nets.power, nets.roads, nets.households);
    auto cfg = calm(nets);
    cfg.hard_cap_hours = 10;
    cfg.scripted_failures = std::vector<ScriptedFailure>{{"C1", std::nullopt, 50}};
    CHECK_THROWS_AS(run_replication(nets, ctx, cfg, 1), HardCapExceeded);
}

TEST_CASE("fuel dependence needs a fuel source") {
    auto nets = testsupport::toy(testsupport::kChainPower, testsupport::kStripRoads, "household,H1,200,0,P1\n");
    RestorationContext ctx(nets.power, nets.roads, nets.households);
    auto cfg = calm(nets);
    CHECK_THROWS_AS(run_replication(nets, ctx, cfg, 1), std::invalid_argument);
    cfg.hazard.fuel_dependence = false;
    CHECK_NOTHROW(run_replication(nets, ctx, cfg, 1));
}

TEST_CASE("Monte Carlo stopping rule") {
    SUBCASE("zero variance stops at the minimum") {
        MonteCarloConfig cfg;
        cfg.min_replications = 10;
        auto run = run_monte_carlo(cfg, [](std::uint64_t) { return 0.5; },
                                   [](double v) { return std::vector<double>{v}; });
        CHECK(run.converged);
        CHECK(run.replications.size() == 10);
        CHECK(run.intervals[0].halfwidth == 0.0);
    }
    SUBCASE("Bernoulli(0.7) achieves the target half-width") {
        MonteCarloConfig cfg;
        cfg.max_replications = 5000;
        auto run = run_monte_carlo(
            cfg,
            [](std::uint64_t seed) {
                std::mt19937_64 g(seed * 7919);
                return std::bernoulli_distribution(0.7)(g) ? 1.0 : 0.0;
            },
            [](double v) { return std::vector<double>{v}; });
        REQUIRE(run.converged);
        std::vector<double> xs(run.replications.begin(), run.replications.end());
        const auto ci = normal_ci(xs, 0.9);
        CHECK(ci.halfwidth <= 0.10 * ci.mean);
    }
    SUBCASE("thread count does not change the outcome") {
        auto rep = [](std::uint64_t seed) {
            std::mt19937_64 g(seed);
            return std::normal_distribution<double>(10.0, 4.0)(g);
        };
        auto stat = [](double v) { return std::vector<double>{v}; };
        MonteCarloConfig one, four;
        four.threads = 4;
        one.relative_halfwidth = four.relative_halfwidth = 0.05;
        auto a = run_monte_carlo(one, rep, stat);
        auto b = run_monte_carlo(four, rep, stat);
        CHECK(a.replications == b.replications);
    }
    SUBCASE("non-convergence is flagged, not fatal") {
        MonteCarloConfig cfg;
        cfg.min_replications = 2;
        cfg.max_replications = 3;
        cfg.relative_halfwidth = 1e-9;
        auto run = run_monte_carlo(cfg, [](std::uint64_t s) { return static_cast<double>(s % 2); },
                                   [](double v) { return std::vector<double>{v}; });
        CHECK_FALSE(run.converged);
        CHECK(run.replications.size() == 3);
    }
    SUBCASE("invalid configurations") {
        MonteCarloConfig cfg;
        cfg.confidence = 1.0;
        CHECK_THROWS_AS(cfg.validate(), std::invalid_argument);
        cfg.confidence = 0.9;
        cfg.min_replications = 20;
        cfg.max_replications = 10;
        CHECK_THROWS_AS(cfg.validate(), std::invalid_argument);
    }
}

TEST_CASE("study summaries on a small testbed") {
    auto nets = small_testbed(115);
    assign_fuel_sources(nets.power, nets.roads, {1100, 1100});
    RestorationContext ctx(nets.power, nets.roads, nets.households);
    std::vector<Treatment> treatments;
    for (Strategy s : kAllStrategies) {
        auto cfg = calm(nets, 115);
        cfg.hazard.initial_runoff_in.assign(nets.roads.links.size(), 13.0);
        cfg.strategy = s;
        cfg.teams = 8;
        treatments.push_back({std::string(to_string(s)), cfg});
    }
    MonteCarloConfig mc;
    mc.min_replications = 5;
    mc.max_replications = 8;
    auto study = run_study(nets, ctx, treatments, mc, 0);
    REQUIRE(study.summaries.size() == 3);
    for (std::size_t t = 0; t < 3; ++t) {
        CHECK(study.runs[t].size() == study.runs[0].size());
        for (const auto& r : study.runs[t]) {
            CHECK(trl(r.households) <= mpr(r.households.horizon()));
            CHECK(r.households.q.back() == 1.0);
            CHECK(r.crews_conserved);
        }
        const auto& s = study.summaries[t];
        CHECK(s.mean_restore_75 <= s.mean_restore_90);
        CHECK(s.mean_restore_90 <= s.mean_restore_100);
        CHECK(s.mpr == study.summaries[0].mean_restore_100);
    }
    CHECK(*study.summaries[0].improvement_pct == 0.0);
}
