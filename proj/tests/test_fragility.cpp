#include "support.hpp"

#include "resilsim/fragility.hpp"
#include "resilsim/random.hpp"

#include <boost/math/quadrature/gauss_kronrod.hpp>
#include <doctest.h>

#include <cmath>
#include <limits>
#include <random>

using namespace resilsim;

namespace {

constexpr double kPi = 3.14159265358979323846;

// CDF obtained by integrating the lognormal density numerically.
double integrated_lognormal_cdf(double x, double mu, double sigma) {
    if (x <= 0) return 0.0;
    auto density = [&](double t) {
        if (t <= 0) return 0.0;
        const double z = (std::log(t) - mu) / sigma;
        return std::exp(-0.5 * z * z) / (t * sigma * std::sqrt(2 * kPi));
    };
    return boost::math::quadrature::gauss_kronrod<double, 61>::integrate(density, 0.0, x, 15, 1e-14);
}

bool rel_close(double got, long double want, double tol = 1e-9) {
    return std::abs(static_cast<long double>(got) - want) <= tol * std::abs(want);
}

// Generator whose every output is its minimum, so every canonical draw is 0.
struct ZeroGen {
    using result_type = std::uint64_t;
    static constexpr result_type min() { return 0; }
    static constexpr result_type max() { return std::numeric_limits<result_type>::max(); }
    result_type operator()() { return 0; }
};

PowerNetwork uniform_net(ComponentKind kind, std::size_t n) {
    PowerNetwork net;
    for (std::size_t i = 0; i < n; ++i) {
        PowerComponent c;
        c.id = "x" + std::to_string(i);
        c.kind = kind;
        net.add_component(c);
    }
    return net;
}

}  // namespace

TEST_CASE("curve point values against direct evaluation") {
    using namespace testsupport;
    CHECK(p_fail_tower(0) == doctest::Approx(2e-7).epsilon(1e-12));
    CHECK(rel_close(p_fail_tower(65), oracle_tower(65)));
    CHECK(rel_close(p_fail_tower(115), oracle_tower(115)));
    CHECK(p_fail_tower(65) == doctest::Approx(4.52e-5).epsilon(0.002));
    CHECK(p_fail_tower(115) == doctest::Approx(2.93e-3).epsilon(0.002));

    CHECK(p_fail_pole(0) == doctest::Approx(1e-4).epsilon(1e-12));
    CHECK(rel_close(p_fail_pole(65), oracle_pole(65)));
    CHECK(rel_close(p_fail_pole(115), oracle_pole(115)));
    CHECK(p_fail_pole(65) == doctest::Approx(1.543e-3).epsilon(0.001));
    CHECK(p_fail_pole(115) == doctest::Approx(1.267e-2).epsilon(0.001));

    CHECK(p_fail_conductor(0) == 0.0);
    CHECK(rel_close(p_fail_conductor(65), oracle_conductor(65)));
    CHECK(rel_close(p_fail_conductor(115), oracle_conductor(115)));
    CHECK(p_fail_conductor(65) == doctest::Approx(1.91e-2).epsilon(0.002));
    CHECK(p_fail_conductor(115) == doctest::Approx(0.366).epsilon(0.002));

    const LineFragility line(67.1, 134.2);
    CHECK(p_fail_line(65, line) == 0.01);
    CHECK(p_fail_line(140, line) == 1.0);
    CHECK(rel_close(p_fail_line(115, line), oracle_line(115, 67.1L, 134.2L)));
    CHECK(p_fail_line(115, line) == doctest::Approx(0.7167).epsilon(0.0002));
}

TEST_CASE("line thresholds default to 30 and 60 m/s") {
    const auto d = LineFragility::defaults();
    CHECK(d.w_critical_mph() == doctest::Approx(67.1082));
    CHECK(d.w_collapse_mph() == doctest::Approx(134.2164));
    CHECK_THROWS_AS(LineFragility(80, 70), InvalidParams);
    CHECK_THROWS_AS(LineFragility(0, 70), InvalidParams);
}

TEST_CASE("substation curves are lognormal CDFs") {
    const auto sub = SubstationFragility::placeholder();
    const auto at0 = p_fail_substation(0, sub);
    CHECK(at0.moderate == 0.0);
    CHECK(at0.severe == 0.0);
    CHECK(at0.complete == 0.0);
    CHECK(p_fail_substation(140.0, sub).moderate == doctest::Approx(0.5).epsilon(1e-12));

    const auto p = p_fail_substation(115, sub);
    CHECK(p.moderate == doctest::Approx(0.163).epsilon(0.01));
    CHECK(p.severe == doctest::Approx(0.025).epsilon(0.05));
    CHECK(p.complete == doctest::Approx(0.003).epsilon(0.15));

    for (double x : {1.0, 40.0, 90.0, 115.0, 140.0, 170.0, 230.0}) {
        CHECK(rel_close(p_fail_substation(x, sub).moderate, integrated_lognormal_cdf(x, std::log(140.0), 0.2), 1e-8));
        CHECK(rel_close(p_fail_substation(x, sub).severe, integrated_lognormal_cdf(x, std::log(170.0), 0.2), 1e-8));
        CHECK(rel_close(p_fail_substation(x, sub).complete, integrated_lognormal_cdf(x, std::log(200.0), 0.2),
                        1e-8));
    }
}

TEST_CASE("curves are monotone and bounded over 0..250 mph") {
    const auto sub = SubstationFragility::placeholder();
    const auto line = LineFragility::defaults();
    double prev[7] = {0, 0, 0, 0, 0, 0, 0};
    for (int i = 0; i <= 10000; ++i) {
        const double x = 250.0 * i / 10000.0;
        const auto s = p_fail_substation(x, sub);
        const double v[7] = {p_fail_tower(x), p_fail_line(x, line), p_fail_pole(x), p_fail_conductor(x),
                             s.moderate,      s.severe,             s.complete};
        for (int k = 0; k < 7; ++k) {
            REQUIRE(v[k] >= 0.0);
            REQUIRE(v[k] <= 1.0);
            if (i > 0) REQUIRE(v[k] >= prev[k]);
            prev[k] = v[k];
        }
        REQUIRE(s.complete <= s.severe);
        REQUIRE(s.severe <= s.moderate);
    }
}

TEST_CASE("any accepted substation parameter set is nested") {
    std::mt19937_64 rng(3);
    std::uniform_real_distribution<double> mu(std::log(50.0), std::log(300.0));
    std::uniform_real_distribution<double> sigma(0.05, 1.0);
    int accepted = 0;
    for (int trial = 0; trial < 300; ++trial) {
        LognormalParams m{mu(rng), sigma(rng)}, s{mu(rng), sigma(rng)}, c{mu(rng), sigma(rng)};
        try {
            SubstationFragility f(m, s, c);
            ++accepted;
            for (int i = 0; i <= 10000; ++i) {
                const auto p = p_fail_substation(250.0 * i / 10000.0, f);
                REQUIRE(p.complete <= p.severe);
                REQUIRE(p.severe <= p.moderate);
            }
        } catch (const InvalidParams&) {
        }
    }
    CHECK(accepted > 0);
    CHECK_THROWS_AS(SubstationFragility({std::log(200.0), 0.2}, {std::log(170.0), 0.2}, {std::log(140.0), 0.2}),
                    InvalidParams);
    CHECK_THROWS_AS(SubstationFragility({std::log(140.0), 0.0}, {std::log(170.0), 0.2}, {std::log(200.0), 0.2}),
                    InvalidParams);
}

TEST_CASE("damage classification picks the most severe exceeded level") {
    DamageProbabilities p{0.3, 0.1, 0.02};
    CHECK(classify_substation_damage(p, 0.5) == std::nullopt);
    CHECK(classify_substation_damage(p, 0.2) == DamageLevel::Moderate);
    CHECK(classify_substation_damage(p, 0.05) == DamageLevel::Severe);
    CHECK(classify_substation_damage(p, 0.0) == DamageLevel::Complete);
}

TEST_CASE("sample_failures edge cases") {
    FragilityModel model;
    SUBCASE("no wind, no conductor failures") {
        auto net = uniform_net(ComponentKind::Conductor, 5000);
        Rng rng = make_stream(1, Stream::Failures);
        CHECK(sample_failures(net, WindField(0.0), model, rng) == 0);
    }
    SUBCASE("no wind, no line failures despite the constant floor") {
        auto net = uniform_net(ComponentKind::TransmissionLine, 5000);
        Rng rng = make_stream(1, Stream::Failures);
        CHECK(sample_failures(net, WindField(0.0), model, rng) == 0);
    }
    SUBCASE("unexposed components still consume their draw") {
        auto calm = uniform_net(ComponentKind::TransmissionLine, 50);
        auto windy = uniform_net(ComponentKind::TransmissionLine, 50);
        Rng a = make_stream(3, Stream::Failures), b = make_stream(3, Stream::Failures);
        sample_failures(calm, WindField(0.0), model, a);
        sample_failures(windy, WindField(65.0), model, b);
        CHECK(a() == b());
    }
    SUBCASE("all-zero draws fail everything that can fail") {
        PowerNetwork net;
        const ComponentKind kinds[] = {ComponentKind::Plant, ComponentKind::Substation,
                                       ComponentKind::TransmissionTower, ComponentKind::TransmissionLine,
                                       ComponentKind::DistributionPole, ComponentKind::Conductor};
        int i = 0;
        for (auto k : kinds) net.add_component({"c" + std::to_string(i++), k});
        ZeroGen zero;
        CHECK(sample_failures(net, WindField(65.0), model, zero) == 5);
        CHECK(net.components[0].status == ComponentStatus::Operational);
        CHECK(net.components[1].damage == DamageLevel::Complete);
        for (std::size_t c = 1; c < net.size(); ++c) CHECK(net.components[c].status == ComponentStatus::Failed);
    }
}

TEST_CASE("empirical failure rates match the curves") {
    FragilityModel model;
    struct Case {
        ComponentKind kind;
        double mph;
        std::size_t n;
    };
    const Case cases[] = {
        {ComponentKind::DistributionPole, 115, 10000},  {ComponentKind::DistributionPole, 65, 100000},
        {ComponentKind::DistributionPole, 115, 100000}, {ComponentKind::Conductor, 65, 100000},
        {ComponentKind::Conductor, 115, 100000},        {ComponentKind::TransmissionTower, 65, 100000},
        {ComponentKind::TransmissionTower, 115, 100000}, {ComponentKind::TransmissionLine, 65, 100000},
        {ComponentKind::TransmissionLine, 115, 100000},
    };
    std::uint64_t seed = 11;
    for (const auto& c : cases) {
        auto net = uniform_net(c.kind, c.n);
        Rng rng = make_stream(seed++, Stream::Failures);
        const double failed = static_cast<double>(sample_failures(net, WindField(c.mph), model, rng));
        const double p = failure_probability(c.kind, c.mph, model);
        const double sd = std::sqrt(c.n * p * (1 - p));
        INFO("kind " << to_string(c.kind) << " at " << c.mph << " mph");
        CHECK(std::abs(failed - c.n * p) <= 3 * sd);
    }

    auto subs = uniform_net(ComponentKind::Substation, 100000);
    Rng rng = make_stream(99, Stream::Failures);
    sample_failures(subs, WindField(115.0), model, rng);
    const auto p = p_fail_substation(115, model.substation);
    double counts[3] = {0, 0, 0};
    for (const auto& c : subs.components) {
        if (c.damage) counts[static_cast<int>(*c.damage)] += 1;
    }
    const double expect[3] = {p.moderate - p.severe, p.severe - p.complete, p.complete};
    for (int k = 0; k < 3; ++k) {
        const double sd = std::sqrt(1e5 * expect[k] * (1 - expect[k]));
        CHECK(std::abs(counts[k] - 1e5 * expect[k]) <= 3 * sd);
    }
}

TEST_CASE("repair assignment from a standard-normal draw") {
    const auto model = RepairModel::defaults();
    auto severe = model.row(ComponentKind::Substation, DamageLevel::Severe);
    CHECK(repair_from_standard_normal(severe, 0.0).hours == 168);
    CHECK(repair_from_standard_normal(severe, 0.0).crews == 14);
    auto conductor = model.row(ComponentKind::Conductor, std::nullopt);
    CHECK(repair_from_standard_normal(conductor, 0.0).hours == 4);
    CHECK(repair_from_standard_normal(conductor, 0.0).crews == 1);
    auto pole = model.row(ComponentKind::DistributionPole, std::nullopt);
    CHECK(repair_from_standard_normal(pole, -3.0).hours == 1);
    CHECK(repair_from_standard_normal(pole, 0.1).hours == 6);  // 5.25 rounds up
    CHECK(model.row(ComponentKind::Substation, DamageLevel::Complete).crews == 60);
    CHECK(model.row(ComponentKind::Substation, DamageLevel::Moderate).crews == 6);
    CHECK_THROWS_AS(model.row(ComponentKind::Substation, std::nullopt), MissingRepairRow);
}

TEST_CASE("sampled repair durations: floor and mean") {
    const auto model = RepairModel::defaults();
    const std::pair<ComponentKind, std::optional<DamageLevel>> rows[] = {
        {ComponentKind::Substation, DamageLevel::Moderate}, {ComponentKind::Substation, DamageLevel::Severe},
        {ComponentKind::Substation, DamageLevel::Complete}, {ComponentKind::TransmissionTower, std::nullopt},
        {ComponentKind::TransmissionLine, std::nullopt},    {ComponentKind::DistributionPole, std::nullopt},
        {ComponentKind::Conductor, std::nullopt},
    };
    Rng rng = make_stream(4, Stream::Repairs);
    std::normal_distribution<double> z(0.0, 1.0);
    for (const auto& [kind, damage] : rows) {
        const auto& row = model.row(kind, damage);
        PowerComponent comp{"x", kind};
        comp.damage = damage;
        double sum_cont = 0, sum_hours = 0;
        const int n = 100000;
        for (int i = 0; i < n; ++i) {
            const double draw = z(rng);
            const double cont = truncated_repair_hours(row, draw);
            REQUIRE(cont >= 1.0);
            sum_cont += cont;
            sum_hours += repair_from_standard_normal(row, draw).hours;
            const auto a = sample_repair(comp, model, rng);
            REQUIRE(a.hours >= 1);
            REQUIRE(a.crews == row.crews);
        }
        INFO("kind " << to_string(kind));
        CHECK(sum_cont / n == doctest::Approx(row.mean_hours).epsilon(0.05));
        // Rounding up adds about half an hour on top of the truncation bias.
        CHECK(sum_hours / n - sum_cont / n == doctest::Approx(0.5).epsilon(0.1));
    }
}
