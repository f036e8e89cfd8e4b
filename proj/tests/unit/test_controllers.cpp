#include <doctest.h>

#include <cmath>
#include <numbers>
#include <random>
#include <string>

#include "ueslab/controllers.hpp"
#include "ueslab/errors.hpp"
#include "ueslab/maps.hpp"

using namespace ueslab;

namespace {

EsDesign scalar_design(Schedule s, double omega = 1.0) {
    EsDesign d;
    d.alpha = {1.0};
    d.k = {0.3};
    d.omega_hat = {1.0};
    d.omega = omega;
    d.omega_h = 3.0;
    d.schedule = s;
    return d;
}

// 5-point derivative of xi; independent of growth_rate().
double xi_dot(const Schedule& s, double t) {
    const double h = 1e-3;
    return (-xi(s, t + 2 * h) + 8 * xi(s, t + h) - 8 * xi(s, t - h) + xi(s, t - 2 * h)) / (12 * h);
}

}  // namespace

TEST_CASE("nominal loop evaluated by hand") {
    const auto map = maps::quartic_paper();
    const auto p = EsParams::assemble(scalar_design(Schedule::nominal()), map);
    const auto r = es_rhs(p, map, {{0.0}, 0.0}, 0.0);
    CHECK(r.theta_dot[0] == doctest::Approx(std::cos(0.3 * 17.0)).epsilon(1e-14));
    CHECK(std::abs(r.theta_dot[0] - 0.37798) < 1e-5);
    CHECK(r.eta_dot == doctest::Approx(51.0));
}

TEST_CASE("asymptotic loop at t=10 scales amplitude and phase gain") {
    const auto map = maps::quartic_paper();
    const auto p = EsParams::assemble(scalar_design(Schedule::asymptotic(0.1, 1.0 / 3.0, 4.0)), map);
    const auto r = es_rhs(p, map, {{0.0}, 0.0}, 10.0);
    CHECK(r.theta_dot[0] == doctest::Approx(0.125 * std::cos(10.0 + 0.3 * 4096.0 * 17.0)).epsilon(1e-9));
    CHECK(r.eta_dot == doctest::Approx(51.0));
}

TEST_CASE("at the optimum the phase term vanishes for every schedule") {
    const auto map = maps::quartic_paper();
    for (const auto& s : {Schedule::nominal(), Schedule::asymptotic(0.1, 1.0 / 3.0, 4.0),
                          Schedule::exponential(0.1)}) {
        auto d = scalar_design(s, 5.0);
        d.k = {1.0};
        d.omega_h = 3.0;
        const auto p = EsParams::assemble(d, map);
        for (double t : {0.0, 0.7, 3.0, 12.5}) {
            const auto r = es_rhs(p, map, {{2.0}, 1.0}, t);
            CHECK(r.theta_dot[0] == doctest::Approx(nu(s, t) * std::sqrt(5.0) * std::cos(5.0 * t)).epsilon(1e-12));
            CHECK(r.eta_dot == 0.0);
        }
    }
}

TEST_CASE("transformed loop at the origin") {
    const auto map = maps::quartic_paper();
    auto d = scalar_design(Schedule::asymptotic(0.1, 1.0 / 3.0, 4.0), 5.0);
    const auto p = EsParams::assemble(d, map);
    const auto r = transformed_rhs(p, map, {{0.0}, 0.0}, 0.0);
    CHECK(r.theta_dot[0] == doctest::Approx(std::sqrt(5.0)).epsilon(1e-14));
    CHECK(r.eta_dot == 0.0);
    for (int i = 0; i < 200; ++i) CHECK(transformed_rhs(p, map, {{0.0}, 0.0}, 0.37 * i).eta_dot == 0.0);
}

TEST_CASE("quartic transformed cost scales out exactly") {
    const auto map = maps::quartic_paper();
    for (double xv : {0.5, 1.0, 2.0, 8.0, 37.0}) {
        for (double th : {-1.5, -0.25, 0.0, 0.75, 3.0}) {
            const double v = std::pow(xv, 4) * transformed_cost(map, {th}, xv);
            CHECK(v == doctest::Approx(th * th * th * th).epsilon(1e-12));
        }
    }
}

TEST_CASE("transformed loop is the chain rule applied to the original loop") {
    const auto quartic = maps::quartic_paper();
    const auto quad = maps::quadratic({1.0, 2.5}, {0.5, -1.0});
    std::mt19937_64 rng(17);
    std::uniform_real_distribution<double> u(-1.0, 1.0);
    std::uniform_real_distribution<double> ut(0.1, 8.0);

    auto check = [&](const EsParams& p, const CostMap& map) {
        const double m = eta_scale_exponent(p.schedule(), map.kappa);
        for (int s = 0; s < 50; ++s) {
            const double t = ut(rng);
            TransformedState tf;
            tf.theta_f.resize(map.dim);
            for (auto& x : tf.theta_f) x = u(rng);
            tf.eta_f = u(rng);

            const double xv = xi(p.schedule(), t);
            EsState st;
            st.theta.resize(map.dim);
            for (std::size_t i = 0; i < map.dim; ++i) st.theta[i] = (*map.optimum)[i] + tf.theta_f[i] / xv;
            st.eta = *map.optimal_value + tf.eta_f / std::pow(xv, m);

            const auto orig = es_rhs(p, map, st, t);
            const double xd = xi_dot(p.schedule(), t);
            const auto tr = transformed_rhs(p, map, tf, t);
            for (std::size_t i = 0; i < map.dim; ++i) {
                const double expect = xd * (st.theta[i] - (*map.optimum)[i]) + xv * orig.theta_dot[i];
                CHECK(std::abs(tr.theta_dot[i] - expect) <= 1e-9 * (1.0 + std::abs(expect)));
            }
            const double eta_expect = m * std::pow(xv, m - 1) * xd * (st.eta - *map.optimal_value) +
                                      std::pow(xv, m) * orig.eta_dot;
            CHECK(std::abs(tr.eta_dot - eta_expect) <= 1e-9 * (1.0 + std::abs(eta_expect)));
        }
    };

    auto d = scalar_design(Schedule::asymptotic(0.1, 1.0 / 3.0, 4.0), 5.0);
    check(EsParams::assemble(d, quartic), quartic);

    EsDesign e;
    e.alpha = {1.0, 0.5};
    e.k = {2.0, 4.0};
    e.omega = 7.0;
    e.omega_h = 3.0;
    e.schedule = Schedule::exponential(0.1);
    check(EsParams::assemble(e, quad), quad);
}

TEST_CASE("coordinate maps round-trip") {
    const auto map = maps::quartic_paper();
    const auto p = EsParams::assemble(scalar_design(Schedule::asymptotic(0.1, 1.0 / 3.0, 4.0)), map);
    const EsState s{{1.3}, 4.2};
    const auto back = from_transformed(p, map, to_transformed(p, map, s, 6.0), 6.0);
    CHECK(back.theta[0] == doctest::Approx(1.3).epsilon(1e-14));
    CHECK(back.eta == doctest::Approx(4.2).epsilon(1e-14));
}

TEST_CASE("nominal loop is periodic for rational frequency ratios") {
    const auto map = maps::quadratic({1.0, 2.0}, {0.5, -0.5});
    EsDesign d;
    d.alpha = {1.0, 0.4};
    d.k = {0.7, 1.1};
    d.omega_hat = {1.0, 1.5};
    d.omega = 5.0;
    d.omega_h = 2.0;
    d.schedule = Schedule::nominal();
    const auto p = EsParams::assemble(d, map);
    const double period = 2.0 * (2.0 * std::numbers::pi / d.omega);
    std::mt19937_64 rng(4);
    std::uniform_real_distribution<double> u(-2.0, 2.0);
    for (int s = 0; s < 100; ++s) {
        const EsState st{{u(rng), u(rng)}, u(rng)};
        const double t = std::abs(u(rng));
        const auto a = es_rhs(p, map, st, t);
        const auto b = es_rhs(p, map, st, t + period);
        CHECK(std::abs(a.theta_dot[0] - b.theta_dot[0]) < 1e-12);
        CHECK(std::abs(a.theta_dot[1] - b.theta_dot[1]) < 1e-12);
        CHECK(a.eta_dot == b.eta_dot);
    }
}

TEST_CASE("default frequency ratios") {
    const auto r = default_frequency_ratios(4);
    CHECK(r == Vector{1.0, 1.5, 2.25, 3.375});
    EsDesign d;
    d.alpha = {1.0, 1.0};
    d.k = {1.0, 1.0};
    d.schedule = Schedule::nominal();
    const auto p = EsParams::assemble(d, maps::quadratic({1.0, 1.0}, {0.0, 0.0}));
    CHECK(p.omega_hat() == Vector{1.0, 1.5});
    CHECK(p.max_frequency() == doctest::Approx(7.5));
}

TEST_CASE("assembly rejects designs that break the design conditions") {
    const auto quartic = maps::quartic_paper();
    const auto quad = maps::quadratic({1.0}, {1.0});

    SUBCASE("duplicate frequency ratios") {
        EsDesign d;
        d.alpha = {1.0, 1.0};
        d.k = {1.0, 1.0};
        d.omega_hat = {1.0, 1.0};
        d.schedule = Schedule::nominal();
        try {
            (void)EsParams::assemble(d, maps::quadratic({1.0, 1.0}, {0.0, 0.0}));
            FAIL("expected AssemblyError");
        } catch (const AssemblyError& e) {
            CHECK(std::string(e.what()).find("distinct") != std::string::npos);
        }
    }
    SUBCASE("non-positive gains and sizes") {
        auto d = scalar_design(Schedule::nominal());
        d.k = {0.0};
        CHECK_THROWS_AS(EsParams::assemble(d, quartic), AssemblyError);
        d = scalar_design(Schedule::nominal());
        d.alpha = {1.0, 1.0};
        CHECK_THROWS_AS(EsParams::assemble(d, quartic), AssemblyError);
        d = scalar_design(Schedule::nominal());
        d.omega_h = -1.0;
        CHECK_THROWS_AS(EsParams::assemble(d, quartic), AssemblyError);
    }
    SUBCASE("asymptotic exponent condition") {
        // quartic: 2 kappa = 4; need v > 4 - r >= 0
        CHECK_NOTHROW(EsParams::assemble(scalar_design(Schedule::asymptotic(0.1, 1.0 / 3.0, 4.0)), quartic));
        CHECK_THROWS_AS(EsParams::assemble(scalar_design(Schedule::asymptotic(0.1, 0.5, 3.5)), quartic),
                        AssemblyError);
        CHECK_THROWS_AS(EsParams::assemble(scalar_design(Schedule::asymptotic(0.1, 1.0, 5.0)), quartic),
                        AssemblyError);
        CHECK_NOTHROW(EsParams::assemble(scalar_design(Schedule::asymptotic(0.1, 0.6, 3.5)), quartic));
    }
    SUBCASE("exponential filter and gain conditions") {
        auto d = scalar_design(Schedule::exponential(0.1));
        d.omega_h = 0.2;
        CHECK_THROWS_AS(EsParams::assemble(d, quad), AssemblyError);
        // floor 2 lambda a2 (2 a2 + b2) / (a1 b1^2) = 0.2 for (theta-1)^2
        d = scalar_design(Schedule::exponential(0.1));
        d.k = {0.2};
        CHECK_THROWS_AS(EsParams::assemble(d, quad), AssemblyError);
        d.k = {0.21};
        CHECK_NOTHROW(EsParams::assemble(d, quad));
    }
}

TEST_CASE("transformed loop needs an optimum and a growing schedule") {
    auto map = maps::quartic_paper();
    const auto nominal = EsParams::assemble(scalar_design(Schedule::nominal()), map);
    CHECK_THROWS_AS(transformed_rhs(nominal, map, {{0.0}, 0.0}, 0.0), ArgumentError);
    const auto p = EsParams::assemble(scalar_design(Schedule::asymptotic(0.1, 1.0 / 3.0, 4.0)), map);
    map.optimum.reset();
    CHECK_THROWS_AS(transformed_rhs(p, map, {{0.0}, 0.0}, 0.0), CapabilityError);
}

TEST_CASE("phase shift") {
    const auto s = Schedule::exponential(1.0);
    CHECK(phase_shift(2.0, s, 3.0, 0.0) == 0.0);
    CHECK(phase_shift(2.0, s, 3.0, 0.5) == doctest::Approx(2.0 * std::exp(6.0) * 0.5));
    // tiny mismatch goes through the log domain but lands on the same value
    const double tiny = -3e-290;
    CHECK(phase_shift(2.0, s, 3.0, tiny) == doctest::Approx(2.0 * std::exp(6.0) * tiny).epsilon(1e-12));
    // phi would overflow, yet the product is representable
    CHECK(phase_shift(1.0, s, 400.0, 1e-300) == doctest::Approx(std::exp(800.0 - 300.0 * std::log(10.0))).epsilon(1e-9));
}

TEST_CASE("overflow of phi propagates from the loop") {
    const auto map = maps::quadratic({1.0}, {1.0});
    auto d = scalar_design(Schedule::exponential(1.0));
    d.k = {10.0};
    d.omega_h = 3.0;
    const auto p = EsParams::assemble(d, map);
    CHECK_THROWS_AS(es_rhs(p, map, {{0.0}, 0.0}, 400.0), OverflowError);
}
