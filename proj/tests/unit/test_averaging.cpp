#include <doctest.h>

#include <cmath>
#include <random>

#include "ueslab/averaging.hpp"
#include "ueslab/errors.hpp"
#include "ueslab/maps.hpp"
#include "ueslab/sim.hpp"

using namespace ueslab;

namespace {

EsParams quartic_asymptotic(const CostMap& map) {
    EsDesign d;
    d.alpha = {1.0};
    d.k = {0.3};
    d.omega = 5.0;
    d.omega_h = 3.0;
    d.schedule = Schedule::asymptotic(0.1, 1.0 / 3.0, 4.0);
    return EsParams::assemble(d, map);
}

EsParams quad_exponential(const CostMap& map, double k = 1.0) {
    EsDesign d;
    d.alpha.assign(map.dim, 1.0);
    d.k.assign(map.dim, k);
    d.omega = 50.0;
    d.omega_h = 3.0;
    d.schedule = Schedule::exponential(0.1);
    return EsParams::assemble(d, map);
}

}  // namespace

TEST_CASE("bracket of x and x^2") {
    const VectorField f = [](const Vector& x, double) { return Vector{x[0]}; };
    const VectorField g = [](const Vector& x, double) { return Vector{x[0] * x[0]}; };
    CHECK(std::abs(lie_bracket(f, g, {2.0}, 0.0)[0] - 4.0) < 1e-6);
}

TEST_CASE("bracket of constant fields vanishes") {
    const VectorField f = [](const Vector&, double) { return Vector{1.0, -2.0, 0.5}; };
    const VectorField g = [](const Vector&, double) { return Vector{3.0, 0.25, 7.0}; };
    const auto b = lie_bracket(f, g, {0.3, -1.2, 5.0}, 1.0);
    for (double v : b) CHECK(std::abs(v) < 1e-9);
}

TEST_CASE("bracket is antisymmetric") {
    const VectorField f = [](const Vector& x, double t) {
        return Vector{std::sin(x[1]) + t, x[0] * x[1]};
    };
    const VectorField g = [](const Vector& x, double t) {
        return Vector{x[0] * x[0] - x[1], std::cos(x[0] * t)};
    };
    std::mt19937_64 rng(8);
    std::uniform_real_distribution<double> u(-2.0, 2.0);
    for (int s = 0; s < 100; ++s) {
        const Vector x{u(rng), u(rng)};
        const double t = u(rng);
        const auto fg = lie_bracket(f, g, x, t);
        const auto gf = lie_bracket(g, f, x, t);
        CHECK(std::abs(fg[0] + gf[0]) < 1e-9);
        CHECK(std::abs(fg[1] + gf[1]) < 1e-9);
    }
}

TEST_CASE("non-finite field values are a numeric error") {
    const VectorField f = [](const Vector& x, double) { return Vector{1.0 / (x[0] - 1.0)}; };
    const VectorField g = [](const Vector&, double) { return Vector{1.0}; };
    CHECK_THROWS_AS(lie_bracket(f, g, {1.0}, 0.0), NumericError);
}

TEST_CASE("control-affine fields reproduce the transformed loop") {
    const auto map = maps::quadratic({1.0, 2.0}, {0.0, 1.0});
    const auto p = quad_exponential(map);
    std::mt19937_64 rng(21);
    std::uniform_real_distribution<double> u(-1.0, 1.0);
    std::uniform_real_distribution<double> ut(0.0, 5.0);
    for (int s = 0; s < 50; ++s) {
        const Vector x{u(rng), u(rng), u(rng)};
        const double t = ut(rng);
        auto sum = drift_field(p, map, x, t);
        for (std::size_t i = 0; i < 2; ++i) {
            const double w = p.channel_frequency(i);
            const auto bc = cos_field(p, map, i, x, t);
            const auto bs = sin_field(p, map, i, x, t);
            for (std::size_t j = 0; j < 3; ++j)
                sum[j] += bc[j] * std::sqrt(w) * std::cos(w * t) - bs[j] * std::sqrt(w) * std::sin(w * t);
        }
        const auto r = transformed_rhs(p, map, {{x[0], x[1]}, x[2]}, t);
        CHECK(sum[0] == doctest::Approx(r.theta_dot[0]).epsilon(1e-10));
        CHECK(sum[1] == doctest::Approx(r.theta_dot[1]).epsilon(1e-10));
        CHECK(sum[2] == doctest::Approx(r.eta_dot).epsilon(1e-10));
    }
}

TEST_CASE("numeric brackets of the b-fields match the closed form") {
    const auto quartic = maps::quartic_paper();
    const auto pq = quartic_asymptotic(quartic);
    const auto quad = maps::quadratic({1.0, 3.0}, {0.0, 1.0});
    const auto pe = quad_exponential(quad, 2.0);
    std::mt19937_64 rng(99);
    std::uniform_real_distribution<double> u(-1.0, 1.0);
    std::uniform_real_distribution<double> ut(0.0, 10.0);

    for (int s = 0; s < 100; ++s) {
        const double t = ut(rng);
        {
            const Vector x{u(rng), u(rng)};
            const auto num = lie_bracket(make_cos_field(pq, quartic, 0), make_sin_field(pq, quartic, 0), x, t);
            const auto cf = bracket_closed_form(pq, quartic, 0, x, t);
            CHECK(std::abs(num[0] - cf[0]) <= 1e-5 * (1.0 + std::abs(cf[0])));
            CHECK(num[1] == 0.0);
            CHECK(cf[1] == 0.0);
            // closed form itself: k alpha phi dJ_f/dtheta_f = 0.3 xi^4 * 4 theta_f^3 / xi^4
            CHECK(cf[0] == doctest::Approx(0.3 * 4.0 * x[0] * x[0] * x[0]).epsilon(1e-10));
        }
        {
            const Vector x{u(rng), u(rng), u(rng)};
            for (std::size_t i = 0; i < 2; ++i) {
                const auto num = lie_bracket(make_cos_field(pe, quad, i), make_sin_field(pe, quad, i), x, t);
                const auto cf = bracket_closed_form(pe, quad, i, x, t);
                for (std::size_t j = 0; j < 2; ++j)
                    CHECK(std::abs(num[j] - cf[j]) <= 1e-5 * (1.0 + std::abs(cf[j])));
                CHECK(num[2] == 0.0);
            }
        }
    }
}

TEST_CASE("averaged asymptotic system evaluated by hand") {
    const auto map = maps::quartic_paper();
    const auto p = quartic_asymptotic(map);
    const auto r = averaged_asymptotic_rhs(p, map, {{1.0}, 0.0}, 0.0);
    CHECK(r.theta_dot[0] == doctest::Approx(-0.3).epsilon(1e-12));
    CHECK(r.eta_dot == doctest::Approx(3.0).epsilon(1e-12));
    const auto o = averaged_asymptotic_rhs(p, map, {{0.0}, 0.0}, 4.0);
    CHECK(o.theta_dot[0] == 0.0);
    CHECK(o.eta_dot == 0.0);
}

TEST_CASE("averaged system equals drift minus half the bracket sum") {
    const auto map = maps::quartic_paper();
    const auto p = quartic_asymptotic(map);
    std::mt19937_64 rng(5);
    std::uniform_real_distribution<double> u(-1.5, 1.5);
    std::uniform_real_distribution<double> ut(0.0, 30.0);
    for (int s = 0; s < 100; ++s) {
        const Vector x{u(rng), u(rng)};
        const double t = ut(rng);
        const auto b0 = drift_field(p, map, x, t);
        const auto half = numeric_bracket_drift(p, map, x, t);
        const auto avg = averaged_asymptotic_rhs(p, map, {{x[0]}, x[1]}, t);
        CHECK(std::abs(b0[0] + half[0] - avg.theta_dot[0]) <= 1e-5 * (1.0 + std::abs(avg.theta_dot[0])));
        CHECK(b0[1] + half[1] == doctest::Approx(avg.eta_dot).epsilon(1e-12));
    }
}

TEST_CASE("Lyapunov identity for the quartic map") {
    const auto map = maps::quartic_paper();
    const auto s = Schedule::asymptotic(0.1, 1.0 / 3.0, 4.0);
    for (double t : {0.0, 3.0, 40.0, 100.0}) {
        const double xv = xi(s, t);
        for (double th : {-0.8, 0.1, 1.0}) {
            CHECK(std::pow(xv, 4) * transformed_cost(map, {th}, xv) ==
                  doctest::Approx(th * th * th * th).epsilon(1e-12));
        }
    }
}

TEST_CASE("averaged exponential system evaluated by hand") {
    const auto map = maps::quadratic({1.0}, {1.0});
    const auto p = quad_exponential(map);
    const auto r = averaged_exponential_rhs(p, map, {{1.0}, 0.0}, 0.0);
    CHECK(r.theta_dot[0] == doctest::Approx(-0.9).epsilon(1e-12));
    CHECK(r.eta_dot == doctest::Approx(3.0).epsilon(1e-12));
    // phi = zeta^2 cancels the 1/zeta^2 of the gradient, so the values do not depend on t
    const auto late = averaged_exponential_rhs(p, map, {{1.0}, 0.0}, 7.0);
    CHECK(late.theta_dot[0] == doctest::Approx(-0.9).epsilon(1e-10));
    const auto o = averaged_exponential_rhs(p, map, {{0.0}, 0.0}, 2.0);
    CHECK(o.theta_dot[0] == 0.0);
    CHECK(o.eta_dot == 0.0);
}

TEST_CASE("unforced filter of the averaged exponential system") {
    const auto map = maps::quadratic({1.0}, {1.0});
    const auto p = quad_exponential(map);
    const auto sol = integrate(averaged_system(p, map), {0.0, 1.0}, 0.0, 5.0, 1e-3);
    REQUIRE(sol.ok());
    for (std::size_t i = 0; i < sol.size(); i += 250) {
        CHECK(sol.states[i][0] == 0.0);
        CHECK(std::abs(sol.states[i][1] - std::exp((0.2 - 3.0) * sol.times[i])) < 1e-8);
    }
}

TEST_CASE("averaged system preconditions") {
    const auto quartic = maps::quartic_paper();
    EsDesign d;
    d.alpha = {1.0};
    d.k = {1.0};
    d.schedule = Schedule::exponential(0.1);
    const auto pe = EsParams::assemble(d, quartic);
    CHECK_THROWS_AS(averaged_exponential_rhs(pe, quartic, {{1.0}, 0.0}, 0.0), CapabilityError);
    CHECK_THROWS_AS(averaged_asymptotic_rhs(pe, quartic, {{1.0}, 0.0}, 0.0), ArgumentError);
    const auto pq = quartic_asymptotic(quartic);
    CHECK_THROWS_AS(averaged_exponential_rhs(pq, quartic, {{1.0}, 0.0}, 0.0), ArgumentError);
}

TEST_CASE("averaging gap shrinks with the dither frequency") {
    const auto map = maps::quartic_paper();
    double prev = 1e300;
    for (double w : {10.0, 50.0, 250.0}) {
        EsDesign d = quartic_asymptotic(map).design();
        d.omega = w;
        const auto p = EsParams::assemble(d, map);
        const double gap = transformed_averaging_gap(p, map, {{1.0}, 0.0}, 20.0, 2.0 * 3.141592653589793 / (80.0 * w));
        CHECK(std::isfinite(gap));
        CHECK(gap < prev);
        prev = gap;
    }
}
