#include <doctest.h>

#include <cmath>

#include "ueslab/errors.hpp"
#include "ueslab/maps.hpp"
#include "ueslab/probe.hpp"

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

ProbeConfig base_config() {
    ProbeConfig c;
    c.omega_values = {10.0, 50.0, 250.0};
    c.epsilon = 0.5;
    c.delta = 1.0;
    c.horizon = 20.0;
    c.trials = 3;
    c.seed = 2024;
    return c;
}

}  // namespace

TEST_CASE("probe gap is strictly decreasing in omega") {
    const auto map = maps::quartic_paper();
    const auto cfg = base_config();
    const auto report = practical_stability_probe(quartic_asymptotic(map), map, cfg);
    REQUIRE(report.size() == 9);
    const auto gaps = max_gap_per_omega(report, cfg);
    REQUIRE(gaps.size() == 3);
    CHECK(gaps[0] > gaps[1]);
    CHECK(gaps[1] > gaps[2]);
    for (const auto& t : report) {
        CHECK_FALSE(t.failure.has_value());
        CHECK(t.entry_time.has_value());
    }
}

TEST_CASE("epsilon equal to delta means every trial starts inside") {
    const auto map = maps::quartic_paper();
    auto cfg = base_config();
    cfg.epsilon = cfg.delta;
    cfg.horizon = 2.0;
    for (const auto& t : practical_stability_probe(quartic_asymptotic(map), map, cfg)) {
        REQUIRE(t.entry_time.has_value());
        CHECK(*t.entry_time == 0.0);
    }
}

TEST_CASE("trial started at the optimum stays within epsilon") {
    const auto map = maps::quartic_paper();
    // the dither alone moves theta by up to sqrt(alpha / omega) = 0.32 at omega = 10
    const auto cfg = base_config();
    for (double w : cfg.omega_values) {
        EsDesign d = quartic_asymptotic(map).design();
        d.omega = w;
        const auto p = EsParams::assemble(d, map);
        const auto t = run_probe_trial(p, map, cfg, {2.0}, 1.0);
        CHECK_FALSE(t.failure.has_value());
        REQUIRE(t.entry_time.has_value());
        CHECK(*t.entry_time == 0.0);
        CHECK(t.stayed);
    }
}

TEST_CASE("trial starts lie in the open delta-ball and do not depend on omega") {
    const auto map = maps::quadratic({1.0, 2.0}, {1.0, -1.0});
    const auto cfg = base_config();
    for (std::size_t i = 0; i < 50; ++i) {
        const auto th = probe_initial_theta(map, cfg, i);
        const double r = std::hypot(th[0] - 1.0, th[1] + 1.0);
        CHECK(r < cfg.delta);
        CHECK(probe_initial_theta(map, cfg, i) == th);
    }
    CHECK(probe_initial_theta(map, cfg, 0) != probe_initial_theta(map, cfg, 1));
}

TEST_CASE("parallel probe matches the serial reference exactly") {
    const auto map = maps::quartic_paper();
    auto cfg = base_config();
    cfg.omega_values = {10.0, 30.0};
    cfg.horizon = 5.0;
    cfg.trials = 5;
    const auto p = quartic_asymptotic(map);
    const auto a = practical_stability_probe(p, map, cfg);
    const auto b = practical_stability_probe_serial(p, map, cfg);
    REQUIRE(a.size() == b.size());
    for (std::size_t i = 0; i < a.size(); ++i) {
        CHECK(a[i].omega == b[i].omega);
        CHECK(a[i].trial == b[i].trial);
        CHECK(a[i].entry_time == b[i].entry_time);
        CHECK(a[i].stayed == b[i].stayed);
        CHECK(a[i].sup_gap == b[i].sup_gap);
    }
}

TEST_CASE("probe configuration validation") {
    auto cfg = base_config();
    CHECK_NOTHROW(cfg.validate());
    cfg.omega_values = {};
    CHECK_THROWS_AS(cfg.validate(), ArgumentError);
    cfg = base_config();
    cfg.omega_values = {50.0, 10.0};
    CHECK_THROWS_AS(cfg.validate(), ArgumentError);
    cfg = base_config();
    cfg.epsilon = 2.0;
    CHECK_THROWS_AS(cfg.validate(), ArgumentError);
    cfg = base_config();
    cfg.trials = 0;
    CHECK_THROWS_AS(cfg.validate(), ArgumentError);

    auto map = maps::quartic_paper();
    const auto p = quartic_asymptotic(map);
    map.optimum.reset();
    CHECK_THROWS_AS(practical_stability_probe(p, map, base_config()), CapabilityError);
}
