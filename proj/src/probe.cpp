#include "ueslab/probe.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <numbers>
#include <random>

#include "ueslab/averaging.hpp"
#include "ueslab/errors.hpp"
#include "ueslab/sim.hpp"

namespace ueslab {

void ProbeConfig::validate() const {
    if (omega_values.empty()) throw ArgumentError("probe.omega_values must not be empty");
    for (std::size_t i = 0; i < omega_values.size(); ++i) {
        if (!(omega_values[i] > 0)) throw ArgumentError("probe.omega_values must be > 0");
        if (i > 0 && !(omega_values[i] > omega_values[i - 1]))
            throw ArgumentError("probe.omega_values must be strictly ascending");
    }
    if (!(epsilon > 0)) throw ArgumentError("probe.epsilon must be > 0");
    if (!(delta > 0)) throw ArgumentError("probe.delta must be > 0");
    if (!(epsilon <= delta)) throw ArgumentError("probe.epsilon must not exceed probe.delta");
    if (!(horizon > 0)) throw ArgumentError("probe.horizon must be > 0");
    if (trials == 0) throw ArgumentError("probe.trials must be >= 1");
    if (!(steps_per_period >= kMinStepsPerPeriod))
        throw ArgumentError("probe.steps_per_period must be >= 40");
}

Vector probe_initial_theta(const CostMap& map, const ProbeConfig& cfg, std::size_t trial) {
    if (!map.has_optimum()) throw CapabilityError("probe: map '" + map.name + "' has no optimum");
    std::seed_seq seq{static_cast<std::uint32_t>(cfg.seed), static_cast<std::uint32_t>(cfg.seed >> 32),
                      static_cast<std::uint32_t>(trial)};
    std::mt19937_64 rng(seq);
    std::normal_distribution<double> normal(0.0, 1.0);
    std::uniform_real_distribution<double> unit(0.0, 1.0);
    const std::size_t n = map.dim;
    for (;;) {
        Vector dir(n);
        for (auto& d : dir) d = normal(rng);
        const double len = norm(dir);
        // open ball: radius strictly below delta
        const double rho = cfg.delta * std::pow(unit(rng), 1.0 / static_cast<double>(n));
        if (len == 0.0 || !(rho < cfg.delta)) continue;
        Vector theta = *map.optimum;
        for (std::size_t i = 0; i < n; ++i) theta[i] += dir[i] * rho / len;
        return theta;
    }
}

ProbeTrial run_probe_trial(const EsParams& p, const CostMap& map, const ProbeConfig& cfg,
                           const Vector& theta0, double eta0) {
    ProbeTrial out;
    out.omega = p.omega();
    const double t0 = p.schedule().t0;
    const double t1 = t0 + cfg.horizon;
    const double dt = 2.0 * std::numbers::pi / (p.max_frequency() * cfg.steps_per_period);
    const Vector& star = *map.optimum;
    const double nan = std::numeric_limits<double>::quiet_NaN();

    try {
        const Solution full = integrate(es_system(p, map), stack(theta0, eta0), t0, t1, dt, 1,
                                        p.max_frequency());
        // xi(t0) = 1, so the matched averaged start is theta0 - th*, eta0 - J*.
        Vector theta_f0(theta0.size());
        for (std::size_t i = 0; i < theta0.size(); ++i) theta_f0[i] = theta0[i] - star[i];
        const Solution avg = integrate(averaged_system(p, map),
                                       stack(theta_f0, eta0 - *map.optimal_value), t0, t1, dt, 1);

        for (std::size_t k = 0; k < full.size(); ++k) {
            double dist2 = 0.0;
            for (std::size_t i = 0; i < star.size(); ++i) {
                const double d = full.states[k][i] - star[i];
                dist2 += d * d;
            }
            const bool inside = std::sqrt(dist2) < cfg.epsilon;
            if (inside && !out.entry_time) {
                out.entry_time = full.times[k];
                out.stayed = true;
            } else if (!inside && out.entry_time) {
                out.stayed = false;
            }
        }

        if (!full.ok() || !avg.ok()) {
            out.failure = !full.ok() ? full.divergence->message : avg.divergence->message;
            out.stayed = false;
            out.sup_gap = nan;
            return out;
        }
        double gap = 0.0;
        for (std::size_t k = 0; k < full.size(); ++k) {
            const double x = xi(p.schedule(), full.times[k]);
            for (std::size_t i = 0; i < star.size(); ++i)
                gap = std::max(gap, std::abs(x * (full.states[k][i] - star[i]) - avg.states[k][i]));
        }
        out.sup_gap = gap;
    } catch (const std::exception& e) {
        out.failure = e.what();
        out.stayed = false;
        out.sup_gap = nan;
    }
    return out;
}

namespace {

struct ProbePlan {
    std::vector<EsParams> per_omega;
    std::vector<Vector> starts;
};

ProbePlan plan_probe(const EsParams& p, const CostMap& map, const ProbeConfig& cfg) {
    cfg.validate();
    if (!map.has_optimum()) throw CapabilityError("probe: map '" + map.name + "' has no optimum");
    ProbePlan plan;
    for (double w : cfg.omega_values) {
        EsDesign d = p.design();
        d.omega = w;
        plan.per_omega.push_back(EsParams::assemble(std::move(d), map));
    }
    for (std::size_t tr = 0; tr < cfg.trials; ++tr)
        plan.starts.push_back(probe_initial_theta(map, cfg, tr));
    return plan;
}

ProbeTrial run_indexed(const ProbePlan& plan, const CostMap& map, const ProbeConfig& cfg,
                       std::size_t idx) {
    const std::size_t wi = idx / cfg.trials;
    const std::size_t tr = idx % cfg.trials;
    const Vector& th0 = plan.starts[tr];
    ProbeTrial t = run_probe_trial(plan.per_omega[wi], map, cfg, th0, map.eval_fn(th0));
    t.trial = tr;
    return t;
}

}  // namespace

std::vector<ProbeTrial> practical_stability_probe(const EsParams& p, const CostMap& map,
                                                  const ProbeConfig& cfg) {
    const ProbePlan plan = plan_probe(p, map, cfg);
    const std::size_t total = cfg.omega_values.size() * cfg.trials;
    std::vector<ProbeTrial> report(total);
    const auto count = static_cast<std::ptrdiff_t>(total);
#pragma omp parallel for schedule(dynamic, 1)
    for (std::ptrdiff_t idx = 0; idx < count; ++idx)
        report[idx] = run_indexed(plan, map, cfg, static_cast<std::size_t>(idx));
    return report;
}

std::vector<ProbeTrial> practical_stability_probe_serial(const EsParams& p, const CostMap& map,
                                                         const ProbeConfig& cfg) {
    const ProbePlan plan = plan_probe(p, map, cfg);
    const std::size_t total = cfg.omega_values.size() * cfg.trials;
    std::vector<ProbeTrial> report;
    report.reserve(total);
    for (std::size_t idx = 0; idx < total; ++idx) report.push_back(run_indexed(plan, map, cfg, idx));
    return report;
}

Vector max_gap_per_omega(const std::vector<ProbeTrial>& report, const ProbeConfig& cfg) {
    Vector out(cfg.omega_values.size(), 0.0);
    for (std::size_t wi = 0; wi < cfg.omega_values.size(); ++wi)
        for (const auto& t : report)
            if (t.omega == cfg.omega_values[wi]) {
                if (std::isnan(t.sup_gap) || std::isnan(out[wi]))
                    out[wi] = std::numeric_limits<double>::quiet_NaN();
                else
                    out[wi] = std::max(out[wi], t.sup_gap);
            }
    return out;
}

}  // namespace ueslab
