#include "ueslab/sim.hpp"

#include <cmath>
#include <numbers>
#include <sstream>

#include "ueslab/errors.hpp"

namespace ueslab {

namespace {

bool all_finite(const Vector& x) {
    for (double v : x)
        if (!std::isfinite(v)) return false;
    return true;
}

std::size_t step_count(double t0, double t1, double dt) {
    const double n = (t1 - t0) / dt;
    const double nearest = std::round(n);
    if (std::abs(n - nearest) <= 1e-9 * std::max(1.0, n)) return static_cast<std::size_t>(nearest);
    return static_cast<std::size_t>(std::ceil(n));
}

// x + h * k
Vector axpy(const Vector& x, double h, const Vector& k) {
    Vector out(x.size());
    for (std::size_t i = 0; i < x.size(); ++i) out[i] = x[i] + h * k[i];
    return out;
}

}  // namespace

Solution integrate(const Rhs& rhs, Vector x0, double t0, double t1, double dt,
                   std::size_t record_every, std::optional<double> dither_frequency) {
    if (!(t1 > t0)) throw ArgumentError("integrate: need t1 > t0");
    if (!(dt > 0)) throw ArgumentError("integrate: dt must be positive");
    if (record_every == 0) throw ArgumentError("integrate: record_every must be >= 1");
    if (dither_frequency) {
        const double limit = 2.0 * std::numbers::pi / (kMinStepsPerPeriod * *dither_frequency);
        if (dt > limit * (1.0 + 1e-12)) {
            std::ostringstream os;
            os << "integrate: dt=" << dt << " exceeds 2*pi/(40*omega_max)=" << limit;
            throw ArgumentError(os.str());
        }
    }

    Solution sol;
    const std::size_t steps = step_count(t0, t1, dt);
    sol.times.reserve(steps / record_every + 2);
    sol.states.reserve(steps / record_every + 2);

    if (!all_finite(x0)) {
        sol.divergence = Divergence{t0, "initial state is not finite"};
        return sol;
    }
    Vector x = std::move(x0);
    sol.times.push_back(t0);
    sol.states.push_back(x);

    for (std::size_t i = 0; i < steps; ++i) {
        const double t = t0 + static_cast<double>(i) * dt;
        const double t_next = (i + 1 == steps) ? t1 : t0 + static_cast<double>(i + 1) * dt;
        const double h = t_next - t;
        try {
            const Vector k1 = rhs(t, x);
            const Vector k2 = rhs(t + 0.5 * h, axpy(x, 0.5 * h, k1));
            const Vector k3 = rhs(t + 0.5 * h, axpy(x, 0.5 * h, k2));
            const Vector k4 = rhs(t + h, axpy(x, h, k3));
            Vector next(x.size());
            for (std::size_t j = 0; j < x.size(); ++j)
                next[j] = x[j] + h / 6.0 * (k1[j] + 2.0 * k2[j] + 2.0 * k3[j] + k4[j]);
            if (!all_finite(next)) {
                std::ostringstream os;
                os << "integration diverged: non-finite state after t=" << t;
                throw NumericError(os.str());
            }
            x = std::move(next);
        } catch (const NumericError& e) {
            if (sol.times.back() != t) {
                sol.times.push_back(t);
                sol.states.push_back(x);
            }
            sol.divergence = Divergence{t, e.what()};
            return sol;
        }
        if ((i + 1) % record_every == 0 || i + 1 == steps) {
            sol.times.push_back(t_next);
            sol.states.push_back(x);
        }
    }
    return sol;
}

Trajectory simulate(const EsParams& p, const CostMap& map, const EsState& start, double t1,
                    double dt, std::size_t record_every) {
    const double t0 = p.schedule().t0;
    const Solution sol = integrate(es_system(p, map), stack(start.theta, start.eta), t0, t1, dt,
                                   record_every, p.max_frequency());
    Trajectory traj;
    traj.times = sol.times;
    traj.divergence = sol.divergence;
    traj.theta.reserve(sol.size());
    traj.eta.reserve(sol.size());
    traj.y.reserve(sol.size());
    for (const auto& x : sol.states) {
        Vector th(x.begin(), x.end() - 1);
        traj.y.push_back(eval(map, th));
        traj.eta.push_back(x.back());
        traj.theta.push_back(std::move(th));
    }
    return traj;
}

double Lemma1Params::eps3() const {
    const double a = eps2 * (q - 1.0) / beta;
    return eps1 * (q - 1.0) / beta / (a + 1.0 - p);
}

void Lemma1Params::validate() const {
    auto need = [](bool ok, const char* msg) {
        if (!ok) throw ArgumentError(msg);
    };
    need(beta > 0, "lemma1: beta must be > 0");
    need(eps1 > 0, "lemma1: eps1 must be > 0");
    need(eps2 > 0, "lemma1: eps2 must be > 0");
    need(v0 > 0, "lemma1: v0 must be > 0");
    need(p < 1, "lemma1: p must be < 1");
    need(q > 1, "lemma1: q must be > 1");
    need(t0 >= 0, "lemma1: t0 must be >= 0");
}

double lemma1_rhs(const Lemma1Params& p, double v, double t) {
    if (!(t >= p.t0)) throw ArgumentError("lemma1_rhs: t < t0");
    if (v < 0) throw ArgumentError("lemma1_rhs: V must be >= 0");
    const double s = 1.0 + p.beta * (t - p.t0);
    return -p.eps1 * std::pow(s, -p.p) * std::pow(v, p.q) + p.eps2 / s * v;
}

double lemma1_solution(const Lemma1Params& p, double t) {
    if (!(t >= p.t0)) throw ArgumentError("lemma1_solution: t < t0");
    const double s = 1.0 + p.beta * (t - p.t0);
    const double a = p.eps2 * (p.q - 1.0) / p.beta;
    const double e3 = p.eps3();
    const double denom = std::pow(p.v0, 1.0 - p.q) + e3 * std::pow(s, a + 1.0 - p.p) - e3;
    if (!(denom > 0)) {
        std::ostringstream os;
        os << "lemma1_solution: non-positive denominator " << denom << " at t=" << t;
        throw NumericError(os.str());
    }
    return std::pow(std::pow(s, a) / denom, 1.0 / (p.q - 1.0));
}

LemmaCheckReport lemma_check(const Lemma1Params& p, double horizon, double dt) {
    p.validate();
    if (!(horizon > 0)) throw ArgumentError("lemma_check: horizon must be > 0");
    const Rhs rhs = [&p](double t, const Vector& x) { return Vector{lemma1_rhs(p, x[0], t)}; };
    const Solution sol = integrate(rhs, Vector{p.v0}, p.t0, p.t0 + horizon, dt);
    if (!sol.ok()) throw NumericError(sol.divergence->message);
    LemmaCheckReport rep;
    for (std::size_t i = 0; i < sol.size(); ++i) {
        const double exact = lemma1_solution(p, sol.times[i]);
        const double rel = std::abs(sol.states[i][0] - exact) / std::abs(exact);
        if (rel > rep.max_rel_error) {
            rep.max_rel_error = rel;
            rep.worst_time = sol.times[i];
        }
    }
    rep.points = sol.size();
    return rep;
}

}  // namespace ueslab
