#include "ueslab/schedules.hpp"

#include <cmath>
#include <limits>
#include <sstream>

#include "ueslab/errors.hpp"

namespace ueslab {

namespace {

template <class... Ts>
struct overloaded : Ts... {
    using Ts::operator()...;
};

double elapsed(const Schedule& s, double t) {
    if (!(t >= s.t0)) {
        std::ostringstream os;
        os << "schedule evaluated at t=" << t << " before t0=" << s.t0;
        throw ArgumentError(os.str());
    }
    return t - s.t0;
}

}  // namespace

Schedule Schedule::nominal(double t0) {
    if (!(t0 >= 0)) throw ArgumentError("schedule.t0 must be >= 0");
    return Schedule{Nominal{}, t0};
}

Schedule Schedule::asymptotic(double beta, double v, double r, double t0) {
    if (!(beta > 0)) throw ArgumentError("asymptotic schedule: beta must be > 0");
    if (!(v > 0)) throw ArgumentError("asymptotic schedule: v must be > 0");
    if (!(r >= 0)) throw ArgumentError("asymptotic schedule: r must be >= 0");
    if (!(t0 >= 0)) throw ArgumentError("schedule.t0 must be >= 0");
    return Schedule{Asymptotic{beta, v, r}, t0};
}

Schedule Schedule::exponential(double lambda, double t0) {
    if (!(lambda > 0)) throw ArgumentError("exponential schedule: lambda must be > 0");
    if (!(t0 >= 0)) throw ArgumentError("schedule.t0 must be >= 0");
    return Schedule{Exponential{lambda}, t0};
}

double log_xi(const Schedule& s, double t) {
    const double dt = elapsed(s, t);
    return std::visit(overloaded{
                          [](const Schedule::Nominal&) { return 0.0; },
                          [dt](const Schedule::Asymptotic& a) {
                              return std::log1p(a.beta * dt) / a.v;
                          },
                          [dt](const Schedule::Exponential& e) { return e.lambda * dt; },
                      },
                      s.kind);
}

double log_phi(const Schedule& s, double t) {
    const double dt = elapsed(s, t);
    return std::visit(overloaded{
                          [](const Schedule::Nominal&) { return 0.0; },
                          [dt](const Schedule::Asymptotic& a) {
                              return a.r / a.v * std::log1p(a.beta * dt);
                          },
                          [dt](const Schedule::Exponential& e) { return 2.0 * e.lambda * dt; },
                      },
                      s.kind);
}

double xi(const Schedule& s, double t) {
    if (const auto* a = std::get_if<Schedule::Asymptotic>(&s.kind))
        return std::pow(1.0 + a->beta * elapsed(s, t), 1.0 / a->v);
    return std::exp(log_xi(s, t));
}

double nu(const Schedule& s, double t) {
    if (const auto* a = std::get_if<Schedule::Asymptotic>(&s.kind))
        return std::pow(1.0 + a->beta * elapsed(s, t), -1.0 / a->v);
    return std::exp(-log_xi(s, t));
}

double phi(const Schedule& s, double t) {
    const double lp = log_phi(s, t);
    if (lp > std::log(std::numeric_limits<double>::max())) {
        std::ostringstream os;
        os << "gain schedule phi(t) overflows double at t=" << t;
        throw OverflowError(os.str(), t);
    }
    return std::exp(lp);
}

double growth_rate(const Schedule& s, double t) {
    const double dt = elapsed(s, t);
    return std::visit(overloaded{
                          [](const Schedule::Nominal&) { return 0.0; },
                          [dt](const Schedule::Asymptotic& a) {
                              return a.beta / (a.v * (1.0 + a.beta * dt));
                          },
                          [](const Schedule::Exponential& e) { return e.lambda; },
                      },
                      s.kind);
}

double eta_scale_exponent(const Schedule& s, int kappa) {
    if (s.is_asymptotic()) return 2.0 * kappa;
    if (s.is_exponential()) return 2.0;
    return 0.0;
}

}  // namespace ueslab
