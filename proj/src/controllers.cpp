#include "ueslab/controllers.hpp"

#include <algorithm>
#include <cmath>
#include <sstream>

#include "ueslab/errors.hpp"

namespace ueslab {

Vector default_frequency_ratios(std::size_t n) {
    Vector w(n);
    double r = 1.0;
    for (auto& x : w) {
        x = r;
        r *= 1.5;
    }
    return w;
}

double EsParams::max_frequency() const {
    return d_.omega * *std::max_element(d_.omega_hat.begin(), d_.omega_hat.end());
}

namespace {

void require_positive(const Vector& v, const char* name, std::size_t n) {
    if (v.size() != n) {
        std::ostringstream os;
        os << "es." << name << " has " << v.size() << " entries, map dimension is " << n;
        throw AssemblyError(os.str());
    }
    for (double x : v)
        if (!(x > 0) || !std::isfinite(x))
            throw AssemblyError(std::string("es.") + name + " entries must be finite and > 0");
}

}  // namespace

EsParams EsParams::assemble(EsDesign d, const CostMap& map) {
    const std::size_t n = map.dim;
    if (d.omega_hat.empty()) d.omega_hat = default_frequency_ratios(n);
    require_positive(d.alpha, "alpha", n);
    require_positive(d.k, "k", n);
    require_positive(d.omega_hat, "omega_hat", n);
    if (!(d.omega > 0)) throw AssemblyError("es.omega must be > 0");
    if (!(d.omega_h > 0)) throw AssemblyError("es.omega_h must be > 0");

    for (std::size_t i = 0; i < n; ++i)
        for (std::size_t j = i + 1; j < n; ++j)
            if (d.omega_hat[i] == d.omega_hat[j]) {
                std::ostringstream os;
                os << "es.omega_hat entries must be pairwise distinct (omega_hat_" << i + 1
                   << " = omega_hat_" << j + 1 << " = " << d.omega_hat[i] << ")";
                throw AssemblyError(os.str());
            }

    const double two_kappa = 2.0 * map.kappa;
    if (const auto* a = std::get_if<Schedule::Asymptotic>(&d.schedule.kind)) {
        if (!(a->v > two_kappa - a->r && two_kappa - a->r >= 0)) {
            std::ostringstream os;
            os << "asymptotic schedule requires v > 2*kappa - r >= 0; got v=" << a->v
               << ", r=" << a->r << ", kappa=" << map.kappa;
            throw AssemblyError(os.str());
        }
    }
    if (const auto* e = std::get_if<Schedule::Exponential>(&d.schedule.kind)) {
        if (!(d.omega_h > 2.0 * e->lambda)) {
            std::ostringstream os;
            os << "exponential schedule requires omega_h > 2*lambda; got omega_h=" << d.omega_h
               << ", lambda=" << e->lambda;
            throw AssemblyError(os.str());
        }
        if (map.kappa == 1 && map.bounds) {
            const auto& b = *map.bounds;
            const double floor = 2.0 * e->lambda * b.a2 * (2.0 * b.a2 + b.b2) / (b.a1 * b.b1 * b.b1);
            for (std::size_t i = 0; i < n; ++i)
                if (!(d.k[i] * d.alpha[i] > floor)) {
                    std::ostringstream os;
                    os << "exponential schedule requires k_i*alpha_i > " << floor
                       << " (2*lambda*a2*(2*a2+b2)/(a1*b1^2)); channel " << i + 1 << " has "
                       << d.k[i] * d.alpha[i];
                    throw AssemblyError(os.str());
                }
        }
    }
    return EsParams(std::move(d));
}

double phase_shift(double gain, const Schedule& s, double t, double mismatch) {
    if (mismatch == 0.0) return 0.0;
    if (std::abs(mismatch) < 1e-280) {
        const double mag = std::exp(std::log(gain) + log_phi(s, t) + std::log(std::abs(mismatch)));
        return std::copysign(mag, mismatch);
    }
    return gain * phi(s, t) * mismatch;
}

StateRate es_rhs(const EsParams& p, const CostMap& map, const EsState& s, double t) {
    const std::size_t n = p.dim();
    if (s.theta.size() != n) throw ArgumentError("es_rhs: state dimension mismatch");
    const double y = eval(map, s.theta);
    const double mismatch = y - s.eta;
    const double amp = nu(p.schedule(), t);

    StateRate out;
    out.theta_dot.resize(n);
    for (std::size_t i = 0; i < n; ++i) {
        const double w = p.channel_frequency(i);
        const double shift = phase_shift(p.k()[i], p.schedule(), t, mismatch);
        out.theta_dot[i] = amp * std::sqrt(p.alpha()[i] * w) * std::cos(w * t + shift);
    }
    out.eta_dot = -p.omega_h() * s.eta + p.omega_h() * y;
    return out;
}

double transformed_cost(const CostMap& map, const Vector& theta_f, double xi_value) {
    Vector d(theta_f.size());
    for (std::size_t i = 0; i < d.size(); ++i) d[i] = theta_f[i] / xi_value;
    return map.excess(d);
}

namespace {

void require_transformable(const EsParams& p, const CostMap& map, const char* who) {
    if (!map.has_optimum())
        throw CapabilityError(std::string(who) + ": map '" + map.name +
                              "' has no known optimum; the transformation needs th* and J(th*)");
    if (p.schedule().is_nominal())
        throw ArgumentError(std::string(who) + ": transformation undefined for a nominal schedule");
}

}  // namespace

StateRate transformed_rhs(const EsParams& p, const CostMap& map, const TransformedState& s,
                          double t) {
    require_transformable(p, map, "transformed_rhs");
    const std::size_t n = p.dim();
    if (s.theta_f.size() != n) throw ArgumentError("transformed_rhs: state dimension mismatch");
    const Schedule& sch = p.schedule();
    const double x = xi(sch, t);
    const double m = eta_scale_exponent(sch, map.kappa);
    const double rate = growth_rate(sch, t);
    const double scale = std::exp(m * log_xi(sch, t));  // xi^m
    const double jf = transformed_cost(map, s.theta_f, x);
    const double mismatch = jf - s.eta_f / scale;

    StateRate out;
    out.theta_dot.resize(n);
    for (std::size_t i = 0; i < n; ++i) {
        const double w = p.channel_frequency(i);
        const double shift = phase_shift(p.k()[i], sch, t, mismatch);
        out.theta_dot[i] = rate * s.theta_f[i] + std::sqrt(p.alpha()[i] * w) * std::cos(w * t + shift);
    }
    out.eta_dot = (m * rate - p.omega_h()) * s.eta_f + p.omega_h() * scale * jf;
    return out;
}

Vector stack(const Vector& theta, double eta) {
    Vector x = theta;
    x.push_back(eta);
    return x;
}

StackedRhs es_system(const EsParams& p, const CostMap& map) {
    return [p, map](double t, const Vector& x) {
        EsState s{Vector(x.begin(), x.end() - 1), x.back()};
        const auto r = es_rhs(p, map, s, t);
        return stack(r.theta_dot, r.eta_dot);
    };
}

StackedRhs transformed_system(const EsParams& p, const CostMap& map) {
    require_transformable(p, map, "transformed_system");
    return [p, map](double t, const Vector& x) {
        TransformedState s{Vector(x.begin(), x.end() - 1), x.back()};
        const auto r = transformed_rhs(p, map, s, t);
        return stack(r.theta_dot, r.eta_dot);
    };
}

TransformedState to_transformed(const EsParams& p, const CostMap& map, const EsState& s,
                                double t) {
    require_transformable(p, map, "to_transformed");
    const Schedule& sch = p.schedule();
    const double x = xi(sch, t);
    const double scale = std::exp(eta_scale_exponent(sch, map.kappa) * log_xi(sch, t));
    TransformedState out;
    out.theta_f.resize(s.theta.size());
    for (std::size_t i = 0; i < s.theta.size(); ++i)
        out.theta_f[i] = x * (s.theta[i] - (*map.optimum)[i]);
    out.eta_f = scale * (s.eta - *map.optimal_value);
    return out;
}

EsState from_transformed(const EsParams& p, const CostMap& map, const TransformedState& s,
                         double t) {
    require_transformable(p, map, "from_transformed");
    const Schedule& sch = p.schedule();
    const double x = xi(sch, t);
    const double scale = std::exp(eta_scale_exponent(sch, map.kappa) * log_xi(sch, t));
    EsState out;
    out.theta.resize(s.theta_f.size());
    for (std::size_t i = 0; i < s.theta_f.size(); ++i)
        out.theta[i] = (*map.optimum)[i] + s.theta_f[i] / x;
    out.eta = *map.optimal_value + s.eta_f / scale;
    return out;
}

}  // namespace ueslab
