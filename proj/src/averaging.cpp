#include "ueslab/averaging.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <sstream>

#include "ueslab/errors.hpp"

namespace ueslab {

namespace {

void require_finite(const Vector& v, const char* who) {
    for (double x : v)
        if (!std::isfinite(x)) throw NumericError(std::string(who) + ": vector field is not finite");
}

// Time-dependent factors of the transformation at t.
struct Frame {
    double xi = 1.0;
    double m = 0.0;
    double scale = 1.0;  // xi^m
    double rate = 0.0;   // xi'/xi
};

Frame frame_at(const EsParams& p, const CostMap& map, double t) {
    if (!map.has_optimum())
        throw CapabilityError("averaging: map '" + map.name + "' has no known optimum");
    const Schedule& s = p.schedule();
    Frame f;
    f.xi = xi(s, t);
    f.m = eta_scale_exponent(s, map.kappa);
    f.scale = std::exp(f.m * log_xi(s, t));
    f.rate = growth_rate(s, t);
    return f;
}

Vector theta_part(const Vector& x, std::size_t n) {
    if (x.size() != n + 1) throw ArgumentError("averaging: stacked state must have n+1 entries");
    return Vector(x.begin(), x.begin() + static_cast<std::ptrdiff_t>(n));
}

double channel_phase(const EsParams& p, const CostMap& map, std::size_t i, const Vector& x,
                     double t) {
    const Frame f = frame_at(p, map, t);
    const Vector th = theta_part(x, p.dim());
    const double mismatch = transformed_cost(map, th, f.xi) - x.back() / f.scale;
    return phase_shift(p.k()[i], p.schedule(), t, mismatch);
}

// phi(t) * dJ_f/dtheta_f = phi(t)/xi * grad J(th* + theta_f/xi)
Vector scaled_cost_gradient(const EsParams& p, const CostMap& map, const Vector& theta_f,
                            const Frame& f, double t) {
    Vector d(theta_f.size());
    for (std::size_t i = 0; i < d.size(); ++i) d[i] = theta_f[i] / f.xi;
    Vector g = map.excess_gradient(d);
    const double factor = std::exp(log_phi(p.schedule(), t) - std::log(f.xi));
    for (auto& gi : g) gi *= factor;
    return g;
}

}  // namespace

Matrix jacobian_fd(const VectorField& f, const Vector& x, double t, double h) {
    if (!(h > 0)) throw ArgumentError("jacobian_fd: step must be positive");
    const std::size_t n = x.size();
    Matrix J(n);
    Vector xp = x;
    for (std::size_t j = 0; j < n; ++j) {
        const double hj = h * std::max(1.0, std::abs(x[j]));
        xp[j] = x[j] + hj;
        const Vector fp = f(xp, t);
        xp[j] = x[j] - hj;
        const Vector fm = f(xp, t);
        xp[j] = x[j];
        require_finite(fp, "jacobian_fd");
        require_finite(fm, "jacobian_fd");
        if (fp.size() != n || fm.size() != n)
            throw ArgumentError("jacobian_fd: field dimension differs from state dimension");
        for (std::size_t i = 0; i < n; ++i) J(i, j) = (fp[i] - fm[i]) / (2.0 * hj);
    }
    return J;
}

Vector lie_bracket(const VectorField& f, const VectorField& g, const Vector& x, double t,
                   double h) {
    const Vector fx = f(x, t);
    const Vector gx = g(x, t);
    require_finite(fx, "lie_bracket");
    require_finite(gx, "lie_bracket");
    const Matrix Jf = jacobian_fd(f, x, t, h);
    const Matrix Jg = jacobian_fd(g, x, t, h);
    const std::size_t n = x.size();
    Vector out(n, 0.0);
    for (std::size_t i = 0; i < n; ++i) {
        double s = 0.0;
        for (std::size_t j = 0; j < n; ++j) s += Jg(i, j) * fx[j] - Jf(i, j) * gx[j];
        out[i] = s;
    }
    return out;
}

Vector drift_field(const EsParams& p, const CostMap& map, const Vector& x, double t) {
    const Frame f = frame_at(p, map, t);
    const std::size_t n = p.dim();
    const Vector th = theta_part(x, n);
    Vector out(n + 1);
    for (std::size_t i = 0; i < n; ++i) out[i] = f.rate * th[i];
    const double jf = transformed_cost(map, th, f.xi);
    out[n] = (f.m * f.rate - p.omega_h()) * x.back() + p.omega_h() * f.scale * jf;
    return out;
}

Vector cos_field(const EsParams& p, const CostMap& map, std::size_t channel, const Vector& x,
                 double t) {
    Vector out(p.dim() + 1, 0.0);
    out[channel] = std::sqrt(p.alpha()[channel]) * std::cos(channel_phase(p, map, channel, x, t));
    return out;
}

Vector sin_field(const EsParams& p, const CostMap& map, std::size_t channel, const Vector& x,
                 double t) {
    Vector out(p.dim() + 1, 0.0);
    out[channel] = std::sqrt(p.alpha()[channel]) * std::sin(channel_phase(p, map, channel, x, t));
    return out;
}

VectorField make_drift_field(const EsParams& p, const CostMap& map) {
    return [p, map](const Vector& x, double t) { return drift_field(p, map, x, t); };
}

VectorField make_cos_field(const EsParams& p, const CostMap& map, std::size_t channel) {
    return [p, map, channel](const Vector& x, double t) { return cos_field(p, map, channel, x, t); };
}

VectorField make_sin_field(const EsParams& p, const CostMap& map, std::size_t channel) {
    return [p, map, channel](const Vector& x, double t) { return sin_field(p, map, channel, x, t); };
}

Vector bracket_closed_form(const EsParams& p, const CostMap& map, std::size_t channel,
                           const Vector& x, double t) {
    const Frame f = frame_at(p, map, t);
    const Vector g = scaled_cost_gradient(p, map, theta_part(x, p.dim()), f, t);
    Vector out(p.dim() + 1, 0.0);
    out[channel] = p.k()[channel] * p.alpha()[channel] * g[channel];
    return out;
}

Vector numeric_bracket_drift(const EsParams& p, const CostMap& map, const Vector& x, double t,
                             double h) {
    Vector out(x.size(), 0.0);
    for (std::size_t i = 0; i < p.dim(); ++i) {
        const Vector b = lie_bracket(make_cos_field(p, map, i), make_sin_field(p, map, i), x, t, h);
        for (std::size_t j = 0; j < out.size(); ++j) out[j] -= 0.5 * b[j];
    }
    return out;
}

StateRate averaged_rhs(const EsParams& p, const CostMap& map, const TransformedState& s, double t) {
    const std::size_t n = p.dim();
    if (s.theta_f.size() != n) throw ArgumentError("averaged_rhs: state dimension mismatch");
    const Frame f = frame_at(p, map, t);
    const Vector g = scaled_cost_gradient(p, map, s.theta_f, f, t);
    StateRate out;
    out.theta_dot.resize(n);
    for (std::size_t i = 0; i < n; ++i)
        out.theta_dot[i] = f.rate * s.theta_f[i] - 0.5 * p.k()[i] * p.alpha()[i] * g[i];
    const double jf = transformed_cost(map, s.theta_f, f.xi);
    out.eta_dot = (f.m * f.rate - p.omega_h()) * s.eta_f + p.omega_h() * f.scale * jf;
    return out;
}

StateRate averaged_asymptotic_rhs(const EsParams& p, const CostMap& map, const TransformedState& s,
                                  double t) {
    if (!p.schedule().is_asymptotic())
        throw ArgumentError("averaged_asymptotic_rhs: schedule is not asymptotic");
    return averaged_rhs(p, map, s, t);
}

StateRate averaged_exponential_rhs(const EsParams& p, const CostMap& map,
                                   const TransformedState& s, double t) {
    if (!p.schedule().is_exponential())
        throw ArgumentError("averaged_exponential_rhs: schedule is not exponential");
    if (map.kappa != 1) {
        std::ostringstream os;
        os << "averaged_exponential_rhs: exponential law needs kappa = 1, map '" << map.name
           << "' has kappa = " << map.kappa;
        throw CapabilityError(os.str());
    }
    return averaged_rhs(p, map, s, t);
}

Rhs averaged_system(const EsParams& p, const CostMap& map) {
    if (!map.has_optimum())
        throw CapabilityError("averaged_system: map '" + map.name + "' has no known optimum");
    return [p, map](double t, const Vector& x) {
        TransformedState s{Vector(x.begin(), x.end() - 1), x.back()};
        const auto r = averaged_rhs(p, map, s, t);
        return stack(r.theta_dot, r.eta_dot);
    };
}

double transformed_averaging_gap(const EsParams& p, const CostMap& map,
                                 const TransformedState& start, double horizon, double dt) {
    const double t0 = p.schedule().t0;
    const Vector x0 = stack(start.theta_f, start.eta_f);
    const Solution full = integrate(transformed_system(p, map), x0, t0, t0 + horizon, dt, 1,
                                    p.max_frequency());
    const Solution avg = integrate(averaged_system(p, map), x0, t0, t0 + horizon, dt, 1);
    if (!full.ok() || !avg.ok() || full.size() != avg.size())
        return std::numeric_limits<double>::quiet_NaN();
    double gap = 0.0;
    for (std::size_t k = 0; k < full.size(); ++k)
        for (std::size_t j = 0; j < x0.size(); ++j)
            gap = std::max(gap, std::abs(full.states[k][j] - avg.states[k][j]));
    return gap;
}

}  // namespace ueslab
