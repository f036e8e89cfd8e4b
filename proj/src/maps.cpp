#include "ueslab/maps.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <random>
#include <sstream>

#include <Eigen/Eigenvalues>

#include "ueslab/errors.hpp"

namespace ueslab {

double norm(const Vector& v) {
    double s = 0.0;
    for (double x : v) s += x * x;
    return std::sqrt(s);
}

double max_abs(const Vector& v) {
    double m = 0.0;
    for (double x : v) m = std::max(m, std::abs(x));
    return m;
}

bool PowerBounds::valid() const noexcept {
    return a1 > 0 && b1 > 0 && c1 > 0 && a1 <= a2 && b1 <= b2 && c1 <= c2;
}

namespace {

void check_dim(const CostMap& map, const Vector& theta) {
    if (theta.size() != map.dim) {
        std::ostringstream os;
        os << "cost map '" << map.name << "' expects dimension " << map.dim << ", got "
           << theta.size();
        throw ArgumentError(os.str());
    }
}

void require_optimum(const CostMap& map, const char* what) {
    if (!map.has_optimum())
        throw CapabilityError(std::string(what) + " needs a known optimum on map '" + map.name +
                              "'");
}

double fd_step(double h, double x) { return h * std::max(1.0, std::abs(x)); }

}  // namespace

double eval(const CostMap& map, const Vector& theta) {
    check_dim(map, theta);
    return map.eval_fn(theta);
}

double CostMap::excess(const Vector& displacement) const {
    require_optimum(*this, "excess");
    if (excess_fn) return (*excess_fn)(displacement);
    Vector theta = *optimum;
    for (std::size_t i = 0; i < dim; ++i) theta[i] += displacement[i];
    return eval_fn(theta) - *optimal_value;
}

Vector CostMap::excess_gradient(const Vector& displacement) const {
    require_optimum(*this, "excess_gradient");
    if (excess_grad_fn) return (*excess_grad_fn)(displacement);
    Vector theta = *optimum;
    for (std::size_t i = 0; i < dim; ++i) theta[i] += displacement[i];
    return gradient(*this, theta);
}

double CostMap::centered(const Vector& theta) const {
    require_optimum(*this, "centered");
    check_dim(*this, theta);
    if (!excess_fn) return eval_fn(theta) - *optimal_value;
    Vector d(dim);
    for (std::size_t i = 0; i < dim; ++i) d[i] = theta[i] - (*optimum)[i];
    return (*excess_fn)(d);
}

Vector gradient(const CostMap& map, const Vector& theta) {
    check_dim(map, theta);
    if (map.grad_fn) return (*map.grad_fn)(theta);
    return grad_fd(map, theta);
}

Matrix hessian(const CostMap& map, const Vector& theta) {
    check_dim(map, theta);
    if (map.hess_fn) return (*map.hess_fn)(theta);
    return hess_fd(map, theta);
}

Vector grad_fd(const CostMap& map, const Vector& theta, double h) {
    check_dim(map, theta);
    if (!(h > 0)) throw ArgumentError("grad_fd: step must be positive");
    Vector g(map.dim);
    Vector x = theta;
    for (std::size_t i = 0; i < map.dim; ++i) {
        const double hi = fd_step(h, theta[i]);
        x[i] = theta[i] + hi;
        const double fp = map.eval_fn(x);
        x[i] = theta[i] - hi;
        const double fm = map.eval_fn(x);
        x[i] = theta[i];
        g[i] = (fp - fm) / (2.0 * hi);
    }
    return g;
}

Matrix hess_fd(const CostMap& map, const Vector& theta, double h) {
    check_dim(map, theta);
    if (!(h > 0)) throw ArgumentError("hess_fd: step must be positive");
    const std::size_t n = map.dim;
    Matrix H(n);
    Vector x = theta;
    const double f0 = map.eval_fn(theta);
    for (std::size_t i = 0; i < n; ++i) {
        const double hi = fd_step(h, theta[i]);
        x[i] = theta[i] + hi;
        const double fp = map.eval_fn(x);
        x[i] = theta[i] - hi;
        const double fm = map.eval_fn(x);
        x[i] = theta[i];
        H(i, i) = (fp - 2.0 * f0 + fm) / (hi * hi);
        for (std::size_t j = 0; j < i; ++j) {
            const double hj = fd_step(h, theta[j]);
            auto f_at = [&](double si, double sj) {
                x[i] = theta[i] + si * hi;
                x[j] = theta[j] + sj * hj;
                const double f = map.eval_fn(x);
                x[i] = theta[i];
                x[j] = theta[j];
                return f;
            };
            const double v =
                (f_at(1, 1) - f_at(1, -1) - f_at(-1, 1) + f_at(-1, -1)) / (4.0 * hi * hj);
            H(i, j) = v;
            H(j, i) = v;
        }
    }
    return H;
}

double spectral_norm(const Matrix& m) {
    if (m.n == 1) return std::abs(m.data[0]);
    Eigen::MatrixXd e(m.n, m.n);
    for (std::size_t i = 0; i < m.n; ++i)
        for (std::size_t j = 0; j < m.n; ++j) e(i, j) = 0.5 * (m(i, j) + m(j, i));
    Eigen::SelfAdjointEigenSolver<Eigen::MatrixXd> solver(e, Eigen::EigenvaluesOnly);
    return solver.eigenvalues().cwiseAbs().maxCoeff();
}

namespace {

struct BoundSample {
    double a = 0, b = 0, c = 0;
    bool finite = true;
};

std::vector<Vector> sample_ball(const CostMap& map, double radius, std::size_t samples,
                                std::uint64_t seed) {
    std::mt19937_64 rng(seed);
    std::normal_distribution<double> normal(0.0, 1.0);
    std::uniform_real_distribution<double> unit(0.0, 1.0);
    const std::size_t n = map.dim;
    std::vector<Vector> out;
    out.reserve(samples);
    while (out.size() < samples) {
        Vector dir(n);
        for (auto& d : dir) d = normal(rng);
        const double len = norm(dir);
        const double rho = radius * std::pow(unit(rng), 1.0 / static_cast<double>(n));
        if (len == 0.0 || rho == 0.0) continue;
        for (auto& d : dir) d *= rho / len;
        out.push_back(std::move(dir));
    }
    return out;
}

BoundSample bound_ratios(const CostMap& map, const Vector& d) {
    const double dist = norm(d);
    const int k2 = 2 * map.kappa;
    Vector theta = *map.optimum;
    for (std::size_t i = 0; i < map.dim; ++i) theta[i] += d[i];
    BoundSample s;
    const double cost = map.eval_fn(theta);
    if (!std::isfinite(cost)) {
        s.finite = false;
        return s;
    }
    s.a = map.excess(d) / std::pow(dist, k2);
    s.b = norm(map.excess_gradient(d)) / std::pow(dist, k2 - 1);
    s.c = spectral_norm(hessian(map, theta)) / std::pow(dist, k2 - 2);
    s.finite = std::isfinite(s.a) && std::isfinite(s.b) && std::isfinite(s.c);
    return s;
}

PowerBounds reduce_bounds(const CostMap& map, const std::vector<Vector>& points,
                          const std::vector<BoundSample>& ratios) {
    constexpr double inf = std::numeric_limits<double>::infinity();
    PowerBounds pb{inf, -inf, inf, -inf, inf, -inf};
    for (std::size_t s = 0; s < ratios.size(); ++s) {
        const auto& r = ratios[s];
        if (!r.finite) {
            std::ostringstream os;
            os << "verify_power_bounds: non-finite cost or ratio on map '" << map.name
               << "' at sample " << s;
            throw NumericError(os.str());
        }
        pb.a1 = std::min(pb.a1, r.a);
        pb.a2 = std::max(pb.a2, r.a);
        pb.b1 = std::min(pb.b1, r.b);
        pb.b2 = std::max(pb.b2, r.b);
        pb.c1 = std::min(pb.c1, r.c);
        pb.c2 = std::max(pb.c2, r.c);
    }
    auto report = [&](const char* which, double value, auto member) {
        std::size_t at = 0;
        for (std::size_t s = 0; s < ratios.size(); ++s)
            if (ratios[s].*member == value) {
                at = s;
                break;
            }
        std::ostringstream os;
        os << "power-growth bound violated on map '" << map.name << "' (kappa=" << map.kappa
           << "): sampled " << which << " = " << value << " <= 0 at displacement (";
        for (std::size_t i = 0; i < points[at].size(); ++i)
            os << (i ? ", " : "") << points[at][i];
        os << ")";
        throw AssumptionViolation(os.str());
    };
    if (!(pb.a1 > 0)) report("a1", pb.a1, &BoundSample::a);
    if (!(pb.b1 > 0)) report("b1", pb.b1, &BoundSample::b);
    if (!(pb.c1 > 0)) report("c1", pb.c1, &BoundSample::c);
    return pb;
}

void check_bound_args(const CostMap& map, double radius, std::size_t samples) {
    require_optimum(map, "verify_power_bounds");
    if (!(radius > 0)) throw ArgumentError("verify_power_bounds: radius must be positive");
    if (samples < 2) throw ArgumentError("verify_power_bounds: need at least 2 samples");
}

}  // namespace

PowerBounds verify_power_bounds(const CostMap& map, double radius, std::size_t samples,
                                std::uint64_t seed) {
    check_bound_args(map, radius, samples);
    const auto points = sample_ball(map, radius, samples, seed);
    std::vector<BoundSample> ratios(points.size());
    const auto count = static_cast<std::ptrdiff_t>(points.size());
#pragma omp parallel for schedule(static)
    for (std::ptrdiff_t s = 0; s < count; ++s) {
        try {
            ratios[s] = bound_ratios(map, points[s]);
        } catch (...) {
            ratios[s].finite = false;
        }
    }
    return reduce_bounds(map, points, ratios);
}

PowerBounds verify_power_bounds_serial(const CostMap& map, double radius, std::size_t samples,
                                       std::uint64_t seed) {
    check_bound_args(map, radius, samples);
    const auto points = sample_ball(map, radius, samples, seed);
    std::vector<BoundSample> ratios;
    ratios.reserve(points.size());
    for (const auto& p : points) ratios.push_back(bound_ratios(map, p));
    return reduce_bounds(map, points, ratios);
}

namespace maps {

CostMap quartic_paper() {
    CostMap m;
    m.name = "quartic_paper";
    m.dim = 1;
    m.kappa = 2;
    m.eval_fn = [](const Vector& th) {
        const double d = th[0] - 2.0;
        return 1.0 + d * d * d * d;
    };
    m.grad_fn = [](const Vector& th) {
        const double d = th[0] - 2.0;
        return Vector{4.0 * d * d * d};
    };
    m.hess_fn = [](const Vector& th) {
        const double d = th[0] - 2.0;
        Matrix h(1);
        h(0, 0) = 12.0 * d * d;
        return h;
    };
    m.optimum = Vector{2.0};
    m.optimal_value = 1.0;
    m.bounds = PowerBounds{1.0, 1.0, 4.0, 4.0, 12.0, 12.0};
    m.excess_fn = [](const Vector& d) { return d[0] * d[0] * d[0] * d[0]; };
    m.excess_grad_fn = [](const Vector& d) { return Vector{4.0 * d[0] * d[0] * d[0]}; };
    return m;
}

CostMap quadratic(Vector q, Vector theta_star) {
    if (q.empty()) throw ArgumentError("quadratic map: q must be non-empty");
    if (q.size() != theta_star.size())
        throw ArgumentError("quadratic map: q and theta_star must have equal length");
    for (double qi : q)
        if (!(qi > 0)) throw ArgumentError("quadratic map: every q_i must be positive");

    CostMap m;
    m.name = "quadratic";
    m.dim = q.size();
    m.kappa = 1;
    m.eval_fn = [q, theta_star](const Vector& th) {
        double s = 0.0;
        for (std::size_t i = 0; i < q.size(); ++i) {
            const double d = th[i] - theta_star[i];
            s += q[i] * d * d;
        }
        return s;
    };
    m.grad_fn = [q, theta_star](const Vector& th) {
        Vector g(q.size());
        for (std::size_t i = 0; i < q.size(); ++i) g[i] = 2.0 * q[i] * (th[i] - theta_star[i]);
        return g;
    };
    m.hess_fn = [q](const Vector&) {
        Matrix h(q.size());
        for (std::size_t i = 0; i < q.size(); ++i) h(i, i) = 2.0 * q[i];
        return h;
    };
    m.excess_fn = [q](const Vector& d) {
        double s = 0.0;
        for (std::size_t i = 0; i < q.size(); ++i) s += q[i] * d[i] * d[i];
        return s;
    };
    m.excess_grad_fn = [q](const Vector& d) {
        Vector g(q.size());
        for (std::size_t i = 0; i < q.size(); ++i) g[i] = 2.0 * q[i] * d[i];
        return g;
    };
    const auto [qmin, qmax] = std::minmax_element(q.begin(), q.end());
    m.bounds = PowerBounds{*qmin, *qmax, 2.0 * *qmin, 2.0 * *qmax, 2.0 * *qmax, 2.0 * *qmax};
    m.optimum = std::move(theta_star);
    m.optimal_value = 0.0;
    return m;
}

CostMap by_name(const std::string& name, const Vector& q, const Vector& theta_star) {
    if (name == "quartic_paper") return quartic_paper();
    if (name == "quadratic") {
        if (q.empty()) throw ArgumentError("quadratic map needs map.q");
        const Vector star = theta_star.empty() ? Vector(q.size(), 0.0) : theta_star;
        return quadratic(q, star);
    }
    throw ArgumentError("unknown cost map '" + name + "' (known: quartic_paper, quadratic)");
}

}  // namespace maps

}  // namespace ueslab
