#include "ueslab/analysis.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <sstream>

#include "ueslab/controllers.hpp"
#include "ueslab/errors.hpp"

namespace ueslab {

std::string to_string(RateModel m) {
    return m == RateModel::PowerLaw ? "power_law" : "exponential";
}

namespace {

constexpr std::size_t kMinEnvelope = 10;

bool in_window(double t, Window w) { return t >= w.start && t <= w.end; }

void check_series(const std::vector<double>& times, const std::vector<double>& signal, Window w) {
    if (times.size() != signal.size())
        throw ArgumentError("rate fit: times and signal differ in length");
    if (!(w.end > w.start)) throw ArgumentError("rate fit: window end must exceed start");
}

// slope and RMS residual of the least-squares line through (x, y)
std::pair<double, double> least_squares(const std::vector<double>& x, const std::vector<double>& y) {
    const auto n = static_cast<double>(x.size());
    double mx = 0, my = 0;
    for (std::size_t i = 0; i < x.size(); ++i) {
        mx += x[i];
        my += y[i];
    }
    mx /= n;
    my /= n;
    double sxx = 0, sxy = 0;
    for (std::size_t i = 0; i < x.size(); ++i) {
        sxx += (x[i] - mx) * (x[i] - mx);
        sxy += (x[i] - mx) * (y[i] - my);
    }
    if (!(sxx > 0)) throw ArgumentError("rate fit: regressor is constant over the window");
    const double slope = sxy / sxx;
    const double icpt = my - slope * mx;
    double ss = 0;
    for (std::size_t i = 0; i < x.size(); ++i) {
        const double r = y[i] - (icpt + slope * x[i]);
        ss += r * r;
    }
    return {slope, std::sqrt(ss / n)};
}

template <class Regressor>
RateFit fit_envelope(const std::vector<double>& times, const std::vector<double>& signal, Window w,
                     RateModel model, Regressor regressor) {
    check_series(times, signal, w);
    const Envelope env = peak_envelope(times, signal, w);
    std::vector<double> x, y;
    x.reserve(env.times.size());
    y.reserve(env.times.size());
    for (std::size_t i = 0; i < env.times.size(); ++i) {
        x.push_back(regressor(env.times[i]));
        y.push_back(std::log(env.values[i]));
    }
    const auto [slope, residual] = least_squares(x, y);
    RateFit fit;
    fit.model = model;
    fit.estimate = -slope;
    fit.residual = residual;
    fit.window = w;
    fit.points = env.times.size();
    return fit;
}

}  // namespace

Envelope peak_envelope(const std::vector<double>& times, const std::vector<double>& signal, Window w) {
    check_series(times, signal, w);
    const std::size_t n = signal.size();
    Envelope peaks;
    for (std::size_t i = 1; i + 1 < n; ++i) {
        if (!in_window(times[i], w)) continue;
        const double a = std::abs(signal[i - 1]);
        const double b = std::abs(signal[i]);
        const double c = std::abs(signal[i + 1]);
        if (b > a && b > c) {
            peaks.times.push_back(times[i]);
            peaks.values.push_back(b);
        }
    }
    if (peaks.times.empty()) {
        for (std::size_t i = 0; i < n; ++i)
            if (in_window(times[i], w)) {
                peaks.times.push_back(times[i]);
                peaks.values.push_back(std::abs(signal[i]));
            }
    }
    const std::size_t before = peaks.times.size();
    Envelope kept;
    for (std::size_t i = 0; i < before; ++i)
        if (peaks.values[i] >= kNoiseFloor) {
            kept.times.push_back(peaks.times[i]);
            kept.values.push_back(peaks.values[i]);
        }
    if (kept.times.size() < kMinEnvelope) {
        std::ostringstream os;
        os << "envelope over [" << w.start << ", " << w.end << "] has " << kept.times.size()
           << " usable points (need " << kMinEnvelope << ")";
        if (kept.times.size() < before) {
            os << "; " << before - kept.times.size() << " peaks lie under the " << kNoiseFloor
               << " noise floor, move the window earlier";
            throw WindowTooLate(os.str());
        }
        throw ArgumentError(os.str());
    }
    return kept;
}

RateFit fit_power_rate(const std::vector<double>& times, const std::vector<double>& signal,
                       double beta, double t0, Window w) {
    if (!(beta > 0)) throw ArgumentError("fit_power_rate: beta must be > 0");
    return fit_envelope(times, signal, w, RateModel::PowerLaw,
                        [beta, t0](double t) { return std::log1p(beta * (t - t0)); });
}

RateFit fit_exp_rate(const std::vector<double>& times, const std::vector<double>& signal, Window w) {
    return fit_envelope(times, signal, w, RateModel::Exponential, [](double t) { return t; });
}

std::vector<double> deviation(const Trajectory& traj, const Vector& theta_star) {
    std::vector<double> out;
    out.reserve(traj.size());
    for (const auto& th : traj.theta) {
        if (th.size() != theta_star.size()) throw ArgumentError("deviation: dimension mismatch");
        double s = 0.0;
        for (std::size_t i = 0; i < th.size(); ++i) s += (th[i] - theta_star[i]) * (th[i] - theta_star[i]);
        out.push_back(std::sqrt(s));
    }
    return out;
}

std::vector<double> output_excess(const Trajectory& traj, const CostMap& map) {
    std::vector<double> out;
    out.reserve(traj.size());
    for (const auto& th : traj.theta) out.push_back(map.centered(th));
    return out;
}

RateFit fit_power_rate(const Trajectory& traj, const Vector& theta_star, double beta, double t0,
                       Window w) {
    return fit_power_rate(traj.times, deviation(traj, theta_star), beta, t0, w);
}

RateFit fit_exp_rate(const Trajectory& traj, const Vector& theta_star, Window w) {
    return fit_exp_rate(traj.times, deviation(traj, theta_star), w);
}

std::vector<double> lyapunov_trace(const CostMap& map, const Solution& transformed,
                                   const Schedule& schedule) {
    if (!map.has_optimum())
        throw CapabilityError("lyapunov_trace: map '" + map.name + "' has no known optimum");
    if (schedule.is_nominal()) throw ArgumentError("lyapunov_trace: schedule must not be nominal");
    const double m = eta_scale_exponent(schedule, map.kappa);
    std::vector<double> v;
    v.reserve(transformed.size());
    for (std::size_t k = 0; k < transformed.size(); ++k) {
        const double t = transformed.times[k];
        const Vector& x = transformed.states[k];
        const Vector theta_f(x.begin(), x.begin() + static_cast<std::ptrdiff_t>(map.dim));
        const double jf = transformed_cost(map, theta_f, xi(schedule, t));
        v.push_back(std::exp(m * log_xi(schedule, t)) * jf);
    }
    return v;
}

Oscillation oscillation_in_window(const Trajectory& traj, Window w) {
    const std::size_t n = traj.dim();
    std::vector<std::size_t> idx;
    for (std::size_t k = 0; k < traj.size(); ++k)
        if (in_window(traj.times[k], w)) idx.push_back(k);
    if (idx.size() < 20) {
        std::ostringstream os;
        os << "oscillation: window [" << w.start << ", " << w.end << "] holds " << idx.size()
           << " samples (need 20)";
        throw ArgumentError(os.str());
    }
    Oscillation out;
    out.mean.assign(n, 0.0);
    Vector lo(n, std::numeric_limits<double>::infinity());
    Vector hi(n, -std::numeric_limits<double>::infinity());
    for (std::size_t k : idx)
        for (std::size_t i = 0; i < n; ++i) {
            const double v = traj.theta[k][i];
            out.mean[i] += v;
            lo[i] = std::min(lo[i], v);
            hi[i] = std::max(hi[i], v);
        }
    for (std::size_t i = 0; i < n; ++i) {
        out.mean[i] /= static_cast<double>(idx.size());
        out.amplitude = std::max(out.amplitude, 0.5 * (hi[i] - lo[i]));
    }
    return out;
}

Oscillation oscillation_amplitude(const Trajectory& traj, double tail_fraction) {
    if (!(tail_fraction > 0 && tail_fraction < 1))
        throw ArgumentError("oscillation_amplitude: tail_fraction must lie in (0, 1)");
    if (traj.size() < 2) throw ArgumentError("oscillation_amplitude: trajectory too short");
    const double ts = traj.times.front();
    const double te = traj.times.back();
    return oscillation_in_window(traj, Window{te - tail_fraction * (te - ts), te});
}

}  // namespace ueslab
