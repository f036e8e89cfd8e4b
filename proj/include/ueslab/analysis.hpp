#pragma once

#include <string>
#include <vector>

#include "ueslab/maps.hpp"
#include "ueslab/schedules.hpp"
#include "ueslab/sim.hpp"

namespace ueslab {

struct Window {
    double start = 0.0;
    double end = 0.0;
};

enum class RateModel { PowerLaw, Exponential };

std::string to_string(RateModel m);

struct RateFit {
    RateModel model = RateModel::PowerLaw;
    double estimate = 0.0;  // exponent (power law) or rate (exponential)
    double residual = 0.0;  // RMS of the fit in the log domain
    Window window;
    std::size_t points = 0;
};

/// Peaks below this are treated as rounding noise and dropped from envelopes.
inline constexpr double kNoiseFloor = 1e-13;

struct Envelope {
    std::vector<double> times;
    std::vector<double> values;
};

/// Strict local maxima (3-sample stencil) of |signal| with time in `w`. A
/// signal with no strict interior maximum in the window (monotone or constant)
/// is its own envelope. Peaks under kNoiseFloor are dropped.
/// Throws WindowTooLate if that leaves fewer than 10 points, ArgumentError if
/// there were fewer than 10 to begin with.
Envelope peak_envelope(const std::vector<double>& times, const std::vector<double>& signal, Window w);

/// log(envelope) ~ c - estimate * log(1 + beta (t - t0)).
RateFit fit_power_rate(const std::vector<double>& times, const std::vector<double>& signal,
                       double beta, double t0, Window w);

/// log(envelope) ~ c - estimate * t.
RateFit fit_exp_rate(const std::vector<double>& times, const std::vector<double>& signal, Window w);

/// |theta(t) - th*| per sample.
std::vector<double> deviation(const Trajectory& traj, const Vector& theta_star);

/// y(t) - J(th*) per sample, through the map's centred evaluation.
std::vector<double> output_excess(const Trajectory& traj, const CostMap& map);

RateFit fit_power_rate(const Trajectory& traj, const Vector& theta_star, double beta, double t0,
                       Window w);
RateFit fit_exp_rate(const Trajectory& traj, const Vector& theta_star, Window w);

/// V(t) = xi^m(t) J_f(theta_f(t), xi(t)) along a transformed-state solution
/// (states stacked as [theta_f, eta_f]); m as in eta_scale_exponent.
std::vector<double> lyapunov_trace(const CostMap& map, const Solution& transformed,
                                   const Schedule& schedule);

struct Oscillation {
    Vector mean;
    double amplitude = 0.0;  // largest half peak-to-peak excursion over components
};

/// Oscillation over the samples with t >= t_end - tail_fraction * (t_end - t_start).
Oscillation oscillation_amplitude(const Trajectory& traj, double tail_fraction);

/// Oscillation over the samples with t in `w`. Needs at least 20 samples.
Oscillation oscillation_in_window(const Trajectory& traj, Window w);

}  // namespace ueslab
