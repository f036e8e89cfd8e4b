#pragma once

#include <cstdint>
#include <optional>
#include <string>
#include <vector>

#include "ueslab/controllers.hpp"

namespace ueslab {

/// Empirical check of practical stability over a grid of base frequencies.
/// The probe reports finite-sample evidence only; it cannot establish the
/// "for every epsilon there is an omega_0" quantifier order.
struct ProbeConfig {
    Vector omega_values;    // strictly ascending, > 0
    double epsilon = 0.1;   // target neighbourhood radius around th*
    double delta = 0.5;     // initial conditions drawn from this ball; epsilon <= delta
    double horizon = 20.0;
    std::size_t trials = 4;
    std::uint64_t seed = 1;
    double steps_per_period = 80.0;  // RK4 steps per period of the fastest channel

    /// Throws ArgumentError on an empty or non-ascending grid or bad radii.
    void validate() const;
};

struct ProbeTrial {
    double omega = 0.0;
    std::size_t trial = 0;
    std::optional<double> entry_time;  // first sample with |theta - th*| < epsilon
    bool stayed = false;               // every later sample stays inside
    double sup_gap = 0.0;              // sup |xi (theta - th*) - theta_bar_f|, NaN on failure
    std::optional<std::string> failure;
};

/// Initial theta for a trial: uniform in the open delta-ball around th*,
/// determined by (seed, trial) only, so every omega sees the same starts.
Vector probe_initial_theta(const CostMap& map, const ProbeConfig& cfg, std::size_t trial);

/// One closed-loop run from (theta0, eta0) at the given base frequency, compared
/// against the averaged system started from the matched transformed state.
ProbeTrial run_probe_trial(const EsParams& p, const CostMap& map, const ProbeConfig& cfg,
                           const Vector& theta0, double eta0);

/// All (omega, trial) pairs; trial starts use eta(t0) = J(theta0). Trials run on
/// OpenMP threads and the report is ordered by (omega, trial).
std::vector<ProbeTrial> practical_stability_probe(const EsParams& p, const CostMap& map,
                                                  const ProbeConfig& cfg);

/// Single-threaded reference for practical_stability_probe.
std::vector<ProbeTrial> practical_stability_probe_serial(const EsParams& p, const CostMap& map,
                                                         const ProbeConfig& cfg);

/// Largest sup_gap per omega, in grid order. NaN if any trial at that omega failed.
Vector max_gap_per_omega(const std::vector<ProbeTrial>& report, const ProbeConfig& cfg);

}  // namespace ueslab
