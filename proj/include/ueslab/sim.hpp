#pragma once

#include <map>
#include <optional>
#include <string>
#include <vector>

#include "ueslab/controllers.hpp"
#include "ueslab/types.hpp"

namespace ueslab {

/// Marker left on a partial run whose state stopped being finite.
struct Divergence {
    double last_good_time = 0.0;
    std::string message;
};

/// Raw integrator output.
struct Solution {
    std::vector<double> times;
    std::vector<Vector> states;
    std::optional<Divergence> divergence;

    [[nodiscard]] bool ok() const noexcept { return !divergence.has_value(); }
    [[nodiscard]] std::size_t size() const noexcept { return times.size(); }
};

/// Fewest fixed steps per period of the fastest dither channel.
inline constexpr double kMinStepsPerPeriod = 40.0;

/// Classical fixed-step RK4 on [t0, t1]. Grid points are t0 + i*dt (the last
/// step is shortened to land on t1). Every `record_every`-th point is kept,
/// together with the first and last ones.
///
/// When `dither_frequency` is given, dt must not exceed 2*pi/(40*frequency).
/// A non-finite state or a numeric exception from `rhs` ends the run early; the
/// partial solution is returned with `divergence` set.
Solution integrate(const Rhs& rhs, Vector x0, double t0, double t1, double dt,
                   std::size_t record_every = 1,
                   std::optional<double> dither_frequency = std::nullopt);

/// Closed-loop ES run with y = J(theta) recorded alongside theta and eta.
struct Trajectory {
    std::vector<double> times;
    std::vector<Vector> theta;
    std::vector<double> eta;
    std::vector<double> y;
    std::map<std::string, std::string> meta;
    std::optional<Divergence> divergence;

    [[nodiscard]] std::size_t size() const noexcept { return times.size(); }
    [[nodiscard]] std::size_t dim() const noexcept { return theta.empty() ? 0 : theta[0].size(); }
};

Trajectory simulate(const EsParams& p, const CostMap& map, const EsState& start, double t1,
                    double dt, std::size_t record_every = 1);

/// Comparison ODE  V' = -eps1 s^-p V^q + eps2 s^-1 V,  s = 1 + beta (t - t0).
struct Lemma1Params {
    double beta = 0.1;
    double eps1 = 1.0;
    double eps2 = 1.0;
    double p = 0.5;
    double q = 1.5;
    double v0 = 1.0;
    double t0 = 0.0;

    /// eps1 (q-1)/beta / (eps2 (q-1)/beta + 1 - p).
    [[nodiscard]] double eps3() const;
    /// Throws ArgumentError unless beta, eps1, eps2, v0 > 0, p < 1, q > 1, t0 >= 0.
    void validate() const;
};

double lemma1_rhs(const Lemma1Params& p, double v, double t);

/// Closed-form solution of the comparison ODE.
double lemma1_solution(const Lemma1Params& p, double t);

struct LemmaCheckReport {
    double max_rel_error = 0.0;
    double worst_time = 0.0;
    std::size_t points = 0;
};

/// RK4 vs closed form on every grid point of [t0, t0 + horizon].
LemmaCheckReport lemma_check(const Lemma1Params& p, double horizon = 100.0, double dt = 1e-3);

}  // namespace ueslab
