#pragma once

#include "ueslab/maps.hpp"
#include "ueslab/schedules.hpp"
#include "ueslab/types.hpp"

namespace ueslab {

/// Unvalidated controller settings, as read from a config file.
struct EsDesign {
    Vector alpha;      // per-channel dither amplitude
    Vector k;          // per-channel gain
    Vector omega_hat;  // per-channel frequency ratio; empty -> default_frequency_ratios
    double omega = 5.0;
    double omega_h = 3.0;
    Schedule schedule;
};

/// {1, 1.5, 2.25, ...}: pairwise distinct, geometric so that sums and
/// differences of low-order channel frequencies do not coincide.
Vector default_frequency_ratios(std::size_t n);

/// Controller parameters that passed every design condition for a given map.
class EsParams {
public:
    /// Validates `design` against `map`. Throws AssemblyError when
    ///  - any alpha_i, k_i, omega_hat_i, omega or omega_h is not positive,
    ///  - the per-channel vectors do not have length map.dim,
    ///  - the frequency ratios are not pairwise distinct,
    ///  - asymptotic schedule and not v > 2 kappa - r >= 0,
    ///  - exponential schedule and not omega_h > 2 lambda, or (kappa = 1 with
    ///    known bounds) k_i alpha_i <= 2 lambda a2 (2 a2 + b2) / (a1 b1^2).
    static EsParams assemble(EsDesign design, const CostMap& map);

    [[nodiscard]] std::size_t dim() const noexcept { return d_.alpha.size(); }
    [[nodiscard]] const Vector& alpha() const noexcept { return d_.alpha; }
    [[nodiscard]] const Vector& k() const noexcept { return d_.k; }
    [[nodiscard]] const Vector& omega_hat() const noexcept { return d_.omega_hat; }
    [[nodiscard]] double omega() const noexcept { return d_.omega; }
    [[nodiscard]] double omega_h() const noexcept { return d_.omega_h; }
    [[nodiscard]] const Schedule& schedule() const noexcept { return d_.schedule; }
    [[nodiscard]] const EsDesign& design() const noexcept { return d_; }

    /// omega * omega_hat_i.
    [[nodiscard]] double channel_frequency(std::size_t i) const { return d_.omega * d_.omega_hat[i]; }
    [[nodiscard]] double max_frequency() const;

private:
    explicit EsParams(EsDesign d) : d_(std::move(d)) {}
    EsDesign d_;
};

struct EsState {
    Vector theta;
    double eta = 0.0;
};

/// theta_f = xi (theta - th*), eta_f = xi^m (eta - J*), see eta_scale_exponent.
struct TransformedState {
    Vector theta_f;
    double eta_f = 0.0;
};

struct StateRate {
    Vector theta_dot;
    double eta_dot = 0.0;
};

/// k * phi(t) * mismatch, computed in the log domain for tiny mismatches so a
/// huge phi never meets an underflowing mismatch as 0 * inf.
double phase_shift(double gain, const Schedule& s, double t, double mismatch);

/// Closed loop of the unbiased ES law:
///   theta_i' = nu(t) sqrt(alpha_i w_i) cos(w_i t + k_i phi(t) (J(theta) - eta))
///   eta'     = -omega_h eta + omega_h J(theta)
/// With a nominal schedule this is the constant-gain baseline.
StateRate es_rhs(const EsParams& p, const CostMap& map, const EsState& s, double t);

/// The same loop written in transformed coordinates. Needs the map's optimum
/// and a non-nominal schedule (CapabilityError / ArgumentError otherwise).
StateRate transformed_rhs(const EsParams& p, const CostMap& map, const TransformedState& s,
                          double t);

/// J_f(theta_f, xi) = J(theta_f / xi + th*) - J(th*), via the map's excess.
double transformed_cost(const CostMap& map, const Vector& theta_f, double xi_value);

/// Stacked-state adapters ([theta..., eta]) for the integrator.
using StackedRhs = Rhs;
StackedRhs es_system(const EsParams& p, const CostMap& map);
StackedRhs transformed_system(const EsParams& p, const CostMap& map);

Vector stack(const Vector& theta, double eta);

/// Original -> transformed coordinates at time t, and back.
TransformedState to_transformed(const EsParams& p, const CostMap& map, const EsState& s, double t);
EsState from_transformed(const EsParams& p, const CostMap& map, const TransformedState& s, double t);

}  // namespace ueslab
