#pragma once

#include <functional>

#include "ueslab/controllers.hpp"
#include "ueslab/sim.hpp"
#include "ueslab/types.hpp"

namespace ueslab {

/// Vector field f(x, t), argument order as in the bracket definition.
using VectorField = std::function<Vector(const Vector&, double)>;

inline constexpr double kBracketStep = 1e-6;

/// Central-difference Jacobian of f at (x, t); column j uses step h * max(1, |x_j|).
Matrix jacobian_fd(const VectorField& f, const Vector& x, double t, double h = kBracketStep);

/// [f, g](x, t) = (dg/dx) f - (df/dx) g, Jacobians by central differences.
/// Throws NumericError if a field returns a non-finite value.
Vector lie_bracket(const VectorField& f, const VectorField& g, const Vector& x, double t,
                   double h = kBracketStep);

// The transformed loop written as a control-affine system on x = [theta_f, eta_f]:
//   x' = b0(x, t) + sum_i b_c,i(x, t) sqrt(w_i) cos(w_i t) - b_s,i(x, t) sqrt(w_i) sin(w_i t)
// with rho_i = k_i phi(t) (J_f - eta_f / xi^m),
//   b_c,i = [sqrt(alpha_i) e_i cos(rho_i); 0],  b_s,i = [sqrt(alpha_i) e_i sin(rho_i); 0].
// All of these need a map with known optimum.

Vector drift_field(const EsParams& p, const CostMap& map, const Vector& x, double t);
Vector cos_field(const EsParams& p, const CostMap& map, std::size_t channel, const Vector& x,
                 double t);
Vector sin_field(const EsParams& p, const CostMap& map, std::size_t channel, const Vector& x,
                 double t);

VectorField make_drift_field(const EsParams& p, const CostMap& map);
VectorField make_cos_field(const EsParams& p, const CostMap& map, std::size_t channel);
VectorField make_sin_field(const EsParams& p, const CostMap& map, std::size_t channel);

/// Closed form of [b_c,i, b_s,i]: k_i alpha_i phi(t) e_i dJ_f/dtheta_f,i in the
/// theta_f block, exactly 0 in the eta_f block.
Vector bracket_closed_form(const EsParams& p, const CostMap& map, std::size_t channel,
                           const Vector& x, double t);

/// -1/2 sum_i [b_c,i, b_s,i] evaluated with lie_bracket.
Vector numeric_bracket_drift(const EsParams& p, const CostMap& map, const Vector& x, double t,
                             double h = kBracketStep);

/// Lie-bracket averaged transformed loop, valid for any schedule (for the
/// nominal one the transformation is a plain shift by the optimum):
///   theta_f' = rate(t) theta_f - sum_i (k_i alpha_i / 2) phi(t) e_i dJ_f/dtheta_f,i
///   eta_f'   = (m rate(t) - omega_h) eta_f + omega_h xi^m J_f
StateRate averaged_rhs(const EsParams& p, const CostMap& map, const TransformedState& s, double t);

/// Averaged system of the asymptotic law. ArgumentError unless the schedule is asymptotic.
StateRate averaged_asymptotic_rhs(const EsParams& p, const CostMap& map, const TransformedState& s,
                                  double t);

/// Averaged system of the exponential law. ArgumentError unless the schedule is
/// exponential; CapabilityError unless kappa = 1.
StateRate averaged_exponential_rhs(const EsParams& p, const CostMap& map,
                                   const TransformedState& s, double t);

Rhs averaged_system(const EsParams& p, const CostMap& map);

/// Full transformed loop vs its averaged system from the same initial state on
/// a shared grid. Returns sup over samples of the max-norm difference of the
/// whole [theta_f, eta_f] state. NaN if either run diverged.
double transformed_averaging_gap(const EsParams& p, const CostMap& map,
                                 const TransformedState& start, double horizon, double dt);

}  // namespace ueslab
