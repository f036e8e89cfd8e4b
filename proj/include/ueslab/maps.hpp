#pragma once

#include <cstdint>
#include <functional>
#include <optional>
#include <string>

#include "ueslab/types.hpp"

namespace ueslab {

/// Constants of the power-growth bounds around the optimizer:
///   a1 |d|^{2k}   <= J(th*+d) - J(th*) <= a2 |d|^{2k}
///   b1 |d|^{2k-1} <= |grad J|          <= b2 |d|^{2k-1}
///   c1 |d|^{2k-2} <= |hess J|          <= c2 |d|^{2k-2}
struct PowerBounds {
    double a1 = 0, a2 = 0;
    double b1 = 0, b2 = 0;
    double c1 = 0, c2 = 0;

    /// All positive and ordered.
    [[nodiscard]] bool valid() const noexcept;
};

/// Scalar cost J : R^n -> R. Closed-form derivatives and optimum are optional;
/// the optimum is only used by diagnostics and tests, never by a controller.
struct CostMap {
    using Scalar = std::function<double(const Vector&)>;
    using Gradient = std::function<Vector(const Vector&)>;
    using Hessian = std::function<Matrix(const Vector&)>;

    std::string name;
    std::size_t dim = 1;
    Scalar eval_fn;
    std::optional<Gradient> grad_fn;
    std::optional<Hessian> hess_fn;
    int kappa = 1;
    std::optional<Vector> optimum;
    std::optional<double> optimal_value;
    std::optional<PowerBounds> bounds;

    // Symbolic J(th* + d) - J(th*) and its gradient in d. Used instead of a
    // subtraction of two O(1) numbers when d is tiny.
    std::optional<Scalar> excess_fn;
    std::optional<Gradient> excess_grad_fn;

    [[nodiscard]] bool has_optimum() const noexcept {
        return optimum.has_value() && optimal_value.has_value();
    }

    /// J(th* + d) - J(th*). Throws CapabilityError without a known optimum.
    [[nodiscard]] double excess(const Vector& displacement) const;
    /// Gradient of J at th* + d.
    [[nodiscard]] Vector excess_gradient(const Vector& displacement) const;
    /// J(theta) - J(th*).
    [[nodiscard]] double centered(const Vector& theta) const;
};

/// J(theta). Throws ArgumentError on dimension mismatch.
double eval(const CostMap& map, const Vector& theta);

/// Closed-form gradient if the map has one, otherwise grad_fd.
Vector gradient(const CostMap& map, const Vector& theta);
Matrix hessian(const CostMap& map, const Vector& theta);

inline constexpr double kDefaultFdStep = 1e-5;

/// Central-difference gradient. The step for coordinate i is h * max(1, |theta_i|).
Vector grad_fd(const CostMap& map, const Vector& theta, double h = kDefaultFdStep);

/// Symmetric central-difference Hessian, same step scaling as grad_fd.
Matrix hess_fd(const CostMap& map, const Vector& theta, double h = 1e-4);

/// Induced 2-norm of a symmetric matrix (largest |eigenvalue|).
double spectral_norm(const Matrix& m);

/// Empirical witness of the power-growth constants on `samples` points drawn
/// uniformly from the ball of `radius` around the optimizer (centre excluded).
/// Sample evaluation runs on OpenMP threads; the result does not depend on the
/// thread count.
PowerBounds verify_power_bounds(const CostMap& map, double radius, std::size_t samples,
                                std::uint64_t seed);

/// Single-threaded reference for verify_power_bounds.
PowerBounds verify_power_bounds_serial(const CostMap& map, double radius, std::size_t samples,
                                       std::uint64_t seed);

namespace maps {

/// J = 1 + (theta - 2)^4, kappa = 2, n = 1.
CostMap quartic_paper();

/// J = sum_i q_i (theta_i - theta*_i)^2, kappa = 1.
CostMap quadratic(Vector q, Vector theta_star);

/// Resolve a built-in by config name ("quartic_paper", "quadratic").
CostMap by_name(const std::string& name, const Vector& q, const Vector& theta_star);

}  // namespace maps

}  // namespace ueslab
