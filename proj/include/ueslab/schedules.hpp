#pragma once

#include <variant>

namespace ueslab {

/// Time-varying dither amplitude nu(t) and phase gain phi(t).
///
///   kind         xi(t)                    nu(t)       phi(t)
///   Nominal      1                        1           1
///   Asymptotic   (1+beta(t-t0))^(1/v)     1/xi        xi^r
///   Exponential  exp(lambda(t-t0))        1/xi        xi^2
///
/// For the exponential kind xi is the exponential growth function usually
/// written zeta.
struct Schedule {
    struct Nominal {};
    struct Asymptotic {
        double beta = 0.1;
        double v = 1.0 / 3.0;
        double r = 4.0;
    };
    struct Exponential {
        double lambda = 0.1;
    };

    std::variant<Nominal, Asymptotic, Exponential> kind = Nominal{};
    double t0 = 0.0;

    [[nodiscard]] bool is_nominal() const noexcept { return std::holds_alternative<Nominal>(kind); }
    [[nodiscard]] bool is_asymptotic() const noexcept {
        return std::holds_alternative<Asymptotic>(kind);
    }
    [[nodiscard]] bool is_exponential() const noexcept {
        return std::holds_alternative<Exponential>(kind);
    }

    static Schedule nominal(double t0 = 0.0);
    /// Throws ArgumentError unless beta > 0, v > 0, r >= 0.
    static Schedule asymptotic(double beta, double v, double r, double t0 = 0.0);
    /// Throws ArgumentError unless lambda > 0.
    static Schedule exponential(double lambda, double t0 = 0.0);
};

/// Growth function xi(t). Throws ArgumentError for t < t0.
double xi(const Schedule& s, double t);
double nu(const Schedule& s, double t);
/// Throws OverflowError when phi(t) is not representable.
double phi(const Schedule& s, double t);
double log_xi(const Schedule& s, double t);
double log_phi(const Schedule& s, double t);

/// d/dt log xi(t): beta/(v xi^v) asymptotic, lambda exponential, 0 nominal.
double growth_rate(const Schedule& s, double t);

/// Exponent m of the filter-error scaling eta_f = xi^m (eta - J*):
/// 2 kappa for the asymptotic law, 2 for the exponential law, 0 for nominal.
double eta_scale_exponent(const Schedule& s, int kappa);

}  // namespace ueslab
