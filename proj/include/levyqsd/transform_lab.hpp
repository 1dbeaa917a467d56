#pragma once

#include <vector>

#include "levyqsd/euler_inversion.hpp"
#include "levyqsd/expansion.hpp"
#include "levyqsd/exponent.hpp"

namespace levyqsd {

enum class InversionMethod { EulerSummation };

struct InversionConfig {
    InversionMethod method = InversionMethod::EulerSummation;
    /// Transform evaluations per inverted value; odd and >= 21.
    int terms = 41;
    /// Relative tolerance on the Euler error estimate.
    double precision_target = 1e-8;
    /// Bromwich line at Re theta = zeta* + abscissa_shift / t.
    double abscissa_shift = 11.5;
    double t_min = 1e-3;
    /// Workers for grid evaluation (0 = hardware concurrency). Results do
    /// not depend on it.
    unsigned threads = 1;

    /// Throws DomainError when the invariants are violated.
    void validate() const;
    [[nodiscard]] EulerSettings euler() const { return EulerSettings{terms, abscissa_shift}; }
};

/// E_pi[exp(-alpha Q(0) - beta Q(t)); T > t] and P_pi(T > t) on a time grid.
struct TransformGrid {
    std::vector<double> times;
    std::vector<double> raw;
    std::vector<double> survival;
    std::vector<double> conditional;
    std::vector<double> raw_error;
    std::vector<double> survival_error;
    double alpha = 0.0;
    double beta = 0.0;
};

/// L(theta; alpha, beta) = int_0^inf exp(-theta t) E_pi[exp(-alpha Q(0) - beta Q(t)); T > t] dt.
///
/// Real theta <= zeta* throws BelowBranchPoint. The removable point where the
/// outer denominator vanishes is bridged by interpolating across it.
[[nodiscard]] Complex master_L(const AnalyticModel& am, Complex theta, double alpha, double beta);
[[nodiscard]] Complex master_L(const LevyModel& model, Complex theta, double alpha, double beta);

/// Same, reusing a continuation cache for the right inverse. Evaluating along
/// a contour in order with one cache is much cheaper for non-Brownian models.
[[nodiscard]] Complex master_L(const AnalyticModel& am, ComplexRightInverse& phi, Complex theta,
                               double alpha, double beta);

/// Inverts theta -> L at each time. raw and survival come from two
/// inversions on the same contour. Throws ConvergenceFailure when an Euler
/// error estimate exceeds precision_target relative to the value.
[[nodiscard]] TransformGrid invert_time(const AnalyticModel& am, double alpha, double beta,
                                        const std::vector<double>& times, const InversionConfig& config);

/// Two-term asymptotic exp(zeta* t)(C1/Gamma(-1/2) t^{-3/2} + C3/Gamma(-3/2) t^{-5/2}).
[[nodiscard]] double tauberian_tail(const AnalyticModel& am, double alpha, double beta, double t,
                                    bool second_term = true);

struct RatePoint {
    double t = 0.0;
    double raw = 0.0;
    double survival = 0.0;
    double conditional = 0.0;
    double tauberian = 0.0;
    /// t (conditional - mu~).
    double profile = 0.0;
};

struct RateProfile {
    std::vector<RatePoint> points;
    double mu_tilde = 0.0;
    /// (C3 - mu~ C3(0,0)) / C1(0,0).
    double xi_tilde = 0.0;
    /// Limit of the profile implied by the two-term expansion,
    /// Gamma(-1/2)/Gamma(-3/2) * xi_tilde = -1.5 xi_tilde.
    double predicted_limit = 0.0;
    /// xi_tilde itself, the limit obtained when the Gamma ratio is dropped.
    double published_limit = 0.0;
};

[[nodiscard]] RateProfile rate_profile(const AnalyticModel& am, double alpha, double beta,
                                       const std::vector<double>& times, const InversionConfig& config);

enum class DensityKind { Mu, Xi };

/// Density values on x_grid x y_grid, row-major with x as the slow index.
struct DensityGrid {
    DensityKind which = DensityKind::Mu;
    std::vector<double> x;
    std::vector<double> y;
    std::vector<double> values;
    std::vector<double> errors;
    /// 1 where the outer Euler error estimate met the target.
    std::vector<unsigned char> converged;

    [[nodiscard]] double at(std::size_t i, std::size_t j) const { return values[i * y.size() + j]; }
    [[nodiscard]] bool all_converged() const;
};

/// Iterated Euler inversion of mu~ (or xi~) in alpha then beta. Points whose
/// error estimate exceeds precision_target * max(|f|, 1) are flagged in the
/// mask rather than thrown. Needs a complex-capable model.
[[nodiscard]] DensityGrid invert_2d_density(const AnalyticModel& am, DensityKind which,
                                            const std::vector<double>& x_grid,
                                            const std::vector<double>& y_grid, const InversionConfig& config);

/// Gamma(-1/2) and Gamma(-3/2).
inline constexpr double kGammaMinusHalf = -3.5449077018110320546;
inline constexpr double kGammaMinusThreeHalves = 2.3632718012073547031;

}  // namespace levyqsd
