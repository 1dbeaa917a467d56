#pragma once

#include "levyqsd/exponent.hpp"
#include "levyqsd/levy_model.hpp"

namespace levyqsd {

/// Coefficients of the square-root expansion of the right inverse at the
/// branch point,
///   Phi(s) = theta* + c1 (s - zeta*)^{1/2} + c2 (s - zeta*) + c3 (s - zeta*)^{3/2} + ...
/// c1 = sqrt(2 / psi''), c2 = -psi''' / (3 psi''^2),
/// c3 = (5 sqrt2 / 36) psi'''^2 / psi''^{7/2} - (sqrt2 / 12) psi'''' / psi''^{5/2},
/// all derivatives taken at theta*.
struct SeriesConstants {
    double c1 = 0.0;
    double c2 = 0.0;
    double c3 = 0.0;
    CriticalData crit;
};

[[nodiscard]] SeriesConstants series_constants(const LevyModel& model);
[[nodiscard]] SeriesConstants series_constants(const CriticalData& crit);

/// Alternative closed forms c2 = +psi'''/(3 psi''^2) and
/// c3 = -(7/(18 sqrt2)) psi'''^2/psi''^{7/2} - (1/(6 sqrt2)) psi''''/psi''^{5/2}
/// that circulate in the literature. They do not reproduce the series
/// reversion when psi''' != 0; kept to reproduce numbers derived from them.
[[nodiscard]] SeriesConstants legacy_series_constants(const CriticalData& crit);

/// Truncated four-term expansion of the right inverse. Throws BelowBranchPoint
/// for s < zeta*.
[[nodiscard]] double phi_expansion_eval(const LevyModel& model, double s);

/// C0..C3 of L(theta; alpha, beta) = sum_k C_k (theta - zeta*)^{k/2} + o(.)
struct JointExpansion {
    double c0 = 0.0;
    double c1 = 0.0;
    double c2 = 0.0;
    double c3 = 0.0;
    double alpha = 0.0;
    double beta = 0.0;

    /// Partial sum at theta = zeta* + h.
    [[nodiscard]] double partial_sum(double h) const;
};

/// A certified model with everything the expansion pipeline needs cached.
/// Immutable after construction, so it can be shared between threads.
class AnalyticModel {
public:
    /// Throws Error(NotCertified) listing the failed checks.
    explicit AnalyticModel(LevyModel model);

    [[nodiscard]] const LevyModel& model() const noexcept { return model_; }
    [[nodiscard]] Kind kind() const noexcept { return model_.kind(); }
    [[nodiscard]] const CriticalData& critical() const noexcept { return constants_.crit; }
    [[nodiscard]] const SeriesConstants& constants() const noexcept { return constants_; }
    /// Phi(0) for spectrally negative models, 0 otherwise.
    [[nodiscard]] double phi0() const noexcept { return phi0_; }
    /// psi'(0).
    [[nodiscard]] double slope_at_zero() const noexcept { return slope0_; }
    /// C_k(0, 0).
    [[nodiscard]] const JointExpansion& origin() const noexcept { return origin_; }

private:
    LevyModel model_;
    SeriesConstants constants_;
    double phi0_ = 0.0;
    double slope0_ = 0.0;
    JointExpansion origin_;
};

/// Coefficients C0..C3 at (alpha, beta), both >= 0.
///
/// Near the removable singularities of w / psi(w) at w = 0 (alpha + theta* = 0
/// or alpha + beta = 0 in the spectrally positive case) the ratio is evaluated
/// through psi(w)/w = int_0^1 psi'(s w) ds instead of the quotient.
[[nodiscard]] JointExpansion joint_coeffs(const AnalyticModel& am, double alpha, double beta);
[[nodiscard]] JointExpansion joint_coeffs(const LevyModel& model, double alpha, double beta);

/// Same formulas with caller-supplied series constants.
[[nodiscard]] JointExpansion joint_coeffs(const AnalyticModel& am, const SeriesConstants& constants,
                                          double alpha, double beta);

struct MuTildeRoutes {
    double closed_form = 0.0;
    double coefficient_ratio = 0.0;
};

/// Transform of the quasi-stationary law, E exp(-alpha X - beta Y) for the
/// limit pair (X, Y). Returns the closed form.
[[nodiscard]] double mu_tilde(const AnalyticModel& am, double alpha, double beta);
[[nodiscard]] double mu_tilde(const LevyModel& model, double alpha, double beta);

/// Closed form and C1(alpha, beta) / C1(0, 0), evaluated independently.
[[nodiscard]] MuTildeRoutes mu_tilde_routes(const AnalyticModel& am, double alpha, double beta);

/// Transform of the second-order measure,
///   (C3(alpha, beta) - mu~(alpha, beta) C3(0, 0)) / C1(0, 0),
/// scaled so that the Brownian case reduces to combinations of Erlang
/// transforms.
[[nodiscard]] double xi_tilde(const AnalyticModel& am, double alpha, double beta);
[[nodiscard]] double xi_tilde(const LevyModel& model, double alpha, double beta);

/// C3(alpha, beta) - mu~(alpha, beta) C3(0, 0) without the 1/C1(0, 0) scale.
[[nodiscard]] double xi_tilde_unnormalized(const AnalyticModel& am, double alpha, double beta);

/// Gamma(2, theta*) density of the second marginal of the quasi-stationary
/// law. Spectrally negative models only; throws WrongKind otherwise.
[[nodiscard]] double mu_marginal_density_sn(const AnalyticModel& am, double y);
[[nodiscard]] double mu_marginal_density_sn(const LevyModel& model, double y);

}  // namespace levyqsd
