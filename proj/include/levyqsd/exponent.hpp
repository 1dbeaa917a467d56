#pragma once

#include <complex>
#include <string>
#include <vector>

#include "levyqsd/levy_model.hpp"

namespace levyqsd {

using Complex = std::complex<double>;

/// Highest derivative order available for every family.
inline constexpr int kMaxExponentOrder = 4;

/// order-th derivative of the model's exponent at eta (order 0 is psi).
/// Throws DomainError outside the finiteness window, UnsupportedOrder for
/// order > 4.
[[nodiscard]] double psi_eval(const LevyModel& model, double eta, int order = 0);

/// Complex-argument evaluation for closed-form families. The finiteness
/// window is checked against Re(eta). Throws Unsupported for generic models.
[[nodiscard]] Complex psi_eval(const LevyModel& model, Complex eta, int order = 0);

/// Minimiser of the exponent and derivatives there.
struct CriticalData {
    double theta_star = 0.0;
    double zeta_star = 0.0;
    double psi_dd = 0.0;
    double psi_d3 = 0.0;
    double psi_d4 = 0.0;
};

/// Locates theta* by bracketing from 0 in the direction of decreasing psi
/// (step doubling, at most 60 doublings) and polishing psi' = 0 with
/// safeguarded Newton. Throws NoInteriorMinimum when no sign change of psi'
/// is found inside the domain and NotStrictlyNegative when psi(theta*) >= 0.
[[nodiscard]] CriticalData critical_point(const LevyModel& model);

/// Right inverse on the increasing branch: the root eta >= theta* of
/// psi(eta) = s. Brownian models use the closed form.
[[nodiscard]] double phi_right_inverse(const LevyModel& model, double s);
[[nodiscard]] double phi_right_inverse(const LevyModel& model, const CriticalData& crit, double s);

/// Root-finder route for every family, including Brownian. Used to cross-check
/// the closed form.
[[nodiscard]] double phi_right_inverse_numeric(const LevyModel& model, const CriticalData& crit,
                                               double s);

/// Analytic continuation of the right inverse to complex arguments.
///
/// Successive calls continue from the previous solution, so evaluating along
/// a contour in order is cheap. A call far from the cached point restarts from
/// the real axis. Closed-form families bypass continuation unless
/// `force_continuation` is set.
class ComplexRightInverse {
public:
    ComplexRightInverse(const LevyModel& model, const CriticalData& crit,
                        bool force_continuation = false);

    [[nodiscard]] Complex operator()(Complex theta);

    void reset() noexcept { has_last_ = false; }

private:
    [[nodiscard]] Complex closed_form(Complex theta) const;
    [[nodiscard]] Complex continue_to(Complex from_theta, Complex from_eta, Complex to_theta) const;
    [[nodiscard]] Complex from_real_axis(Complex theta) const;

    const LevyModel* model_;
    CriticalData crit_;
    bool use_closed_form_;
    bool has_last_ = false;
    Complex last_theta_{};
    Complex last_eta_{};
};

/// Outcome of the assumption checks. Failures are reported, never thrown.
struct AssumptionReport {
    bool stable = false;
    bool exponent_finite_on_window = false;
    bool interior_minimum = false;
    bool minimum_negative = false;
    bool analyticity_documented = false;
    std::vector<std::string> messages;

    [[nodiscard]] bool certified() const noexcept {
        return stable && exponent_finite_on_window && interior_minimum && minimum_negative &&
               analyticity_documented;
    }
};

[[nodiscard]] AssumptionReport check_assumptions(const LevyModel& model);

/// Mean drift of the netput, E X(1).
[[nodiscard]] double netput_drift(const LevyModel& model);

}  // namespace levyqsd
