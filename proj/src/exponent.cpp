#include "levyqsd/exponent.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <sstream>

#include "detail/exponent_eval.hpp"
#include "detail/roots.hpp"
#include "levyqsd/error.hpp"

namespace levyqsd {

namespace {

constexpr int kMaxDoublings = 60;
constexpr double kResidualTol = 1e-12;

void check_order(int order) {
    if (order < 0 || order > kMaxExponentOrder) {
        throw Error(ErrorCode::UnsupportedOrder,
                    "derivative order " + std::to_string(order) + " not in 0..4");
    }
}

[[noreturn]] void domain_failure(const LevyModel& model, double eta) {
    std::ostringstream os;
    os.precision(17);
    os << "eta = " << eta << " outside the finiteness window of " << model.describe();
    throw Error(ErrorCode::DomainError, os.str());
}

/// Point on the segment from `from` toward `target`; if `target` leaves the
/// domain, halve the remaining distance to the boundary instead.
double step_within(const Interval& dom, double from, double target) {
    if (dom.contains(target)) return target;
    const double bound = target > from ? dom.hi : dom.lo;
    return 0.5 * (from + bound);
}

}  // namespace

double psi_eval(const LevyModel& model, double eta, int order) {
    check_order(order);
    if (!std::isfinite(eta) || !model.domain().contains(eta)) domain_failure(model, eta);
    if (const auto* cp = std::get_if<CompoundPoissonErlang>(&model.family())) {
        return detail::erlang_exponent(*cp, eta, order);
    }
    if (const auto* b = std::get_if<LinearBrownian>(&model.family())) {
        return detail::brownian_exponent(*b, model.kind(), eta, order);
    }
    const auto& g = std::get<GenericExponent>(model.family());
    return order == 0 ? g.psi(eta) : g.derivs[static_cast<std::size_t>(order - 1)](eta);
}

Complex psi_eval(const LevyModel& model, Complex eta, int order) {
    check_order(order);
    if (const auto* cp = std::get_if<CompoundPoissonErlang>(&model.family())) {
        if (!(eta.real() > -cp->nu)) domain_failure(model, eta.real());
        return detail::erlang_exponent(*cp, eta, order);
    }
    if (const auto* b = std::get_if<LinearBrownian>(&model.family())) {
        return detail::brownian_exponent(*b, model.kind(), eta, order);
    }
    throw Error(ErrorCode::Unsupported, "generic exponents are real-argument only");
}

double netput_drift(const LevyModel& model) {
    const double d0 = psi_eval(model, 0.0, 1);
    return model.kind() == Kind::SpectrallyNegative ? d0 : -d0;
}

CriticalData critical_point(const LevyModel& model) {
    const Interval dom = model.domain();
    const double d0 = psi_eval(model, 0.0, 1);
    // (SN): the minimum lies at theta* > 0, so psi must decrease at 0;
    // (SP): it lies at theta* < 0, so psi must increase at 0.
    const double dir = model.kind() == Kind::SpectrallyNegative ? 1.0 : -1.0;
    if (!(dir * d0 < 0.0)) {
        throw Error(ErrorCode::NoInteriorMinimum,
                    "psi'(0) = " + std::to_string(d0) +
                        " does not descend into the admissible half-line (netput drift is not negative)");
    }

    const double dd0 = psi_eval(model, 0.0, 2);
    double step = dd0 > 0.0 ? std::min(1.0, 0.5 * std::abs(d0) / dd0) : 1e-3;
    double prev = 0.0;
    double next = 0.0;
    bool bracketed = false;
    for (int i = 0; i < kMaxDoublings; ++i) {
        next = step_within(dom, prev, dir * step);
        const double dn = psi_eval(model, next, 1);
        if (!std::isfinite(dn)) break;
        if (dir * dn >= 0.0) {
            bracketed = true;
            break;
        }
        prev = next;
        step *= 2.0;
    }
    if (!bracketed) {
        throw Error(ErrorCode::NoInteriorMinimum,
                    "no sign change of psi' found within the domain of " + model.describe());
    }

    auto fdf = [&](double x) {
        return std::pair{psi_eval(model, x, 1), psi_eval(model, x, 2)};
    };
    const double guess = dd0 > 0.0 ? std::clamp(-d0 / dd0, std::min(prev, next), std::max(prev, next))
                                   : 0.5 * (prev + next);
    const double theta = detail::safeguarded_newton(fdf, prev, next, guess);

    CriticalData out;
    out.theta_star = theta;
    out.zeta_star = psi_eval(model, theta, 0);
    out.psi_dd = psi_eval(model, theta, 2);
    out.psi_d3 = psi_eval(model, theta, 3);
    out.psi_d4 = psi_eval(model, theta, 4);
    const double residual = std::abs(psi_eval(model, theta, 1));
    if (!(residual <= kResidualTol * std::max(1.0, std::abs(out.psi_dd))) || !(out.psi_dd > 0.0)) {
        throw Error(ErrorCode::ConvergenceFailure, "critical point polish did not reach tolerance");
    }
    if (!(out.zeta_star < 0.0)) {
        throw Error(ErrorCode::NotStrictlyNegative,
                    "psi(theta*) = " + std::to_string(out.zeta_star) + " is not strictly negative");
    }
    return out;
}

namespace {

double brownian_phi(const LinearBrownian& b, Kind kind, double s) {
    const double s2 = b.sigma * b.sigma;
    const double lin = kind == Kind::SpectrallyNegative ? b.c : -b.c;
    const double disc = std::max(0.0, b.c * b.c + 2.0 * s2 * s);
    return (lin + std::sqrt(disc)) / s2;
}

void check_branch(const CriticalData& crit, double s) {
    if (!(s >= crit.zeta_star)) {
        std::ostringstream os;
        os.precision(17);
        os << "s = " << s << " is below the branch point zeta* = " << crit.zeta_star;
        throw Error(ErrorCode::BelowBranchPoint, os.str());
    }
}

}  // namespace

double phi_right_inverse_numeric(const LevyModel& model, const CriticalData& crit, double s) {
    check_branch(crit, s);
    if (s == crit.zeta_star) return crit.theta_star;
    const Interval dom = model.domain();

    // Square-root behaviour at the branch point: psi(theta* + d) ~ zeta* + psi'' d^2 / 2.
    const double gap = s - crit.zeta_star;
    const double guess = crit.theta_star + std::sqrt(2.0 * gap / crit.psi_dd);
    double hi_offset = std::max(2.0 * (guess - crit.theta_star), 1e-8 * (1.0 + std::abs(crit.theta_star)));
    double hi = crit.theta_star + hi_offset;
    bool bracketed = false;
    for (int i = 0; i < 4 * kMaxDoublings; ++i) {
        hi = step_within(dom, crit.theta_star, crit.theta_star + hi_offset);
        if (psi_eval(model, hi, 0) > s) {
            bracketed = true;
            break;
        }
        hi_offset *= 2.0;
        if (!dom.contains(crit.theta_star + hi_offset) &&
            std::abs(hi - dom.hi) <= 1e-15 * (1.0 + std::abs(dom.hi))) {
            break;
        }
    }
    if (!bracketed) {
        throw Error(ErrorCode::ConvergenceFailure, "could not bracket the right inverse");
    }
    auto fdf = [&](double x) {
        return std::pair{psi_eval(model, x, 0) - s, psi_eval(model, x, 1)};
    };
    const double root = detail::safeguarded_newton(fdf, crit.theta_star, hi, std::min(guess, hi));
    const double residual = std::abs(psi_eval(model, root, 0) - s);
    if (!(residual <= kResidualTol * std::max(1.0, std::abs(s)))) {
        throw Error(ErrorCode::ConvergenceFailure, "right inverse residual above tolerance");
    }
    return root;
}

double phi_right_inverse(const LevyModel& model, const CriticalData& crit, double s) {
    check_branch(crit, s);
    if (const auto* b = std::get_if<LinearBrownian>(&model.family())) {
        return brownian_phi(*b, model.kind(), s);
    }
    return phi_right_inverse_numeric(model, crit, s);
}

double phi_right_inverse(const LevyModel& model, double s) {
    return phi_right_inverse(model, critical_point(model), s);
}

// ---------------------------------------------------------------------------
// Complex continuation

ComplexRightInverse::ComplexRightInverse(const LevyModel& model, const CriticalData& crit,
                                         bool force_continuation)
    : model_(&model), crit_(crit), use_closed_form_(model.is_brownian() && !force_continuation) {
    if (!model.supports_complex()) {
        throw Error(ErrorCode::Unsupported, "complex right inverse needs a closed-form exponent");
    }
}

Complex ComplexRightInverse::closed_form(Complex theta) const {
    const auto& b = std::get<LinearBrownian>(model_->family());
    const double s2 = b.sigma * b.sigma;
    const double lin = model_->kind() == Kind::SpectrallyNegative ? b.c : -b.c;
    return (lin + std::sqrt(b.c * b.c + 2.0 * s2 * theta)) / s2;
}

namespace {

/// True when the segment [a, b] meets the cut (-inf, zeta*].
bool crosses_cut(Complex a, Complex b, double zeta) {
    const double ia = a.imag();
    const double ib = b.imag();
    if (ia > 0.0 && ib > 0.0) return false;
    if (ia < 0.0 && ib < 0.0) return false;
    if (ia == ib) return std::min(a.real(), b.real()) <= zeta;
    const double t = ia / (ia - ib);
    const double x = a.real() + t * (b.real() - a.real());
    return x <= zeta;
}

}  // namespace

Complex ComplexRightInverse::continue_to(Complex from_theta, Complex from_eta, Complex to_theta) const {
    Complex cur_theta = from_theta;
    Complex cur_eta = from_eta;
    Complex remaining = to_theta - cur_theta;
    double frac = 1.0;
    const double tiny = 1e-14 * (1.0 + std::abs(to_theta));
    while (std::abs(to_theta - cur_theta) > 0.0) {
        remaining = to_theta - cur_theta;
        const Complex step = frac >= 1.0 ? remaining : remaining * frac;
        if (std::abs(step) < tiny && frac < 1.0) {
            throw Error(ErrorCode::ConvergenceFailure, "complex right inverse continuation stalled");
        }
        const Complex target = cur_theta + step;
        const Complex slope = psi_eval(*model_, cur_eta, 1);
        const Complex pred = cur_eta + step / slope;
        Complex eta = pred;
        bool converged = false;
        // Stop once the update is far below the step; quadratic convergence
        // leaves the iterate at roundoff level. Iterates that leave the
        // finiteness window count as failures and shrink the step.
        try {
            for (int it = 0; it < 12; ++it) {
                const Complex f = psi_eval(*model_, eta, 0) - target;
                const Complex df = psi_eval(*model_, eta, 1);
                const Complex delta = f / df;
                eta -= delta;
                if (std::abs(delta) <= 1e-12 * std::max(1.0, std::abs(eta))) {
                    converged = true;
                    break;
                }
            }
        } catch (const Error&) {
            converged = false;
        }
        const bool on_branch =
            std::abs(eta - pred) <= 0.25 * std::abs(pred - cur_eta) + 1e-12 * (1.0 + std::abs(cur_eta));
        if (converged && on_branch && std::isfinite(eta.real()) && std::isfinite(eta.imag())) {
            cur_theta = (frac >= 1.0) ? to_theta : target;
            cur_eta = eta;
            frac = std::min(1.0, frac * 2.0);
        } else {
            frac *= 0.5;
        }
    }
    return cur_eta;
}

Complex ComplexRightInverse::from_real_axis(Complex theta) const {
    const double margin = std::max(1e-2 * std::abs(crit_.zeta_star), 1e-6);
    const double anchor_re = theta.real() > crit_.zeta_star + margin ? theta.real() : crit_.zeta_star + margin;
    const double anchor_eta = phi_right_inverse(*model_, crit_, anchor_re);
    const Complex vertical{anchor_re, theta.imag()};
    Complex eta = continue_to(Complex{anchor_re, 0.0}, Complex{anchor_eta, 0.0}, vertical);
    if (vertical != theta) eta = continue_to(vertical, eta, theta);
    return eta;
}

Complex ComplexRightInverse::operator()(Complex theta) {
    if (theta.imag() == 0.0 && !(theta.real() > crit_.zeta_star)) {
        check_branch(crit_, theta.real());
    }
    if (use_closed_form_) return closed_form(theta);

    Complex eta;
    if (theta.imag() == 0.0) {
        eta = Complex{phi_right_inverse(*model_, crit_, theta.real()), 0.0};
    } else if (has_last_ && !crosses_cut(last_theta_, theta, crit_.zeta_star)) {
        eta = continue_to(last_theta_, last_eta_, theta);
    } else {
        eta = from_real_axis(theta);
    }
    last_theta_ = theta;
    last_eta_ = eta;
    has_last_ = true;
    return eta;
}

// ---------------------------------------------------------------------------

AssumptionReport check_assumptions(const LevyModel& model) {
    AssumptionReport rep;
    const bool sn = model.kind() == Kind::SpectrallyNegative;

    double drift = 0.0;
    try {
        drift = netput_drift(model);
        rep.stable = drift < 0.0;
    } catch (const Error& e) {
        rep.messages.emplace_back(std::string("drift evaluation failed: ") + e.what());
    }
    if (const auto* cp = std::get_if<CompoundPoissonErlang>(&model.family())) {
        const double rho = cp->load();
        rep.stable = rep.stable && rho < 1.0;
        rep.messages.push_back("load rho = " + std::to_string(rho) + (rho < 1.0 ? " < 1" : " >= 1 (unstable)"));
    } else {
        rep.messages.push_back("netput drift E X(1) = " + std::to_string(drift) +
                               (rep.stable ? " < 0" : " >= 0 (unstable)"));
    }

    try {
        const CriticalData crit = critical_point(model);
        rep.interior_minimum = (sn ? crit.theta_star > 0.0 : crit.theta_star < 0.0) && crit.psi_dd > 0.0;
        rep.minimum_negative = crit.zeta_star < 0.0;
        // The window must reach strictly past theta* so the minimum is interior.
        const double beyond = crit.theta_star + (sn ? 1.0 : -1.0) * 1e-3 * (1.0 + std::abs(crit.theta_star));
        const Interval dom = model.domain();
        rep.exponent_finite_on_window = dom.contains(beyond) && std::isfinite(psi_eval(model, 0.0)) &&
                                        std::isfinite(crit.zeta_star) && std::isfinite(psi_eval(model, beyond));
        std::ostringstream os;
        os.precision(17);
        os << "theta* = " << crit.theta_star << ", zeta* = " << crit.zeta_star;
        rep.messages.push_back(os.str());
    } catch (const Error& e) {
        rep.interior_minimum = e.code() == ErrorCode::NotStrictlyNegative;
        rep.exponent_finite_on_window = std::isfinite(psi_eval(model, 0.0));
        rep.messages.emplace_back(e.what());
    }

    if (model.is_generic()) {
        rep.analyticity_documented = std::get<GenericExponent>(model.family()).analyticity_asserted;
        rep.messages.emplace_back(rep.analyticity_documented
                                      ? "analyticity of the right inverse asserted by the user"
                                      : "analyticity of the right inverse not asserted for generic exponent");
    } else {
        rep.analyticity_documented = true;
        rep.messages.emplace_back("analyticity of the right inverse holds for the built-in family");
    }
    return rep;
}

}  // namespace levyqsd
