#include "levyqsd/expansion.hpp"

#include <cmath>
#include <sstream>

#include "detail/coeffs.hpp"
#include "levyqsd/error.hpp"

namespace levyqsd {

namespace {

void check_quadrant(double alpha, double beta) {
    if (!(alpha >= 0.0 && beta >= 0.0) || !std::isfinite(alpha) || !std::isfinite(beta)) {
        std::ostringstream os;
        os.precision(17);
        os << "(alpha, beta) = (" << alpha << ", " << beta << ") must be finite and non-negative";
        throw Error(ErrorCode::DomainError, os.str());
    }
}

JointExpansion pack(const std::array<double, 4>& c, double alpha, double beta) {
    return JointExpansion{c[0], c[1], c[2], c[3], alpha, beta};
}

}  // namespace

SeriesConstants series_constants(const CriticalData& crit) {
    const double p2 = crit.psi_dd;
    const double p3 = crit.psi_d3;
    const double p4 = crit.psi_d4;
    const double r2 = std::sqrt(2.0);
    SeriesConstants k;
    k.crit = crit;
    k.c1 = std::sqrt(2.0 / p2);
    k.c2 = -p3 / (3.0 * p2 * p2);
    k.c3 = 5.0 * r2 / 36.0 * p3 * p3 / std::pow(p2, 3.5) - r2 / 12.0 * p4 / std::pow(p2, 2.5);
    return k;
}

SeriesConstants series_constants(const LevyModel& model) { return series_constants(critical_point(model)); }

SeriesConstants legacy_series_constants(const CriticalData& crit) {
    const double p2 = crit.psi_dd;
    const double p3 = crit.psi_d3;
    const double p4 = crit.psi_d4;
    const double r2 = std::sqrt(2.0);
    SeriesConstants k;
    k.crit = crit;
    k.c1 = std::sqrt(2.0 / p2);
    k.c2 = p3 / (3.0 * p2 * p2);
    k.c3 = -7.0 / (18.0 * r2) * p3 * p3 / std::pow(p2, 3.5) - 1.0 / (6.0 * r2) * p4 / std::pow(p2, 2.5);
    return k;
}

double phi_expansion_eval(const LevyModel& model, double s) {
    const SeriesConstants k = series_constants(model);
    if (!(s >= k.crit.zeta_star)) {
        std::ostringstream os;
        os.precision(17);
        os << "s = " << s << " is below the branch point zeta* = " << k.crit.zeta_star;
        throw Error(ErrorCode::BelowBranchPoint, os.str());
    }
    const double h = s - k.crit.zeta_star;
    const double r = std::sqrt(h);
    return k.crit.theta_star + k.c1 * r + k.c2 * h + k.c3 * h * r;
}

double JointExpansion::partial_sum(double h) const {
    const double r = std::sqrt(h);
    return c0 + c1 * r + c2 * h + c3 * h * r;
}

AnalyticModel::AnalyticModel(LevyModel model) : model_(std::move(model)) {
    const AssumptionReport rep = check_assumptions(model_);
    if (!rep.certified()) {
        std::string msg = "model " + model_.describe() + " is not certified:";
        for (const auto& line : rep.messages) msg += "\n  " + line;
        throw Error(ErrorCode::NotCertified, msg);
    }
    constants_ = series_constants(critical_point(model_));
    slope0_ = psi_eval(model_, 0.0, 1);
    if (model_.kind() == Kind::SpectrallyNegative) {
        phi0_ = phi_right_inverse(model_, constants_.crit, 0.0);
    }
    origin_ = pack(detail::coeffs(*this, constants_, 0.0, 0.0), 0.0, 0.0);
}

JointExpansion joint_coeffs(const AnalyticModel& am, const SeriesConstants& constants, double alpha,
                            double beta) {
    check_quadrant(alpha, beta);
    return pack(detail::coeffs(am, constants, alpha, beta), alpha, beta);
}

JointExpansion joint_coeffs(const AnalyticModel& am, double alpha, double beta) {
    return joint_coeffs(am, am.constants(), alpha, beta);
}

JointExpansion joint_coeffs(const LevyModel& model, double alpha, double beta) {
    return joint_coeffs(AnalyticModel(model), alpha, beta);
}

MuTildeRoutes mu_tilde_routes(const AnalyticModel& am, double alpha, double beta) {
    check_quadrant(alpha, beta);
    MuTildeRoutes r;
    r.closed_form = detail::mu_closed_form(am, alpha, beta);
    r.coefficient_ratio = joint_coeffs(am, alpha, beta).c1 / am.origin().c1;
    return r;
}

double mu_tilde(const AnalyticModel& am, double alpha, double beta) {
    check_quadrant(alpha, beta);
    return detail::mu_closed_form(am, alpha, beta);
}

double mu_tilde(const LevyModel& model, double alpha, double beta) {
    return mu_tilde(AnalyticModel(model), alpha, beta);
}

double xi_tilde_unnormalized(const AnalyticModel& am, double alpha, double beta) {
    check_quadrant(alpha, beta);
    return detail::xi_unnormalized(am, alpha, beta);
}

double xi_tilde(const AnalyticModel& am, double alpha, double beta) {
    check_quadrant(alpha, beta);
    return detail::xi_normalized(am, alpha, beta);
}

double xi_tilde(const LevyModel& model, double alpha, double beta) {
    return xi_tilde(AnalyticModel(model), alpha, beta);
}

double mu_marginal_density_sn(const AnalyticModel& am, double y) {
    if (am.kind() != Kind::SpectrallyNegative) {
        throw Error(ErrorCode::WrongKind,
                    "the explicit marginal density exists only for spectrally negative models");
    }
    if (!(y >= 0.0)) throw Error(ErrorCode::DomainError, "y must be non-negative");
    const double ts = am.critical().theta_star;
    return ts * ts * y * std::exp(-ts * y);
}

double mu_marginal_density_sn(const LevyModel& model, double y) {
    if (model.kind() != Kind::SpectrallyNegative) {
        throw Error(ErrorCode::WrongKind,
                    "the explicit marginal density exists only for spectrally negative models");
    }
    return mu_marginal_density_sn(AnalyticModel(model), y);
}

}  // namespace levyqsd
