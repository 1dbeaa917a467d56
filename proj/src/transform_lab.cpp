#include "levyqsd/transform_lab.hpp"

#include <cmath>
#include <sstream>

#include "detail/coeffs.hpp"
#include "levyqsd/error.hpp"
#include "levyqsd/parallel.hpp"

namespace levyqsd {

void InversionConfig::validate() const {
    if (terms < 21 || terms % 2 == 0) throw Error(ErrorCode::DomainError, "terms must be odd and >= 21");
    if (!(t_min > 0.0)) throw Error(ErrorCode::DomainError, "t_min must be > 0");
    if (!(precision_target > 0.0)) throw Error(ErrorCode::DomainError, "precision_target must be > 0");
    if (!(abscissa_shift > 0.0)) throw Error(ErrorCode::DomainError, "abscissa_shift must be > 0");
}

namespace {

void check_quadrant(double alpha, double beta) {
    if (!(alpha >= 0.0 && beta >= 0.0) || !std::isfinite(alpha) || !std::isfinite(beta)) {
        throw Error(ErrorCode::DomainError, "alpha and beta must be finite and non-negative");
    }
}

/// The formula for L, without special handling of the removable point.
Complex raw_L(const AnalyticModel& am, ComplexRightInverse& phi, Complex theta, double alpha, double beta) {
    const LevyModel& m = am.model();
    const Complex eta = phi(theta);
    if (am.kind() == Kind::SpectrallyPositive) {
        const double big_k = detail::w_over_psi(m, alpha + beta, 0).v;
        const Complex g = detail::w_over_psi(m, Complex(alpha) + eta, 0).v;
        return am.slope_at_zero() / (theta - psi_eval(m, beta, 0)) * (big_k - g);
    }
    const double phi0 = am.phi0();
    const double sum = alpha + beta + phi0;
    return (eta - alpha - phi0) / (eta + beta) * (phi0 / sum) / (theta - psi_eval(m, alpha + phi0, 0));
}

/// theta at which the outer denominator of L vanishes.
double removable_point(const AnalyticModel& am, double alpha, double beta) {
    if (am.kind() == Kind::SpectrallyPositive) return psi_eval(am.model(), beta, 0);
    return psi_eval(am.model(), alpha + am.phi0(), 0);
}

}  // namespace

Complex master_L(const AnalyticModel& am, ComplexRightInverse& phi, Complex theta, double alpha, double beta) {
    check_quadrant(alpha, beta);
    const double zs = am.critical().zeta_star;
    if (theta.imag() == 0.0 && !(theta.real() > zs)) {
        std::ostringstream os;
        os.precision(17);
        os << "theta = " << theta.real() << " is not right of the branch point zeta* = " << zs;
        throw Error(ErrorCode::BelowBranchPoint, os.str());
    }
    const double t0 = removable_point(am, alpha, beta);
    const double delta = 1e-4 * std::max(1.0, std::abs(t0));
    const Complex off = theta - t0;
    if (std::abs(off) >= delta) return raw_L(am, phi, theta, alpha, beta);

    // Linear interpolation between two points at distance delta on either
    // side, along the direction of approach. Accurate to O(delta^2).
    const Complex u = std::abs(off) > 0.0 ? off * (delta / std::abs(off)) : Complex(delta, 0.0);
    phi.reset();
    const Complex lp = raw_L(am, phi, Complex(t0) + u, alpha, beta);
    phi.reset();
    const Complex lm = raw_L(am, phi, Complex(t0) - u, alpha, beta);
    phi.reset();
    return 0.5 * (lp + lm) + 0.5 * (lp - lm) * (off / u);
}

Complex master_L(const AnalyticModel& am, Complex theta, double alpha, double beta) {
    ComplexRightInverse phi(am.model(), am.critical());
    return master_L(am, phi, theta, alpha, beta);
}

Complex master_L(const LevyModel& model, Complex theta, double alpha, double beta) {
    return master_L(AnalyticModel(model), theta, alpha, beta);
}

namespace {

EulerResult invert_one(const AnalyticModel& am, double alpha, double beta, double t,
                       const InversionConfig& config) {
    ComplexRightInverse phi(am.model(), am.critical());
    auto f = [&](Complex s) { return master_L(am, phi, s, alpha, beta); };
    return euler_invert(f, t, am.critical().zeta_star, config.euler());
}

void check_converged(const EulerResult& r, double t, const InversionConfig& config, const char* what) {
    if (!(r.error <= config.precision_target * std::abs(r.value)) || !std::isfinite(r.value)) {
        std::ostringstream os;
        os.precision(6);
        os << what << " inversion at t = " << t << " did not converge: value " << r.value << ", error estimate "
           << r.error;
        throw Error(ErrorCode::ConvergenceFailure, os.str());
    }
}

}  // namespace

TransformGrid invert_time(const AnalyticModel& am, double alpha, double beta, const std::vector<double>& times,
                          const InversionConfig& config) {
    config.validate();
    check_quadrant(alpha, beta);
    if (!am.model().supports_complex()) {
        throw Error(ErrorCode::Unsupported, "time inversion needs a complex-capable exponent");
    }
    for (std::size_t i = 0; i < times.size(); ++i) {
        if (!(times[i] >= config.t_min)) throw Error(ErrorCode::DomainError, "times must be >= t_min");
        if (i > 0 && !(times[i] > times[i - 1])) throw Error(ErrorCode::DomainError, "times must increase");
    }
    const std::size_t n = times.size();
    TransformGrid g;
    g.times = times;
    g.alpha = alpha;
    g.beta = beta;
    g.raw.resize(n);
    g.survival.resize(n);
    g.conditional.resize(n);
    g.raw_error.resize(n);
    g.survival_error.resize(n);
    const bool trivial = alpha == 0.0 && beta == 0.0;

    parallel_for(n, config.threads, [&](std::size_t i) {
        const double t = times[i];
        const EulerResult s = invert_one(am, 0.0, 0.0, t, config);
        check_converged(s, t, config, "survival");
        const EulerResult r = trivial ? s : invert_one(am, alpha, beta, t, config);
        check_converged(r, t, config, "joint transform");
        g.survival[i] = s.value;
        g.survival_error[i] = s.error;
        g.raw[i] = r.value;
        g.raw_error[i] = r.error;
        g.conditional[i] = trivial ? 1.0 : r.value / s.value;
    });
    return g;
}

double tauberian_tail(const AnalyticModel& am, double alpha, double beta, double t, bool second_term) {
    if (!(t > 0.0)) throw Error(ErrorCode::DomainError, "t must be > 0");
    const JointExpansion c = joint_coeffs(am, alpha, beta);
    double sum = c.c1 / kGammaMinusHalf * std::pow(t, -1.5);
    if (second_term) sum += c.c3 / kGammaMinusThreeHalves * std::pow(t, -2.5);
    return std::exp(am.critical().zeta_star * t) * sum;
}

RateProfile rate_profile(const AnalyticModel& am, double alpha, double beta, const std::vector<double>& times,
                         const InversionConfig& config) {
    RateProfile out;
    out.mu_tilde = mu_tilde(am, alpha, beta);
    out.xi_tilde = xi_tilde(am, alpha, beta);
    out.published_limit = out.xi_tilde;
    out.predicted_limit = kGammaMinusHalf / kGammaMinusThreeHalves * out.xi_tilde;
    const TransformGrid g = invert_time(am, alpha, beta, times, config);
    const bool trivial = alpha == 0.0 && beta == 0.0;
    for (std::size_t i = 0; i < times.size(); ++i) {
        RatePoint p;
        p.t = times[i];
        p.raw = g.raw[i];
        p.survival = g.survival[i];
        p.conditional = g.conditional[i];
        p.tauberian = tauberian_tail(am, alpha, beta, p.t);
        p.profile = trivial ? 0.0 : p.t * (p.conditional - out.mu_tilde);
        out.points.push_back(p);
    }
    return out;
}

bool DensityGrid::all_converged() const {
    for (auto c : converged) {
        if (c == 0) return false;
    }
    return true;
}

DensityGrid invert_2d_density(const AnalyticModel& am, DensityKind which, const std::vector<double>& x_grid,
                              const std::vector<double>& y_grid, const InversionConfig& config) {
    config.validate();
    if (!am.model().supports_complex()) {
        throw Error(ErrorCode::Unsupported, "density inversion needs a complex-capable exponent");
    }
    for (double v : x_grid) {
        if (!(v > 0.0)) throw Error(ErrorCode::DomainError, "x grid must be positive");
    }
    for (double v : y_grid) {
        if (!(v > 0.0)) throw Error(ErrorCode::DomainError, "y grid must be positive");
    }
    DensityGrid out;
    out.which = which;
    out.x = x_grid;
    out.y = y_grid;
    const std::size_t nx = x_grid.size();
    const std::size_t ny = y_grid.size();
    out.values.assign(nx * ny, 0.0);
    out.errors.assign(nx * ny, 0.0);
    out.converged.assign(nx * ny, 0);
    const EulerSettings es = config.euler();

    auto transform = [&am, which](Complex a, Complex b) -> Complex {
        return which == DensityKind::Mu ? detail::mu_closed_form(am, a, b) : detail::xi_normalized(am, a, b);
    };

    parallel_for(nx * ny, config.threads, [&](std::size_t idx) {
        const double x = x_grid[idx / ny];
        const double y = y_grid[idx % ny];
        auto inner = [&](Complex a) {
            auto over_beta = [&](Complex b) { return transform(a, b); };
            return euler_invert_complex(over_beta, y, 0.0, es).value;
        };
        const EulerResult r = euler_invert(inner, x, 0.0, es);
        out.values[idx] = r.value;
        out.errors[idx] = r.error;
        const bool ok = std::isfinite(r.value) && r.error <= config.precision_target * std::max(std::abs(r.value), 1.0);
        out.converged[idx] = ok ? 1 : 0;
    });
    return out;
}

}  // namespace levyqsd
