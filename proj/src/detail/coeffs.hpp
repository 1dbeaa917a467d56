#pragma once

// Coefficient formulas templated on the scalar type. The public API is real;
// the density inversion evaluates the same expressions at complex (alpha, beta).

#include <array>
#include <cmath>
#include <complex>

#include "detail/gauss_legendre.hpp"
#include "levyqsd/error.hpp"
#include "levyqsd/expansion.hpp"
#include "levyqsd/exponent.hpp"

namespace levyqsd::detail {

inline double psi_at(const LevyModel& m, double x, int order) { return psi_eval(m, x, order); }
inline Complex psi_at(const LevyModel& m, Complex x, int order) { return psi_eval(m, x, order); }

/// Inside this distance of w = 0 the ratio w / psi(w) is evaluated through
/// the integral form of psi(w) / w.
inline constexpr double kRemovableBand = 0.05;

/// h(w) = w / psi(w) and its first three derivatives.
template <class S>
struct RatioJet {
    S v{};
    S d1{};
    S d2{};
    S d3{};
};

template <class S>
RatioJet<S> w_over_psi(const LevyModel& m, S w, int order) {
    RatioJet<S> out;
    if (std::abs(w) < kRemovableBand) {
        // q(w) = psi(w)/w = int_0^1 psi'(s w) ds, q^(n)(w) = int_0^1 s^n psi^(n+1)(s w) ds.
        const auto& gl = gauss_legendre_24();
        std::array<S, 4> q{};
        for (std::size_t i = 0; i < gl.nodes.size(); ++i) {
            const double s = gl.nodes[i];
            const S x = S(s) * w;
            double sn = 1.0;
            for (int n = 0; n <= order; ++n) {
                q[static_cast<std::size_t>(n)] += gl.weights[i] * sn * psi_at(m, x, n + 1);
                sn *= s;
            }
        }
        if (q[0] == S(0.0)) throw Error(ErrorCode::SingularDenominator, "psi'(0) vanishes");
        const S q0 = q[0];
        const S q02 = q0 * q0;
        out.v = S(1.0) / q0;
        if (order >= 1) out.d1 = -q[1] / q02;
        if (order >= 2) out.d2 = -q[2] / q02 + S(2.0) * q[1] * q[1] / (q02 * q0);
        if (order >= 3) {
            out.d3 = -q[3] / q02 + S(6.0) * q[1] * q[2] / (q02 * q0) -
                     S(6.0) * q[1] * q[1] * q[1] / (q02 * q02);
        }
        return out;
    }
    const S p0 = psi_at(m, w, 0);
    if (p0 == S(0.0)) throw Error(ErrorCode::SingularDenominator, "psi vanishes away from the origin");
    const S r = S(1.0) / p0;
    out.v = w * r;
    if (order == 0) return out;
    const S p1 = psi_at(m, w, 1);
    const S r1 = -p1 * r * r;
    out.d1 = r + w * r1;
    if (order == 1) return out;
    const S p2 = psi_at(m, w, 2);
    const S r2 = -p2 * r * r + S(2.0) * p1 * p1 * r * r * r;
    out.d2 = S(2.0) * r1 + w * r2;
    if (order == 2) return out;
    const S p3 = psi_at(m, w, 3);
    const S r3 = -p3 * r * r + S(6.0) * p1 * p2 * r * r * r - S(6.0) * p1 * p1 * p1 * r * r * r * r;
    out.d3 = S(3.0) * r2 + w * r3;
    return out;
}

template <class S>
std::array<S, 4> sp_coeffs(const AnalyticModel& am, const SeriesConstants& k, S alpha, S beta) {
    const LevyModel& m = am.model();
    const double ts = k.crit.theta_star;
    const double zs = k.crit.zeta_star;
    const double p = am.slope_at_zero();
    const double b1 = k.c1;
    const double b2 = k.c2;
    const double b3 = k.c3;

    const RatioJet<S> g = w_over_psi(m, alpha + ts, 3);
    const S big_k = w_over_psi(m, alpha + beta, 0).v;
    const S den = zs - psi_at(m, beta, 0);
    if (den == S(0.0)) throw Error(ErrorCode::SingularDenominator, "zeta* - psi(beta) vanishes");

    const S g0 = big_k - g.v;
    const S g1 = -g.d1 * b1;
    const S g2 = -(g.d1 * b2 + g.d2 * (b1 * b1 / 2.0));
    const S g3 = -(g.d1 * b3 + g.d2 * (b1 * b2) + g.d3 * (b1 * b1 * b1 / 6.0));
    return {p * g0 / den, p * g1 / den, p * (g2 - g0 / den) / den, p * (g3 - g1 / den) / den};
}

template <class S>
std::array<S, 4> sn_coeffs(const AnalyticModel& am, const SeriesConstants& k, S alpha, S beta) {
    const LevyModel& m = am.model();
    const double ts = k.crit.theta_star;
    const double zs = k.crit.zeta_star;
    const double phi0 = am.phi0();
    const double a1 = k.c1;
    const double a2 = k.c2;
    const double a3 = k.c3;

    const S v = beta + ts;
    const S lift = psi_at(m, alpha + phi0, 0) - zs;
    const S den = -lift;
    const S sum = alpha + beta + phi0;
    if (v == S(0.0) || den == S(0.0) || sum == S(0.0)) {
        throw Error(ErrorCode::SingularDenominator, "vanishing denominator in the coefficient formulas");
    }
    const S top = alpha - ts + phi0;
    const S v2 = v * v;
    const S c0 = -(phi0 / sum) * top / (v * den);
    const S c1 = a1 * phi0 / (v2 * den);
    const S c2 = phi0 * (v2 * top / sum - (a2 * v - a1 * a1) * lift) / (v2 * v * den * den);
    const S c3 = phi0 * a3 / (v2 * den) -
                 phi0 / (v2 * v2 * den * den) * (a1 * v * (2.0 * a2 * den + v) + a1 * a1 * a1 * lift);
    return {c0, c1, c2, c3};
}

template <class S>
std::array<S, 4> coeffs(const AnalyticModel& am, const SeriesConstants& k, S alpha, S beta) {
    return am.kind() == Kind::SpectrallyPositive ? sp_coeffs(am, k, alpha, beta)
                                                 : sn_coeffs(am, k, alpha, beta);
}

template <class S>
S mu_closed_form(const AnalyticModel& am, S alpha, S beta) {
    const LevyModel& m = am.model();
    const double ts = am.critical().theta_star;
    const double zs = am.critical().zeta_star;
    if (am.kind() == Kind::SpectrallyPositive) {
        const S gd = w_over_psi(m, alpha + ts, 1).d1;
        return zs * zs * gd / (zs - psi_at(m, beta, 0));
    }
    const S lift = psi_at(m, alpha + am.phi0(), 0) - zs;
    const S v = ts + beta;
    return (-zs / lift) * (ts * ts) / (v * v);
}

template <class S>
S xi_unnormalized(const AnalyticModel& am, S alpha, S beta) {
    const auto c = coeffs(am, am.constants(), alpha, beta);
    return c[3] - mu_closed_form(am, alpha, beta) * am.origin().c3;
}

template <class S>
S xi_normalized(const AnalyticModel& am, S alpha, S beta) {
    return xi_unnormalized(am, alpha, beta) / am.origin().c1;
}

}  // namespace levyqsd::detail
