#pragma once

#include <cmath>
#include <limits>
#include <utility>

namespace levyqsd::detail {

/// Newton's method kept inside a sign-change bracket, falling back to
/// bisection when the Newton step leaves the bracket or stalls. Iterates to
/// machine precision; callers check their own residual tolerance.
///
/// `fdf(x)` returns {f(x), f'(x)}.
template <class F>
double safeguarded_newton(F&& fdf, double lo, double hi, double x0, int max_iter = 300) {
    constexpr double eps = std::numeric_limits<double>::epsilon();
    auto [flo, dlo] = fdf(lo);
    (void)dlo;
    if (flo == 0.0) return lo;
    auto [fhi, dhi] = fdf(hi);
    (void)dhi;
    if (fhi == 0.0) return hi;

    // Orient so that f(xl) < 0 < f(xh).
    double xl = flo < 0.0 ? lo : hi;
    double xh = flo < 0.0 ? hi : lo;

    double x = x0;
    if (!(x > std::min(lo, hi) && x < std::max(lo, hi))) x = 0.5 * (lo + hi);
    double dx_old = std::abs(hi - lo);
    double dx = dx_old;
    auto [f, df] = fdf(x);
    double best_x = x;
    double best_f = std::abs(f);

    for (int it = 0; it < max_iter; ++it) {
        const bool newton_leaves = ((x - xh) * df - f) * ((x - xl) * df - f) > 0.0;
        const bool newton_slow = std::abs(2.0 * f) > std::abs(dx_old * df);
        if (newton_leaves || newton_slow || df == 0.0) {
            dx_old = dx;
            dx = 0.5 * (xh - xl);
            x = xl + dx;
        } else {
            dx_old = dx;
            dx = f / df;
            x -= dx;
        }
        std::tie(f, df) = fdf(x);
        if (std::abs(f) < best_f) {
            best_f = std::abs(f);
            best_x = x;
        }
        if (f == 0.0) return x;
        if (f < 0.0) {
            xl = x;
        } else {
            xh = x;
        }
        const double scale = std::max(std::abs(x), std::numeric_limits<double>::min());
        if (std::abs(dx) <= 2.0 * eps * scale || std::abs(xh - xl) <= 2.0 * eps * scale) break;
    }
    return best_x;
}

}  // namespace levyqsd::detail
