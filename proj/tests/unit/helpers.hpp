#pragma once

#include <cmath>
#include <functional>

#include "levyqsd/levy_model.hpp"

namespace testing {

inline levyqsd::LevyModel brownian_sp() {
    return levyqsd::LevyModel::brownian(levyqsd::Kind::SpectrallyPositive, 1.0, 1.0);
}
inline levyqsd::LevyModel brownian_sn() {
    return levyqsd::LevyModel::brownian(levyqsd::Kind::SpectrallyNegative, 1.0, 1.0);
}
inline levyqsd::LevyModel me2() { return levyqsd::LevyModel::cp_erlang(1.0, 2, 3.0); }

inline double rel(double x, double ref) { return std::abs(x - ref) / std::abs(ref); }

/// Central difference of order 1 with step h.
inline double central_diff(const std::function<double(double)>& f, double x, double h = 1e-4) {
    return (f(x + h) - f(x - h)) / (2.0 * h);
}

/// Golden-section minimisation on [a, b].
inline double golden_min(const std::function<double(double)>& f, double a, double b) {
    const double g = (std::sqrt(5.0) - 1.0) / 2.0;
    double c = b - g * (b - a);
    double d = a + g * (b - a);
    for (int i = 0; i < 200 && b - a > 1e-13; ++i) {
        if (f(c) < f(d)) {
            b = d;
        } else {
            a = c;
        }
        c = b - g * (b - a);
        d = a + g * (b - a);
    }
    return 0.5 * (a + b);
}

/// Composite 4-point Gauss-Legendre on [a, b].
inline double integrate(const std::function<double(double)>& f, double a, double b, int panels = 2000) {
    static const double xg[2] = {0.3399810435848563, 0.8611363115940526};
    static const double wg[2] = {0.6521451548625461, 0.3478548451374538};
    const double hw = 0.5 * (b - a) / panels;
    double sum = 0.0;
    for (int p = 0; p < panels; ++p) {
        const double mid = a + (2 * p + 1) * hw;
        for (int k = 0; k < 2; ++k) sum += wg[k] * hw * (f(mid - hw * xg[k]) + f(mid + hw * xg[k]));
    }
    return sum;
}

/// P(T > t) for the (1, 1) Brownian queue started from its stationary law:
/// the first-passage law of B(s) - s from x averaged over x ~ Exp(2).
inline double brownian_survival(double t) {
    const double st = std::sqrt(t);
    auto ncdf = [](double z) { return 0.5 * std::erfc(-z / std::sqrt(2.0)); };
    auto f = [&](double x) {
        return 2.0 * std::exp(-2.0 * x) * (ncdf((x - t) / st) - std::exp(2.0 * x) * ncdf((-x - t) / st));
    };
    return integrate(f, 0.0, 3.0 * t + 40.0, 4000);
}

}  // namespace testing
