#include "levyqsd/euler_inversion.hpp"

#include <array>
#include <cmath>
#include <vector>

#include "levyqsd/error.hpp"

namespace levyqsd {

namespace {

using Complex = std::complex<double>;

void check_settings(double t, const EulerSettings& s) {
    if (!(t > 0.0) || !std::isfinite(t)) throw Error(ErrorCode::DomainError, "inversion time must be > 0");
    if (s.terms < kEulerBinomialOrder + 3) {
        throw Error(ErrorCode::DomainError, "Euler inversion needs at least 14 terms");
    }
    if (!(s.shift > 0.0)) throw Error(ErrorCode::DomainError, "abscissa shift must be > 0");
}

const std::array<double, kEulerBinomialOrder + 1>& binomial_weights() {
    static const auto w = [] {
        std::array<double, kEulerBinomialOrder + 1> out{};
        double c = 1.0;
        for (int j = 0; j <= kEulerBinomialOrder; ++j) {
            out[static_cast<std::size_t>(j)] = c / std::ldexp(1.0, kEulerBinomialOrder);
            c = c * (kEulerBinomialOrder - j) / (j + 1);
        }
        return out;
    }();
    return w;
}

/// Euler averages of the partial sums of `a`: returns {E(m, n+1), E(m, n+1) - E(m, n)}.
template <class T>
std::pair<T, double> euler_average(const std::vector<T>& a) {
    const std::size_t total = a.size();
    std::vector<T> partial(total);
    T run{};
    for (std::size_t k = 0; k < total; ++k) {
        run += a[k];
        partial[k] = run;
    }
    const std::size_t m = kEulerBinomialOrder;
    const std::size_t n = total - m - 2;
    const auto& w = binomial_weights();
    T e0{};
    T e1{};
    for (std::size_t j = 0; j <= m; ++j) {
        e0 += w[j] * partial[n + j];
        e1 += w[j] * partial[n + 1 + j];
    }
    return {e1, std::abs(e1 - e0)};
}

}  // namespace

EulerResult euler_invert(const std::function<Complex(Complex)>& f, double t, double sigma0,
                         const EulerSettings& settings) {
    check_settings(t, settings);
    const double pi = std::acos(-1.0);
    const auto total = static_cast<std::size_t>(settings.terms);
    std::vector<double> a(total);
    for (std::size_t k = 0; k < total; ++k) {
        const Complex s{sigma0 + settings.shift / t, pi * static_cast<double>(k) / t};
        const double re = f(s).real();
        a[k] = k == 0 ? 0.5 * re : ((k % 2 == 1) ? -re : re);
    }
    const auto [sum, diff] = euler_average(a);
    const double scale = std::exp(settings.shift + sigma0 * t) / t;
    return EulerResult{scale * sum, scale * diff};
}

EulerComplexResult euler_invert_complex(const std::function<Complex(Complex)>& f, double t, double sigma0,
                                        const EulerSettings& settings) {
    check_settings(t, settings);
    const double pi = std::acos(-1.0);
    const auto total = static_cast<std::size_t>(settings.terms);
    std::vector<Complex> a(total);
    for (std::size_t k = 0; k < total; ++k) {
        const Complex s{sigma0 + settings.shift / t, pi * static_cast<double>(k) / t};
        const Complex v = k == 0 ? 0.5 * f(s) : 0.5 * (f(s) + f(std::conj(s)));
        a[k] = (k % 2 == 1) ? -v : v;
    }
    const auto [sum, diff] = euler_average(a);
    const double scale = std::exp(settings.shift + sigma0 * t) / t;
    return EulerComplexResult{scale * sum, scale * diff};
}

}  // namespace levyqsd
