#pragma once

// Closed-form exponents for the built-in families, templated on the scalar
// so the same expressions serve real and complex arguments.

#include <complex>
#include <type_traits>

#include "levyqsd/levy_model.hpp"

namespace levyqsd::detail {

template <class S>
S pow_int(S base, int n) {
    S result(1.0);
    S b = base;
    unsigned e = static_cast<unsigned>(n < 0 ? -n : n);
    while (e != 0U) {
        if ((e & 1U) != 0U) result *= b;
        b *= b;
        e >>= 1U;
    }
    return n < 0 ? S(1.0) / result : result;
}

/// psi(eta) = eta - lambda + lambda (nu / (eta + nu))^k and its derivatives:
/// for j >= 1 the jump part contributes lambda (-1)^j k(k+1)...(k+j-1) nu^k / (eta+nu)^(k+j).
template <class S>
S erlang_exponent(const CompoundPoissonErlang& p, S eta, int order) {
    const S z = eta + p.nu;
    const S rk = pow_int(S(p.nu) / z, p.shape);
    if (order == 0) return eta - p.lambda + p.lambda * rk;
    double rising = 1.0;
    for (int i = 0; i < order; ++i) rising *= static_cast<double>(p.shape + i);
    S jump = p.lambda * rising * rk / pow_int(z, order);
    if (order % 2 == 1) jump = -jump;
    return order == 1 ? S(1.0) + jump : jump;
}

/// Spectrally negative: sigma^2 eta^2 / 2 - c eta. Spectrally positive dual:
/// sigma^2 eta^2 / 2 + c eta.
template <class S>
S brownian_exponent(const LinearBrownian& p, Kind kind, S eta, int order) {
    const double s2 = p.sigma * p.sigma;
    const double lin = kind == Kind::SpectrallyNegative ? -p.c : p.c;
    switch (order) {
        case 0: return 0.5 * s2 * eta * eta + lin * eta;
        case 1: return s2 * eta + lin;
        case 2: return S(s2);
        default: return S(0.0);
    }
}

}  // namespace levyqsd::detail
