#pragma once

#include <complex>
#include <functional>

namespace levyqsd {

/// Settings for Bromwich inversion with Euler summation.
struct EulerSettings {
    /// Total number of transform evaluations; the last 11 + 1 feed the
    /// binomial averaging and the error estimate.
    int terms = 41;
    /// Contour sits at Re s = sigma0 + shift / t.
    double shift = 11.5;
};

inline constexpr int kEulerBinomialOrder = 11;

struct EulerResult {
    double value = 0.0;
    /// Difference of the last two Euler averages.
    double error = 0.0;
};

/// Inverts a transform F with conjugate symmetry F(conj s) = conj F(s), so the
/// original is real. sigma0 must lie right of every singularity of F minus
/// shift / t. Nodes are visited in increasing imaginary part.
[[nodiscard]] EulerResult euler_invert(const std::function<std::complex<double>(std::complex<double>)>& f,
                                       double t, double sigma0, const EulerSettings& settings);

/// Variant for transforms without conjugate symmetry: the node at conj(s) is
/// evaluated too, and the complex original is returned.
struct EulerComplexResult {
    std::complex<double> value;
    double error = 0.0;
};

[[nodiscard]] EulerComplexResult euler_invert_complex(
    const std::function<std::complex<double>(std::complex<double>)>& f, double t, double sigma0,
    const EulerSettings& settings);

}  // namespace levyqsd
