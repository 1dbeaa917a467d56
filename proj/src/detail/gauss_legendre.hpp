#pragma once

#include <array>
#include <cmath>
#include <cstddef>

namespace levyqsd::detail {

/// N-point Gauss-Legendre rule mapped to [0, 1].
template <std::size_t N>
struct GaussLegendre01 {
    std::array<double, N> nodes{};
    std::array<double, N> weights{};

    GaussLegendre01() {
        const double pi = std::acos(-1.0);
        for (std::size_t i = 0; i < N; ++i) {
            double x = std::cos(pi * (static_cast<double>(i) + 0.75) / (static_cast<double>(N) + 0.5));
            double dp = 0.0;
            for (int it = 0; it < 100; ++it) {
                double p0 = 1.0;
                double p1 = x;
                for (std::size_t k = 2; k <= N; ++k) {
                    const double kk = static_cast<double>(k);
                    const double p2 = ((2.0 * kk - 1.0) * x * p1 - (kk - 1.0) * p0) / kk;
                    p0 = p1;
                    p1 = p2;
                }
                dp = static_cast<double>(N) * (x * p1 - p0) / (x * x - 1.0);
                const double dx = p1 / dp;
                x -= dx;
                if (std::abs(dx) < 1e-16) break;
            }
            nodes[i] = 0.5 * (1.0 - x);
            weights[i] = 1.0 / ((1.0 - x * x) * dp * dp);
        }
    }
};

inline const GaussLegendre01<24>& gauss_legendre_24() {
    static const GaussLegendre01<24> rule;
    return rule;
}

}  // namespace levyqsd::detail
