#pragma once

#include <array>
#include <functional>
#include <limits>
#include <string>
#include <variant>

namespace levyqsd {

/// Which one-sided class the exponent describes.
///
/// SpectrallyNegative: psi(eta) = log E exp(eta X(1)) for a netput X with
/// non-positive jumps. SpectrallyPositive: the exponent of the dual,
/// psi(eta) = log E exp(-eta X(1)), for a netput X with non-negative jumps.
/// In both cases the workload is Q = X reflected at 0 and every routine in
/// the library works with the exponent selected by the kind.
enum class Kind { SpectrallyNegative, SpectrallyPositive };

/// X(t) = sum_{i <= N(t)} sigma_i - t with N Poisson(lambda) and
/// sigma_i ~ Erlang(shape, nu). Spectrally positive only.
struct CompoundPoissonErlang {
    double lambda = 1.0;
    int shape = 2;
    double nu = 3.0;

    [[nodiscard]] double load() const noexcept { return lambda * shape / nu; }
};

/// X(t) = sigma B(t) - c t. Usable with either kind.
struct LinearBrownian {
    double sigma = 1.0;
    double c = 1.0;
};

/// User-supplied exponent. `derivs[j]` is the (j+1)-th derivative. All
/// callables must be re-entrant. Only real arguments are supported, so
/// complex-plane operations (numerical inversion, densities) are unavailable.
struct GenericExponent {
    std::function<double(double)> psi;
    std::array<std::function<double(double)>, 4> derivs;
    double domain_lo = -std::numeric_limits<double>::infinity();
    double domain_hi = std::numeric_limits<double>::infinity();
    bool analyticity_asserted = false;
    std::string label = "generic";
};

using Family = std::variant<CompoundPoissonErlang, LinearBrownian, GenericExponent>;

/// Open interval on which the exponent is finite.
struct Interval {
    double lo = -std::numeric_limits<double>::infinity();
    double hi = std::numeric_limits<double>::infinity();

    [[nodiscard]] bool contains(double x) const noexcept { return x > lo && x < hi; }
};

class LevyModel {
public:
    /// Validates parameters; throws Error(InvalidModel) on bad input.
    LevyModel(Kind kind, Family family);

    static LevyModel cp_erlang(double lambda, int shape, double nu);
    static LevyModel brownian(Kind kind, double sigma, double c);
    static LevyModel generic(Kind kind, GenericExponent exponent);

    [[nodiscard]] Kind kind() const noexcept { return kind_; }
    [[nodiscard]] const Family& family() const noexcept { return family_; }
    [[nodiscard]] Interval domain() const noexcept;

    /// True when the exponent has a closed form that can be evaluated at
    /// complex arguments.
    [[nodiscard]] bool supports_complex() const noexcept;

    [[nodiscard]] bool is_brownian() const noexcept {
        return std::holds_alternative<LinearBrownian>(family_);
    }
    [[nodiscard]] bool is_cp_erlang() const noexcept {
        return std::holds_alternative<CompoundPoissonErlang>(family_);
    }
    [[nodiscard]] bool is_generic() const noexcept {
        return std::holds_alternative<GenericExponent>(family_);
    }

    [[nodiscard]] std::string describe() const;

private:
    Kind kind_;
    Family family_;
};

[[nodiscard]] std::string_view to_string(Kind kind) noexcept;

}  // namespace levyqsd
