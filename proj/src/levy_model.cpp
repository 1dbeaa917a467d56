#include "levyqsd/levy_model.hpp"

#include <cmath>
#include <sstream>

#include "levyqsd/error.hpp"

namespace levyqsd {

namespace {

bool positive_finite(double x) { return std::isfinite(x) && x > 0.0; }

void validate(Kind kind, const CompoundPoissonErlang& p) {
    if (kind != Kind::SpectrallyPositive) {
        throw Error(ErrorCode::InvalidModel,
                    "compound Poisson Erlang netput has upward jumps; use the spectrally positive kind");
    }
    if (!positive_finite(p.lambda)) throw Error(ErrorCode::InvalidModel, "lambda must be > 0");
    if (!positive_finite(p.nu)) throw Error(ErrorCode::InvalidModel, "nu must be > 0");
    if (p.shape < 1) throw Error(ErrorCode::InvalidModel, "Erlang shape must be a positive integer");
}

void validate(Kind, const LinearBrownian& p) {
    if (!positive_finite(p.sigma)) throw Error(ErrorCode::InvalidModel, "sigma must be > 0");
    if (!std::isfinite(p.c) || p.c < 0.0) throw Error(ErrorCode::InvalidModel, "c must be >= 0");
}

void validate(Kind, const GenericExponent& g) {
    if (!g.psi) throw Error(ErrorCode::InvalidModel, "generic exponent needs psi");
    for (const auto& d : g.derivs) {
        if (!d) throw Error(ErrorCode::InvalidModel, "generic exponent needs derivatives of order 1..4");
    }
    if (!(g.domain_lo < 0.0 && g.domain_hi > 0.0)) {
        throw Error(ErrorCode::InvalidModel, "generic exponent domain must contain 0");
    }
    const double at_zero = g.psi(0.0);
    if (!(std::abs(at_zero) <= 1e-12)) {
        throw Error(ErrorCode::InvalidModel, "generic exponent must satisfy psi(0) = 0");
    }
}

}  // namespace

LevyModel::LevyModel(Kind kind, Family family) : kind_(kind), family_(std::move(family)) {
    std::visit([this](const auto& f) { validate(kind_, f); }, family_);
}

LevyModel LevyModel::cp_erlang(double lambda, int shape, double nu) {
    return LevyModel(Kind::SpectrallyPositive, CompoundPoissonErlang{lambda, shape, nu});
}

LevyModel LevyModel::brownian(Kind kind, double sigma, double c) {
    return LevyModel(kind, LinearBrownian{sigma, c});
}

LevyModel LevyModel::generic(Kind kind, GenericExponent exponent) {
    return LevyModel(kind, std::move(exponent));
}

Interval LevyModel::domain() const noexcept {
    if (const auto* cp = std::get_if<CompoundPoissonErlang>(&family_)) {
        return Interval{-cp->nu, std::numeric_limits<double>::infinity()};
    }
    if (const auto* g = std::get_if<GenericExponent>(&family_)) {
        return Interval{g->domain_lo, g->domain_hi};
    }
    return Interval{};
}

bool LevyModel::supports_complex() const noexcept { return !is_generic(); }

std::string LevyModel::describe() const {
    std::ostringstream os;
    os.precision(17);
    os << to_string(kind_) << ' ';
    if (const auto* cp = std::get_if<CompoundPoissonErlang>(&family_)) {
        os << "cp_erlang(lambda=" << cp->lambda << ", shape=" << cp->shape << ", nu=" << cp->nu << ')';
    } else if (const auto* b = std::get_if<LinearBrownian>(&family_)) {
        os << "brownian(sigma=" << b->sigma << ", c=" << b->c << ')';
    } else {
        os << std::get<GenericExponent>(family_).label;
    }
    return os.str();
}

std::string_view to_string(Kind kind) noexcept {
    return kind == Kind::SpectrallyNegative ? "sn" : "sp";
}

}  // namespace levyqsd
