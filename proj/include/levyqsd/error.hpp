#pragma once

#include <stdexcept>
#include <string>
#include <string_view>

namespace levyqsd {

enum class ErrorCode {
    DomainError,
    UnsupportedOrder,
    NoInteriorMinimum,
    NotStrictlyNegative,
    BelowBranchPoint,
    SingularDenominator,
    WrongKind,
    ConvergenceFailure,
    Unsupported,
    InvalidInitial,
    DegenerateSample,
    InvalidModel,
    NotCertified,
    SchemaError,
    IoError,
};

[[nodiscard]] std::string_view to_string(ErrorCode code) noexcept;

/// Base exception for every failure raised by the library. The code lets
/// callers (the CLI in particular) map failures onto exit statuses.
class Error : public std::runtime_error {
public:
    Error(ErrorCode code, const std::string& what)
        : std::runtime_error(std::string(to_string(code)) + ": " + what), code_(code) {}

    [[nodiscard]] ErrorCode code() const noexcept { return code_; }

private:
    ErrorCode code_;
};

}  // namespace levyqsd
