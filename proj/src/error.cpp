#include "levyqsd/error.hpp"

namespace levyqsd {

std::string_view to_string(ErrorCode code) noexcept {
    switch (code) {
        case ErrorCode::DomainError: return "DomainError";
        case ErrorCode::UnsupportedOrder: return "UnsupportedOrder";
        case ErrorCode::NoInteriorMinimum: return "NoInteriorMinimum";
        case ErrorCode::NotStrictlyNegative: return "NotStrictlyNegative";
        case ErrorCode::BelowBranchPoint: return "BelowBranchPoint";
        case ErrorCode::SingularDenominator: return "SingularDenominator";
        case ErrorCode::WrongKind: return "WrongKind";
        case ErrorCode::ConvergenceFailure: return "ConvergenceFailure";
        case ErrorCode::Unsupported: return "Unsupported";
        case ErrorCode::InvalidInitial: return "InvalidInitial";
        case ErrorCode::DegenerateSample: return "DegenerateSample";
        case ErrorCode::InvalidModel: return "InvalidModel";
        case ErrorCode::NotCertified: return "NotCertified";
        case ErrorCode::SchemaError: return "SchemaError";
        case ErrorCode::IoError: return "IoError";
    }
    return "UnknownError";
}

}  // namespace levyqsd
