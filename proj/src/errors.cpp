#include "esgport/errors.hpp"

namespace esgport {

std::string_view to_string(ErrorCode code) noexcept {
    switch (code) {
    case ErrorCode::InvalidArgument: return "InvalidArgument";
    case ErrorCode::FileNotFound: return "FileNotFound";
    case ErrorCode::ConfigParse: return "ConfigParse";
    case ErrorCode::ParseError: return "ParseError";
    case ErrorCode::InvalidPanel: return "InvalidPanel";
    case ErrorCode::InvalidBar: return "InvalidBar";
    case ErrorCode::IncompleteRow: return "IncompleteRow";
    case ErrorCode::InsufficientOverlap: return "InsufficientOverlap";
    case ErrorCode::InsufficientData: return "InsufficientData";
    case ErrorCode::SeriesTooShort: return "SeriesTooShort";
    case ErrorCode::RangeTooShort: return "RangeTooShort";
    case ErrorCode::WeightsOffSimplex: return "WeightsOffSimplex";
    case ErrorCode::AlphaOutOfRange: return "AlphaOutOfRange";
    case ErrorCode::DegenerateColumn: return "DegenerateColumn";
    case ErrorCode::DegenerateCovariance: return "DegenerateCovariance";
    case ErrorCode::DegenerateDenominator: return "DegenerateDenominator";
    case ErrorCode::SingularSystem: return "SingularSystem";
    case ErrorCode::ZeroVariance: return "ZeroVariance";
    case ErrorCode::NotRepairablePSD: return "NotRepairablePSD";
    }
    return "Unknown";
}

ErrorCategory category_of(ErrorCode code) noexcept {
    switch (code) {
    case ErrorCode::InvalidArgument:
    case ErrorCode::FileNotFound:
    case ErrorCode::ConfigParse:
        return ErrorCategory::Config;
    case ErrorCode::DegenerateColumn:
    case ErrorCode::DegenerateCovariance:
    case ErrorCode::DegenerateDenominator:
    case ErrorCode::SingularSystem:
    case ErrorCode::ZeroVariance:
    case ErrorCode::NotRepairablePSD:
        return ErrorCategory::Numerical;
    default:
        return ErrorCategory::Data;
    }
}

std::string_view to_string(ErrorCategory category) noexcept {
    switch (category) {
    case ErrorCategory::Config: return "config";
    case ErrorCategory::Data: return "data";
    case ErrorCategory::Numerical: return "numerical";
    }
    return "unknown";
}

Error::Error(ErrorCode code, const std::string& message)
    : std::runtime_error(message), code_(code) {}

}  // namespace esgport
