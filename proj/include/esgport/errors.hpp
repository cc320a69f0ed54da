#pragma once

#include <stdexcept>
#include <string>
#include <string_view>

namespace esgport {

/// Coarse failure class; maps onto CLI exit codes 1/2/3.
enum class ErrorCategory { Config = 1, Data = 2, Numerical = 3 };

enum class ErrorCode {
    // configuration / usage
    InvalidArgument,
    FileNotFound,
    ConfigParse,
    // data
    ParseError,
    InvalidPanel,
    InvalidBar,
    IncompleteRow,
    InsufficientOverlap,
    InsufficientData,
    SeriesTooShort,
    RangeTooShort,
    WeightsOffSimplex,
    AlphaOutOfRange,
    // numerical
    DegenerateColumn,
    DegenerateCovariance,
    DegenerateDenominator,
    SingularSystem,
    ZeroVariance,
    NotRepairablePSD,
};

std::string_view to_string(ErrorCode code) noexcept;
ErrorCategory category_of(ErrorCode code) noexcept;
std::string_view to_string(ErrorCategory category) noexcept;

/// Single exception type carrying a machine-readable code.
class Error : public std::runtime_error {
public:
    Error(ErrorCode code, const std::string& message);

    ErrorCode code() const noexcept { return code_; }
    ErrorCategory category() const noexcept { return category_of(code_); }

private:
    ErrorCode code_;
};

}  // namespace esgport
