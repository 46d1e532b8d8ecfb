#pragma once

#include <cstddef>
#include <stdexcept>
#include <string>
#include <string_view>

namespace chronofrac {

enum class ErrorCode {
    PointNotInScale,
    NegativeBaseUndefined,
    NoApproach,
    Divergent,
    NotInKappa,
    TablePointMissing,
    UnsupportedDensePath,
    SingularPoint,
    HypothesisViolated,
    WindowEmpty,
    OutsideWindow,
    SyntaxError,
    DivisionByZero,
    DomainError,
    NonDifferentiable,
    ParseError,
    DuplicateTimestampConflict,
    InvalidArgument,
};

constexpr std::string_view to_string(ErrorCode code) noexcept
{
    switch (code) {
    case ErrorCode::PointNotInScale: return "PointNotInScale";
    case ErrorCode::NegativeBaseUndefined: return "NegativeBaseUndefined";
    case ErrorCode::NoApproach: return "NoApproach";
    case ErrorCode::Divergent: return "Divergent";
    case ErrorCode::NotInKappa: return "NotInKappa";
    case ErrorCode::TablePointMissing: return "TablePointMissing";
    case ErrorCode::UnsupportedDensePath: return "UnsupportedDensePath";
    case ErrorCode::SingularPoint: return "SingularPoint";
    case ErrorCode::HypothesisViolated: return "HypothesisViolated";
    case ErrorCode::WindowEmpty: return "WindowEmpty";
    case ErrorCode::OutsideWindow: return "OutsideWindow";
    case ErrorCode::SyntaxError: return "SyntaxError";
    case ErrorCode::DivisionByZero: return "DivisionByZero";
    case ErrorCode::DomainError: return "DomainError";
    case ErrorCode::NonDifferentiable: return "NonDifferentiable";
    case ErrorCode::ParseError: return "ParseError";
    case ErrorCode::DuplicateTimestampConflict: return "DuplicateTimestampConflict";
    case ErrorCode::InvalidArgument: return "InvalidArgument";
    }
    return "Unknown";
}

/// Every failure raised by the library carries one of the codes above.
class Error : public std::runtime_error {
public:
    Error(ErrorCode code, const std::string& what)
        : std::runtime_error(std::string(to_string(code)) + ": " + what), code_(code)
    {
    }

    ErrorCode code() const noexcept { return code_; }

private:
    ErrorCode code_;
};

/// Parse failure with the 0-based character offset where it was detected.
class SyntaxError : public Error {
public:
    SyntaxError(std::size_t position, const std::string& what)
        : Error(ErrorCode::SyntaxError, what + " at position " + std::to_string(position)),
          position_(position)
    {
    }

    std::size_t position() const noexcept { return position_; }

private:
    std::size_t position_;
};

} // namespace chronofrac
