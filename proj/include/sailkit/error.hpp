#pragma once

#include <stdexcept>
#include <string>
#include <string_view>

namespace sailkit {

enum class ErrorKind {
    InvalidDenominator,
    DivisionByZero,
    SquarefreeViolation,
    UnsupportedDegree,
    Domain,
    RationalInput,
    DegenerateSegment,
    DegenerateAngle,
    TooShort,
    RegionTooSmall,
    BoundExhausted,
    Internal,
    Parse,
};

inline std::string_view to_string(ErrorKind k) {
    switch (k) {
    case ErrorKind::InvalidDenominator: return "invalid-denominator";
    case ErrorKind::DivisionByZero: return "division-by-zero";
    case ErrorKind::SquarefreeViolation: return "squarefree-violation";
    case ErrorKind::UnsupportedDegree: return "unsupported-degree";
    case ErrorKind::Domain: return "domain";
    case ErrorKind::RationalInput: return "rational-input";
    case ErrorKind::DegenerateSegment: return "degenerate-segment";
    case ErrorKind::DegenerateAngle: return "degenerate-angle";
    case ErrorKind::TooShort: return "too-short";
    case ErrorKind::RegionTooSmall: return "region-too-small";
    case ErrorKind::BoundExhausted: return "bound-exhausted";
    case ErrorKind::Internal: return "internal-inconsistency";
    case ErrorKind::Parse: return "parse";
    }
    return "unknown";
}

/// Every failure raised by the library carries a machine-readable kind.
class Error : public std::runtime_error {
public:
    Error(ErrorKind kind, const std::string& what)
        : std::runtime_error(what), kind_(kind) {}

    ErrorKind kind() const noexcept { return kind_; }

private:
    ErrorKind kind_;
};

[[noreturn]] inline void fail(ErrorKind kind, const std::string& what) {
    throw Error(kind, what);
}

} // namespace sailkit
