#pragma once

#include <stdexcept>
#include <string>
#include <string_view>

namespace osidh {

enum class ErrorKind {
    NotPrime,
    TooSmall,
    TooLarge,
    DivisionByZero,
    ParseError,
    MissingLevel,
    ValidationFailed,
    NotSplit,
    DepthMismatch,
    NotFound,
    BadOrientation,
    BadKernel,
    EigenvalueAmbiguous,
    DegreesNotCoprime,
    NoMatchingKernel,
    NoRoots,
    ParentNotAdjacent,
    PrefixCollision,
    PrefixMissing,
    Ambiguous,
    Inconsistent,
    ChainExhausted,
    Malformed,
    InvariantViolation,
    NoCandidateSurvives,
    SmoothSearchExhausted,
    TooDeep,
    InvalidArgument,
};

std::string_view to_string(ErrorKind kind);

/// Every failure raised by the library carries a machine-readable kind.
class Error : public std::runtime_error {
  public:
    Error(ErrorKind kind, const std::string &what)
        : std::runtime_error(what), _kind(kind) {}

    ErrorKind kind() const noexcept { return _kind; }

  private:
    ErrorKind _kind;
};

[[noreturn]] inline void fail(ErrorKind kind, const std::string &what)
{
    throw Error(kind, what);
}

}  // namespace osidh
