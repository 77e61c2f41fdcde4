#include "osidh/error.hpp"

namespace osidh {

std::string_view to_string(ErrorKind kind)
{
    switch (kind) {
    case ErrorKind::NotPrime: return "NotPrime";
    case ErrorKind::TooSmall: return "TooSmall";
    case ErrorKind::TooLarge: return "TooLarge";
    case ErrorKind::DivisionByZero: return "DivisionByZero";
    case ErrorKind::ParseError: return "ParseError";
    case ErrorKind::MissingLevel: return "MissingLevel";
    case ErrorKind::ValidationFailed: return "ValidationFailed";
    case ErrorKind::NotSplit: return "NotSplit";
    case ErrorKind::DepthMismatch: return "DepthMismatch";
    case ErrorKind::NotFound: return "NotFound";
    case ErrorKind::BadOrientation: return "BadOrientation";
    case ErrorKind::BadKernel: return "BadKernel";
    case ErrorKind::EigenvalueAmbiguous: return "EigenvalueAmbiguous";
    case ErrorKind::DegreesNotCoprime: return "DegreesNotCoprime";
    case ErrorKind::NoMatchingKernel: return "NoMatchingKernel";
    case ErrorKind::NoRoots: return "NoRoots";
    case ErrorKind::ParentNotAdjacent: return "ParentNotAdjacent";
    case ErrorKind::PrefixCollision: return "PrefixCollision";
    case ErrorKind::PrefixMissing: return "PrefixMissing";
    case ErrorKind::Ambiguous: return "Ambiguous";
    case ErrorKind::Inconsistent: return "Inconsistent";
    case ErrorKind::ChainExhausted: return "ChainExhausted";
    case ErrorKind::Malformed: return "Malformed";
    case ErrorKind::InvariantViolation: return "InvariantViolation";
    case ErrorKind::NoCandidateSurvives: return "NoCandidateSurvives";
    case ErrorKind::SmoothSearchExhausted: return "SmoothSearchExhausted";
    case ErrorKind::TooDeep: return "TooDeep";
    case ErrorKind::InvalidArgument: return "InvalidArgument";
    }
    return "Unknown";
}

}  // namespace osidh
