#pragma once

#include <stdexcept>
#include <string>

namespace fanomom {

/// Typed failure conditions.  Config-class codes mean the request itself was
/// malformed (CLI exit 1); check-class codes mean a numerical precondition or
/// certification failed on an otherwise well-formed request (CLI exit 2).
enum class ErrorCode {
    // configuration / input shape
    BadInput,
    BadRational,
    NonIncreasingNodes,
    NegativeMass,
    DomainError,
    OrderUnsupported,
    NonIntegralWeights,
    DegenerateBody,
    ConvexityViolated,
    // representation / certification
    MixedRepresentation,
    InsufficientSupport,
    DivergentMoment,
    DivergentTilt,
    DivergentZeta,
    ZeroFirstMoment,
    SupportMismatch,
    GridTooCoarse,
    NearPole,
    PoleNotBracketed,
    NoConvergence,
    QuadratureFailure,
};

const char* error_code_name(ErrorCode c);

class Error : public std::runtime_error {
public:
    Error(ErrorCode code, const std::string& what)
        : std::runtime_error(std::string(error_code_name(code)) + ": " + what),
          code_(code) {}
    ErrorCode code() const { return code_; }

    /// True for codes that indicate a malformed request rather than a failed
    /// numerical certification.
    bool is_config_error() const {
        switch (code_) {
        case ErrorCode::BadInput:
        case ErrorCode::BadRational:
        case ErrorCode::NonIncreasingNodes:
        case ErrorCode::NegativeMass:
        case ErrorCode::DomainError:
        case ErrorCode::OrderUnsupported:
        case ErrorCode::NonIntegralWeights:
        case ErrorCode::DegenerateBody:
        case ErrorCode::ConvexityViolated:
            return true;
        default:
            return false;
        }
    }

private:
    ErrorCode code_;
};

inline const char* error_code_name(ErrorCode c) {
    switch (c) {
    case ErrorCode::BadInput:            return "BadInput";
    case ErrorCode::BadRational:         return "BadRational";
    case ErrorCode::NonIncreasingNodes:  return "NonIncreasingNodes";
    case ErrorCode::NegativeMass:        return "NegativeMass";
    case ErrorCode::DomainError:         return "DomainError";
    case ErrorCode::OrderUnsupported:    return "OrderUnsupported";
    case ErrorCode::NonIntegralWeights:  return "NonIntegralWeights";
    case ErrorCode::DegenerateBody:      return "DegenerateBody";
    case ErrorCode::ConvexityViolated:   return "ConvexityViolated";
    case ErrorCode::MixedRepresentation: return "MixedRepresentation";
    case ErrorCode::InsufficientSupport: return "InsufficientSupport";
    case ErrorCode::DivergentMoment:     return "DivergentMoment";
    case ErrorCode::DivergentTilt:       return "DivergentTilt";
    case ErrorCode::DivergentZeta:       return "DivergentZeta";
    case ErrorCode::ZeroFirstMoment:     return "ZeroFirstMoment";
    case ErrorCode::SupportMismatch:     return "SupportMismatch";
    case ErrorCode::GridTooCoarse:       return "GridTooCoarse";
    case ErrorCode::NearPole:            return "NearPole";
    case ErrorCode::PoleNotBracketed:    return "PoleNotBracketed";
    case ErrorCode::NoConvergence:       return "NoConvergence";
    case ErrorCode::QuadratureFailure:   return "QuadratureFailure";
    }
    return "UnknownError";
}

}  // namespace fanomom
