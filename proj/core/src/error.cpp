#include "wavebif/error.hpp"

namespace wavebif {

std::string_view to_string(ErrorCode code) noexcept {
    switch (code) {
        case ErrorCode::NonPositiveK: return "NonPositiveK";
        case ErrorCode::RealityViolation: return "RealityViolation";
        case ErrorCode::TruncationOverflow: return "TruncationOverflow";
        case ErrorCode::AliasingDetected: return "AliasingDetected";
        case ErrorCode::KernelModePresent: return "KernelModePresent";
        case ErrorCode::SingularDivisor: return "SingularDivisor";
        case ErrorCode::ResonantDenominator: return "ResonantDenominator";
        case ErrorCode::ContractionFailure: return "ContractionFailure";
        case ErrorCode::MaxIterExceeded: return "MaxIterExceeded";
        case ErrorCode::DomainViolation: return "DomainViolation";
        case ErrorCode::BracketLost: return "BracketLost";
        case ErrorCode::InvalidParams: return "InvalidParams";
    }
    return "Unknown";
}

Error::Error(ErrorCode code, const std::string& message)
    : std::runtime_error(std::string(to_string(code)) + ": " + message), code_(code) {}

}  // namespace wavebif
