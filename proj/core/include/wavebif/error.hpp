#pragma once

#include <stdexcept>
#include <string>
#include <string_view>

namespace wavebif {

enum class ErrorCode {
    NonPositiveK,
    RealityViolation,
    TruncationOverflow,
    AliasingDetected,
    KernelModePresent,
    SingularDivisor,
    ResonantDenominator,
    ContractionFailure,
    MaxIterExceeded,
    DomainViolation,
    BracketLost,
    InvalidParams,
};

std::string_view to_string(ErrorCode code) noexcept;

/// Every failure raised by the library carries one of the codes above; the
/// CLI maps them to exit codes and prints the name.
class Error : public std::runtime_error {
public:
    Error(ErrorCode code, const std::string& message);

    [[nodiscard]] ErrorCode code() const noexcept { return code_; }

private:
    ErrorCode code_;
};

}  // namespace wavebif
