#pragma once

#include <stdexcept>
#include <string>

namespace looplab {

struct Error : std::runtime_error {
    explicit Error(const std::string& w) : std::runtime_error(w) {}
};

struct DimensionMismatch : Error { using Error::Error; };
struct SingularOnCircle : Error { using Error::Error; };
struct LowerStratumError : Error { using Error::Error; };
struct Degenerate : Error { using Error::Error; };
struct DegenerateDn : Error { using Error::Error; };
struct DegenerateDenominator : Error { using Error::Error; };
struct StepTooLarge : Error { using Error::Error; };
struct RejectionStall : Error { using Error::Error; };
struct TruncationInsufficient : Error { using Error::Error; };
struct AliasingExcessive : Error { using Error::Error; };
struct QuadratureNonconvergent : Error { using Error::Error; };
struct StepSizeUnstable : Error { using Error::Error; };
struct InsufficientSamples : Error { using Error::Error; };
struct UnnormalizableTag : Error { using Error::Error; };
struct UsageError : Error { using Error::Error; };

} // namespace looplab
