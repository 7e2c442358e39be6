#pragma once

#include <stdexcept>
#include <string>

namespace lsalab {

// Base class for all library errors. Subclasses mirror the failure modes of
// the individual operations so callers can catch them selectively.
class Error : public std::runtime_error {
public:
    explicit Error(const std::string& what) : std::runtime_error(what) {}
};

struct DimMismatchError : Error { using Error::Error; };
struct SingularMatrixError : Error { using Error::Error; };
struct NotHurwitzError : Error { using Error::Error; };
struct IllConditionedError : Error { using Error::Error; };
struct QNotPdError : Error { using Error::Error; };
struct AlphaOutOfRangeError : Error { using Error::Error; };
struct LemmaViolationError : Error { using Error::Error; };

struct NotStochasticError : Error { using Error::Error; };
struct BadTailError : Error { using Error::Error; };
struct UnstableError : Error { using Error::Error; };
struct ReducibleError : Error { using Error::Error; };
struct PeriodicError : Error { using Error::Error; };
struct MethodUnavailableError : Error { using Error::Error; };

struct NotNonIncreasingError : Error { using Error::Error; };
struct NotSquareSummableError : Error { using Error::Error; };
struct StepTooLargeError : Error { using Error::Error; };
struct HypothesisFailedError : Error { using Error::Error; };

struct MissingSmallSetError : Error { using Error::Error; };
struct RangeViolationError : Error { using Error::Error; };
struct NoFeasibleBetaError : Error { using Error::Error; };

struct SingularAError : Error { using Error::Error; };
struct AveragingNotConvergedError : Error { using Error::Error; };

struct OverflowError : Error { using Error::Error; };
struct StepAboveCapError : Error { using Error::Error; };
struct DegenerateWindowError : Error { using Error::Error; };
struct EpsilonTooLargeError : Error { using Error::Error; };

struct WindowLengthMismatchError : Error { using Error::Error; };
struct BoundViolatedError : Error { using Error::Error; };

struct ConfigError : Error { using Error::Error; };
struct IoError : Error { using Error::Error; };

} // namespace lsalab
