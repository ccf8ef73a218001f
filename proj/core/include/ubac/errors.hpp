#pragma once

#include <stdexcept>
#include <string>

namespace ubac {

struct Error : std::runtime_error {
    using std::runtime_error::runtime_error;
};

// degree distributions
struct NegativeFraction : Error { using Error::Error; };
struct SumNotOne : Error { using Error::Error; };
struct ZeroDegree : Error { using Error::Error; };
struct DegreeNotAllowed : Error { using Error::Error; };
struct PerspectiveMismatch : Error { using Error::Error; };
struct RateOutOfRange : Error { using Error::Error; };
struct DomainError : Error { using Error::Error; };

// optimizer
struct Infeasible : Error { using Error::Error; };
struct Stalled : Error { using Error::Error; };

// graphs
struct DegreeAssignmentOverflow : Error { using Error::Error; };
struct TauOutOfRange : Error { using Error::Error; };
struct ExpurgationBudgetExceeded : Error { using Error::Error; };

// channel / decoding
struct LengthMismatch : Error { using Error::Error; };
struct MalformedObservation : Error { using Error::Error; };
struct ObservationInconsistent : Error { using Error::Error; };
struct InconsistentObservation : Error { using Error::Error; };

// gf2
struct DimensionMismatch : Error { using Error::Error; };
struct RankDeficient : Error { using Error::Error; };

// harness
struct DuplicateLabel : Error { using Error::Error; };
struct ConfigError : Error { using Error::Error; };

}  // namespace ubac
