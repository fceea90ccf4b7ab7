#pragma once

#include <stdexcept>

namespace seqdec {

// Shared numerical policy, referenced by modules and tests alike.
namespace tol {
// Analytic tail mass allowed beyond the cutoff when building states.
inline constexpr double kLeakage = 1e-9;
// Allowed ||U^H U - I||_F restricted to the trusted sector (levels <= d/2).
inline constexpr double kUnitaryDefect = 1e-8;
// Probability mass allowed outside the trusted sector during receiver runs.
inline constexpr double kSectorLeak = 1e-6;
// Gram eigenvalues in [-kPsdFloor, kPsdFloor] are floored to kPsdFloor
// before factorization; anything below -kPsdFloor signals a bug upstream.
inline constexpr double kPsdFloor = 1e-12;
// Trajectory renormalization denominator below this aborts the branch.
inline constexpr double kCollapse = 1e-14;
}  // namespace tol

struct Error : std::runtime_error {
  using std::runtime_error::runtime_error;
};

struct CutoffTooSmall : Error { using Error::Error; };
struct DegenerateBranch : Error { using Error::Error; };
struct DimensionMismatch : Error { using Error::Error; };
struct InvalidParams : Error { using Error::Error; };
struct InvalidOperator : Error { using Error::Error; };
struct UnsupportedFamily : Error { using Error::Error; };
struct UnknownFamily : Error { using Error::Error; };
struct IndexOutOfRange : Error { using Error::Error; };
struct NumericalCollapse : Error { using Error::Error; };
struct BudgetExceeded : Error { using Error::Error; };
struct NotAProjector : Error { using Error::Error; };
struct EnumerationTooLarge : Error { using Error::Error; };

}  // namespace seqdec
