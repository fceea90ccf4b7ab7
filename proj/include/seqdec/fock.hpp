#pragma once

#include <complex>
#include <optional>
#include <utility>

#include <Eigen/Dense>

#include "seqdec/common.hpp"

// Truncated Fock-space numerics: states, Gaussian-unitary matrices, the
// vacuum-or-not measurement with back-action, and state functionals.
// Multimode amplitudes are stored with mode 0 most significant, i.e.
// index = n_0 * d^(m-1) + ... + n_{m-1}, matching Kronecker-product order.
namespace seqdec::fock {

using Complex = std::complex<double>;
using Vector = Eigen::VectorXcd;
using Matrix = Eigen::MatrixXcd;

// Per-mode basis size; levels 0..d-1.
struct FockCutoff {
  int d;
  explicit FockCutoff(int levels) : d(levels) {
    if (d < 2) throw InvalidParams("FockCutoff: need at least 2 levels");
  }
};

struct TruncatedState {
  int modes;
  FockCutoff cutoff;
  Vector amps;  // length d^modes

  Eigen::Index dim() const { return amps.size(); }
  double norm_sq() const { return amps.squaredNorm(); }
  TruncatedState& normalize();
};

TruncatedState vacuum_state(int modes, FockCutoff cutoff);
TruncatedState tensor(const TruncatedState& a, const TruncatedState& b);
Complex inner(const TruncatedState& a, const TruncatedState& b);

struct DensityMatrix {
  int modes;
  FockCutoff cutoff;
  Matrix rho;
};

// --- cutoff selection -------------------------------------------------------
//
// The leakage rule: a state may be built at cutoff d only if the analytic
// tail mass beyond level d-1 is below tol::kLeakage (Poisson tail for
// coherent states, geometric tail for thermal/TMSV weights). The *_cutoff
// functions return the smallest admissible d.

double poisson_tail(double lambda, int d);    // P[X >= d], X ~ Poisson(lambda)
double geometric_tail(double ns, int d);      // sum_{n>=d} ns^n/(ns+1)^{n+1}
int poisson_levels(double lambda, double tail_tol = tol::kLeakage);
int geometric_levels(double ns, double tail_tol = tol::kLeakage);
FockCutoff coherent_cutoff(Complex alpha, double tail_tol = tol::kLeakage);
FockCutoff thermal_cutoff(double ns, double tail_tol = tol::kLeakage);

// --- states -----------------------------------------------------------------

// Single-mode coherent state, amplitudes exp(-|a|^2/2) a^n/sqrt(n!),
// renormalized within the truncation. Throws CutoffTooSmall when the
// Poisson tail beyond d exceeds tol::kLeakage.
TruncatedState coherent_state(Complex alpha, FockCutoff cutoff);

// Thermal state with mean photon number ns, diagonal ns^n/(ns+1)^{n+1}
// renormalized over the cutoff. Throws CutoffTooSmall per the leakage rule.
DensityMatrix thermal_state(double ns, FockCutoff cutoff);

// --- Gaussian unitaries ------------------------------------------------------

struct GaussianUnitarySpec {
  enum class Kind { kDisplace, kPhase, kSqueeze2 };
  Kind kind;
  Complex alpha{0.0, 0.0};  // displace
  double theta = 0.0;       // phase, radians
  double r = 0.0;           // squeeze2 strength, ns = sinh^2 r

  static GaussianUnitarySpec displace(Complex a) {
    return {Kind::kDisplace, a, 0.0, 0.0};
  }
  static GaussianUnitarySpec phase(double t) {
    return {Kind::kPhase, {0.0, 0.0}, t, 0.0};
  }
  static GaussianUnitarySpec squeeze2(double r) {
    if (r < 0.0) throw InvalidParams("squeeze2: r must be nonnegative");
    return {Kind::kSqueeze2, {0.0, 0.0}, 0.0, r};
  }
  // Modes the matrix acts on: 1 for displace/phase, 2 for squeeze2.
  int arity() const { return kind == Kind::kSqueeze2 ? 2 : 1; }
};

// Cutoff-truncated unitary, built by exponentiating the truncated generator
// (scaling-and-squaring). d x d for single-mode kinds, d^2 x d^2 for
// squeeze2. The truncated generators are skew-Hermitian, so the result is
// unitary on the whole truncated space; the defect check on the trusted
// sector (levels <= d/2) guards the construction and throws CutoffTooSmall
// if it cannot be met.
Matrix gaussian_unitary(const GaussianUnitarySpec& spec, FockCutoff cutoff);

// Action of squeeze2(r) restricted to the photon-number-difference-zero
// sector span{|n,n>}, as a d x d matrix over the sector level n. Exact on
// that sector: the full generator preserves it.
Matrix squeeze2_diagonal_block(double r, FockCutoff cutoff);

// Apply a d x d single-mode operator to one mode of a multimode state.
TruncatedState apply_single_mode(const TruncatedState& state, const Matrix& u, int mode);
// Apply a d^2 x d^2 operator to the adjacent mode pair (mode, mode+1).
TruncatedState apply_adjacent_pair(const TruncatedState& state, const Matrix& u, int mode);

// --- vacuum-or-not measurement ----------------------------------------------

enum class Branch { kVacuum, kNotVacuum };

struct MeasurementOutcome {
  Branch branch;
  double probability;
  TruncatedState post_state;
};

struct VacuumOrNot {
  MeasurementOutcome vacuum;
  std::optional<MeasurementOutcome> not_vacuum;  // absent when 1-|c|^2 < 1e-12

  const MeasurementOutcome& not_vacuum_or_throw() const {
    if (!not_vacuum)
      throw DegenerateBranch("vacuum_or_not: not-vacuum branch has no support");
    return *not_vacuum;
  }
};

// Projective {|0..0><0..0|, I - |0..0><0..0|} measurement with explicit
// post-measurement states: vacuum branch probability |c|^2 with c the
// all-vacuum amplitude; not-vacuum post state (psi - c|0..0>)/sqrt(1-|c|^2).
VacuumOrNot vacuum_or_not(const TruncatedState& psi);

// --- functionals --------------------------------------------------------------

// Von Neumann entropy in bits. Eigenvalues in [-1e-10, 0) are clipped to 0;
// larger negatives throw InvalidOperator. Eigenvalues below 1e-15 contribute 0.
double entropy_bits(const Matrix& rho);
double entropy_bits(const DensityMatrix& rho);

// Trace distance ||a-b||_1 = sum of |eigenvalues| of the Hermitian difference.
double trace_distance(const Matrix& a, const Matrix& b);
double trace_distance(const DensityMatrix& a, const DensityMatrix& b);

// --- sector bookkeeping -------------------------------------------------------

// Trusted sector: every mode occupation <= d/2. Returns the probability mass
// outside it. Receiver loops use the cached-mask variant.
double sector_leak(const TruncatedState& state);
std::vector<std::uint8_t> sector_mask(int modes, FockCutoff cutoff);  // 1 = outside

Eigen::Index ipow(int base, int exp);

}  // namespace seqdec::fock
