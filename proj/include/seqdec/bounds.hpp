#pragma once

#include <cstdint>
#include <vector>

#include <Eigen/Dense>

#include "seqdec/common.hpp"
#include "seqdec/rng.hpp"

// Numerical verifiers for the error-analysis lemmas: trace-distance
// substitution, weak typicality, the gentle operator lemma, the
// non-commutative union bound for projector chains, and the final
// epsilon' error bound. Checks report slack rather than booleans so
// regressions are quantifiable.
namespace seqdec::bounds {

using Matrix = Eigen::MatrixXcd;

struct BoundReport {
  double lhs;
  double rhs;
  double slack;    // rhs - lhs
  bool satisfied;  // slack >= -1e-9
};

BoundReport make_report(double lhs, double rhs);

// Tr[lambda rho] <= Tr[lambda sigma] + ||rho - sigma||_1 for 0 <= lambda <= I.
BoundReport trace_lemma_gap(const Matrix& rho, const Matrix& sigma, const Matrix& lambda);

struct TypicalityParams {
  double delta;           // > 0
  double epsilon;         // target in (0,1); the achieved mass is reported
  int n;                  // blocklength, <= 20
  std::vector<double> p;  // finite distribution, support <= 16, sums to 1
};

struct TypicalityReport {
  double entropy_bits;       // H(X)
  double mass;               // Pr[T_delta]
  double epsilon_target;
  bool mass_ok;              // mass >= 1 - epsilon at this blocklength
  double log2_size;          // log2 |T_delta| (-inf when empty)
  double log2_size_bound;    // n (H + delta)
  bool size_ok;              // |T_delta| <= 2^{n(H+delta)}
  double min_member_log2p;   // extremes of log2 p(x^n) over members
  double max_member_log2p;
  bool members_ok;           // within [-n(H+delta), -n(H-delta)]
  std::uint64_t type_classes;  // enumerated type classes

  int violations() const { return (size_ok ? 0 : 1) + (members_ok ? 0 : 1); }
};

// Exact enumeration of the weakly typical set by type classes (the sample
// entropy depends only on the empirical counts). Sequence counts use long
// double arithmetic; at n <= 20 the relative error is far below any bound
// being checked. Throws EnumerationTooLarge past the documented budget.
TypicalityReport typicality_report(const TypicalityParams& params);

struct WeightedState {
  double weight;
  Matrix rho;
};

// E_x || sqrt(L) rho_x sqrt(L) - rho_x ||_1 <= 2 sqrt(eps) with
// eps = 1 - Tr[L rho_bar].
BoundReport gentle_operator_gap(const std::vector<WeightedState>& ensemble,
                                const Matrix& lambda);

// Tr[sigma] - Tr[P_N..P_1 sigma P_1..P_N] <= 2 sqrt(sum_i Tr[(I-P_i) sigma]);
// projectors[0] is applied first (innermost).
BoundReport sen_bound_gap(const Matrix& sigma, const std::vector<Matrix>& projectors);

// eps + 2 sqrt(eps) + 2 sqrt(2 sqrt(eps) + 2^{-n(H - delta)} M), with the
// codebook term evaluated in log2 space.
double epsilon_prime(double epsilon, int n, double h_bits, double delta, double m_count);

// --- random instance sweeps ----------------------------------------------------

struct SweepSummary {
  std::uint64_t samples = 0;
  std::uint64_t violations = 0;  // slack < -1e-9
  double min_slack = 0.0;
};

SweepSummary sen_sweep(std::uint64_t samples, int max_dim, std::uint64_t seed);
SweepSummary gentle_sweep(std::uint64_t samples, int max_dim, std::uint64_t seed);
SweepSummary trace_lemma_sweep(std::uint64_t samples, int max_dim, std::uint64_t seed);

// Random objects shared by the sweeps and by tests.
Matrix haar_unitary(int dim, CounterRng& rng);
Matrix random_density(int dim, CounterRng& rng);             // Ginibre-induced
Matrix random_projector(int dim, CounterRng& rng);           // uniform rank in [1, dim]
Matrix random_contraction(int dim, CounterRng& rng);         // 0 <= L <= I
Eigen::VectorXcd random_pure(int dim, CounterRng& rng);

}  // namespace seqdec::bounds
