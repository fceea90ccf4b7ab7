#pragma once

#include <cstdint>
#include <optional>
#include <string>
#include <vector>

#include "seqdec/codec.hpp"
#include "seqdec/rng.hpp"

// The decoding engines: exact Gram-chain evaluation, span-basis Monte Carlo
// trajectories with measurement back-action, the physical truncated-Fock
// receiver, and the conditional-pulse-nulling baseline. Message indices are
// 0-based; "first codeword" means index 0.
namespace seqdec::decoder {

inline constexpr int kFail = -1;  // decoded value when every test said no

// Codeword states written in an orthonormal basis of their span: column m
// of `basis` is codeword m, so basis^H basis reproduces the (PSD-floored)
// Gram matrix. Every projector I - |psi_i><psi_i| keeps the span closed, so
// all sequential-decoding statistics are exact inside these M dimensions.
struct SpanRepresentation {
  Eigen::MatrixXcd basis;
  std::string method;  // factorization recorded for reproducibility

  int size() const { return int(basis.cols()); }
  static SpanRepresentation from_gram(const codec::GramMatrix& gram);
};

struct DecodeOutcome {
  int true_message;
  int decoded;                      // message index, or kFail
  std::vector<std::uint8_t> steps;  // 1 = "yes" at that test
  std::string engine_id;
};

struct ErrorEstimate {
  std::uint64_t trials = 0;
  std::uint64_t errors = 0;
  double p_hat = 0.0;
  double ci_lo = 0.0;  // Wilson 95%
  double ci_hi = 1.0;
  std::uint64_t seed = 0;
  std::string engine_id;
  double wall_ms = 0.0;
};

// |<psi_m| (I-phi_{m-1}) ... (I-phi_0) |psi_m>|^2, the probability that the
// sequential decoder answers "no" to every earlier codeword and "yes" at m,
// evaluated exactly in the span basis.
double chain_success(const SpanRepresentation& span, int m);
double gram_chain_success(const codec::GramMatrix& gram, int m);

// 1 - (1/M) sum_m chain_success(m): average error under uniform messages,
// for this fixed codebook. The all-no outcome counts as an error.
double average_error_exact(const codec::GramMatrix& gram);

// Exact outcome distribution of the sequential decoder given message m:
// entries 0..M-1 are P(decoded = i), entry M is P(all tests said no).
Eigen::VectorXd branch_distribution(const SpanRepresentation& span, int m);

// One stochastic decode with measurement back-action, in the span basis.
DecodeOutcome simulate_trajectory(const SpanRepresentation& span, int m, CounterRng& rng);

// Physical receiver in truncated Fock space: per test, apply the inverse
// modulation (displacements for coherent codebooks; phase shifts and
// unsqueezing per cell for reading III), sample the vacuum-or-not
// measurement with back-action, and re-apply the modulation on "no".
// Reading-III cells are simulated in the photon-number-difference-zero
// sector |n,n> (d amplitudes per cell), which every receiver operation
// preserves exactly.
class FockReceiver {
 public:
  // Documented amplitude budget: larger states fail loudly.
  static constexpr std::size_t kAmpBudget = 1'000'000;

  FockReceiver(const codec::Codebook& codebook, fock::FockCutoff cutoff);

  DecodeOutcome decode(int m, CounterRng& rng) const;
  Eigen::Index state_dim() const { return dim_; }

 private:
  codec::Codebook cb_;
  fock::FockCutoff cutoff_;
  Eigen::Index dim_;
  bool reading_ = false;
  std::vector<fock::Matrix> undo_, redo_;  // (test, position) -> index i*n + k
  std::vector<std::uint8_t> mask_;         // trusted-sector complement

  fock::TruncatedState initial_state(int m) const;
};

DecodeOutcome fock_receiver(const codec::Codebook& codebook, int m,
                            fock::FockCutoff cutoff, CounterRng& rng);

// Cutoff for which the receiver's intermediate states stay inside the
// trusted sector for this codebook (worst-case composite modulation).
fock::FockCutoff recommended_cutoff(const codec::Codebook& codebook);

// Conditional pulse nulling on a PPM codebook with an ideal direct
// detector: hypothesize slot h (from 0), null it, detect; a click advances
// the hypothesis to the next slot (strict forward recursion), no click
// direct-detects the remaining slots and decodes the click position or
// confirms h.
DecodeOutcome cpn_receiver(const codec::Codebook& ppm_codebook, int true_slot,
                           CounterRng& rng);

enum class Engine { kGram, kFock, kCpn };
std::string engine_name(Engine e);
Engine parse_engine(std::string_view name);  // throws InvalidParams

struct McOptions {
  std::optional<fock::FockCutoff> cutoff;  // fock engine; default recommended
  int workers = 1;
};

// Uniform messages, per-trial stream derived from (seed, "trial", index);
// decoded != m counts as an error (kFail included). Deterministic for fixed
// seed regardless of worker count.
ErrorEstimate monte_carlo_error(Engine engine, const codec::Codebook& codebook,
                                std::uint64_t trials, std::uint64_t seed,
                                const McOptions& options = {});

// Optional utility: keep the half of the messages with the highest exact
// chain success (ties broken by index), renumbered in original order.
codec::Codebook expurgate_worst_half(const codec::Codebook& codebook);

}  // namespace seqdec::decoder
