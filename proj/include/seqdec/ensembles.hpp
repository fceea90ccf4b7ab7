#pragma once

#include <complex>
#include <string>
#include <string_view>

#include "seqdec/fock.hpp"

// Closed-form capacity formulas, the modulated state families (coherent
// amplitude, single-mode reading superposition, two-mode squeezed vacuum
// with phase), and their analytic overlaps. Logarithms are base 2
// throughout; capacities are in bits.
namespace seqdec::ensembles {

// g(x) = (x+1) log2(x+1) - x log2 x, the entropy of a thermal state with
// mean photon number x; returns the limit value 0 at x = 0.
double g_capacity(double mean_photons);

double binary_entropy(double p);

// H2((1 + e^{-2 ns})/2). The +/- sign ambiguity is immaterial by the
// symmetry of H2; the + branch is implemented.
double bpsk_capacity(double ns);

struct ChannelParams {
  double eta;  // transmissivity in [0,1]
  double ns;   // mean photon number >= 0
  ChannelParams(double eta_, double ns_) : eta(eta_), ns(ns_) {
    if (eta < 0.0 || eta > 1.0) throw InvalidParams("ChannelParams: eta outside [0,1]");
    if (ns < 0.0) throw InvalidParams("ChannelParams: ns must be >= 0");
  }
};

// g(eta*ns) - g((1-eta)*ns).
double private_capacity(const ChannelParams& params);

enum class Family { kCoherent, kReadingII, kReadingIII };

std::string family_name(Family f);
Family parse_family(std::string_view name);  // throws UnknownFamily

struct StateFamily {
  Family tag;
  double ns = 0.0;  // used by the reading families
};

// Phase-modulated reading state: amplitudes sqrt(ns^n/(ns+1)^{n+1}) e^{i n theta}
// on |n> (reading II) or |n>|n> (reading III), renormalized within the
// truncation. Throws CutoffTooSmall per the leakage rule.
fock::TruncatedState reading_state(const StateFamily& family, double theta,
                                   fock::FockCutoff cutoff);

// Closed-form inner product <phi_a|phi_b> for one channel use. Coherent
// symbols are complex amplitudes; reading symbols are phases carried in the
// real part.
std::complex<double> analytic_overlap(const StateFamily& family,
                                      std::complex<double> symbol_a,
                                      std::complex<double> symbol_b);

// Uniform average of |phi_theta><phi_theta| over theta_k = 2 pi k / K.
// For K >= d the discrete average is exactly diagonal (Fourier
// orthogonality under truncation) and equals the truncated thermal state.
fock::DensityMatrix phase_average(const StateFamily& family, int phase_count,
                                  fock::FockCutoff cutoff);

}  // namespace seqdec::ensembles
