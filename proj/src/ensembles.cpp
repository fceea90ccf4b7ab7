#include "seqdec/ensembles.hpp"

#include <cmath>

namespace seqdec::ensembles {

double g_capacity(double mean_photons) {
  if (mean_photons < 0.0) throw InvalidParams("g_capacity: mean photons must be >= 0");
  if (mean_photons == 0.0) return 0.0;
  const double x = mean_photons;
  return (x + 1.0) * std::log2(x + 1.0) - x * std::log2(x);
}

double binary_entropy(double p) {
  if (p < 0.0 || p > 1.0) throw InvalidParams("binary_entropy: p outside [0,1]");
  double h = 0.0;
  if (p > 0.0) h -= p * std::log2(p);
  if (p < 1.0) h -= (1.0 - p) * std::log2(1.0 - p);
  return h;
}

double bpsk_capacity(double ns) {
  if (ns < 0.0) throw InvalidParams("bpsk_capacity: ns must be >= 0");
  return binary_entropy((1.0 + std::exp(-2.0 * ns)) / 2.0);
}

double private_capacity(const ChannelParams& params) {
  return g_capacity(params.eta * params.ns) - g_capacity((1.0 - params.eta) * params.ns);
}

std::string family_name(Family f) {
  switch (f) {
    case Family::kCoherent: return "coherent";
    case Family::kReadingII: return "reading_II";
    case Family::kReadingIII: return "reading_III";
  }
  throw UnknownFamily("family_name: unrecognized family tag");
}

Family parse_family(std::string_view name) {
  if (name == "coherent") return Family::kCoherent;
  if (name == "reading_II") return Family::kReadingII;
  if (name == "reading_III") return Family::kReadingIII;
  throw UnknownFamily("parse_family: '" + std::string(name) + "'");
}

fock::TruncatedState reading_state(const StateFamily& family, double theta,
                                   fock::FockCutoff cutoff) {
  if (family.tag == Family::kCoherent)
    throw UnsupportedFamily("reading_state: coherent family has no phase code state");
  if (family.ns < 0.0) throw InvalidParams("reading_state: ns must be >= 0");
  const double ns = family.ns;
  if (fock::geometric_tail(ns, cutoff.d) > tol::kLeakage)
    throw CutoffTooSmall("reading_state: geometric tail above leakage tolerance");

  const int d = cutoff.d;
  Eigen::VectorXd weight(d);
  for (int n = 0; n < d; ++n)
    weight(n) = (ns == 0.0) ? (n == 0 ? 1.0 : 0.0)
                            : std::pow(ns / (ns + 1.0), double(n)) / (ns + 1.0);

  const bool two_mode = family.tag == Family::kReadingIII;
  const int modes = two_mode ? 2 : 1;
  fock::TruncatedState s{modes, cutoff, fock::Vector::Zero(fock::ipow(d, modes))};
  for (int n = 0; n < d; ++n) {
    const Eigen::Index idx = two_mode ? Eigen::Index(n) * d + n : Eigen::Index(n);
    s.amps(idx) = std::polar(std::sqrt(weight(n)), theta * double(n));
  }
  s.normalize();
  return s;
}

std::complex<double> analytic_overlap(const StateFamily& family,
                                      std::complex<double> symbol_a,
                                      std::complex<double> symbol_b) {
  switch (family.tag) {
    case Family::kCoherent:
      return std::exp(-0.5 * std::norm(symbol_a) - 0.5 * std::norm(symbol_b) +
                      std::conj(symbol_a) * symbol_b);
    case Family::kReadingII:
    case Family::kReadingIII: {
      // sum_n ns^n/(ns+1)^{n+1} e^{i n (theta_b - theta_a)}, geometric series.
      const double ns = family.ns;
      const double dtheta = symbol_b.real() - symbol_a.real();
      return 1.0 / (ns + 1.0 - ns * std::polar(1.0, dtheta));
    }
  }
  throw UnknownFamily("analytic_overlap: unrecognized family tag");
}

fock::DensityMatrix phase_average(const StateFamily& family, int phase_count,
                                  fock::FockCutoff cutoff) {
  if (phase_count < 1) throw InvalidParams("phase_average: need K >= 1");
  fock::TruncatedState probe = reading_state(family, 0.0, cutoff);
  fock::DensityMatrix avg{probe.modes, cutoff,
                          fock::Matrix::Zero(probe.dim(), probe.dim())};
  for (int k = 0; k < phase_count; ++k) {
    const double theta = 2.0 * std::numbers::pi * double(k) / double(phase_count);
    fock::TruncatedState psi = reading_state(family, theta, cutoff);
    avg.rho.noalias() += psi.amps * psi.amps.adjoint() / double(phase_count);
  }
  return avg;
}

}  // namespace seqdec::ensembles
