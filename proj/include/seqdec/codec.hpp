#pragma once

#include <cstdint>
#include <string>
#include <string_view>

#include <Eigen/Dense>

#include "json.hpp"
#include "seqdec/ensembles.hpp"

// Codebook data model, random codebook generation, the pure-loss channel's
// action on codewords, and analytic Gram matrices.
namespace seqdec::codec {

enum class Prior { kGaussianIso, kBpskAmp, kUniformPhase, kBpskPhase, kPpm };

std::string prior_name(Prior p);
Prior parse_prior(std::string_view name);  // throws InvalidParams

struct Codebook {
  ensembles::StateFamily family;
  Prior prior;
  int n;  // blocklength (symbols per codeword)
  int M;  // message count
  double ns;
  std::uint64_t seed;
  std::string rng_id;
  // M x n. Coherent symbols are complex amplitudes; reading symbols are
  // phases in [0, 2pi) carried in the real part.
  Eigen::MatrixXcd symbols;

  double rate_bits() const { return std::log2(double(M)) / double(n); }
};

// Draws codewords i.i.d. from the prior: gaussian_iso from the circularly
// symmetric complex Gaussian with E|a|^2 = ns; bpsk_amp uniformly from
// {+sqrt(ns), -sqrt(ns)}; uniform_phase from [0, 2pi); bpsk_phase from
// {0, pi}. ppm is deterministic (requires n == M): sqrt(ns) in slot m.
// The per-codebook stream is derived from (seed, "codebook").
Codebook generate_codebook(Prior prior, ensembles::Family family, int n, int M,
                           double ns, std::uint64_t seed);

// Hermitian, unit-diagonal matrix of codeword inner products.
struct GramMatrix {
  Eigen::MatrixXcd g;
  int size() const { return int(g.rows()); }
};

// Validating constructor for externally supplied matrices.
GramMatrix make_gram(Eigen::MatrixXcd g);

// G[i][j] = prod_k analytic_overlap(family, symbols(i,k), symbols(j,k)).
GramMatrix codeword_gram(const Codebook& codebook);

// Pure-loss action a -> sqrt(eta) a on every coherent symbol. Reading
// codebooks are rejected with UnsupportedFamily.
Codebook apply_loss(const Codebook& codebook, double eta);

nlohmann::json to_json(const Codebook& codebook);
Codebook codebook_from_json(const nlohmann::json& j);
void save_codebook(const Codebook& codebook, const std::string& path);
Codebook load_codebook(const std::string& path);

}  // namespace seqdec::codec
