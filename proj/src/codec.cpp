#include "seqdec/codec.hpp"

#include <cmath>
#include <fstream>
#include <numbers>

#include "seqdec/rng.hpp"

namespace seqdec::codec {

namespace {

bool is_reading(ensembles::Family f) {
  return f == ensembles::Family::kReadingII || f == ensembles::Family::kReadingIII;
}

bool prior_matches_family(Prior p, ensembles::Family f) {
  switch (p) {
    case Prior::kGaussianIso:
    case Prior::kBpskAmp:
    case Prior::kPpm:
      return f == ensembles::Family::kCoherent;
    case Prior::kUniformPhase:
    case Prior::kBpskPhase:
      return is_reading(f);
  }
  return false;
}

}  // namespace

std::string prior_name(Prior p) {
  switch (p) {
    case Prior::kGaussianIso: return "gaussian_iso";
    case Prior::kBpskAmp: return "bpsk_amp";
    case Prior::kUniformPhase: return "uniform_phase";
    case Prior::kBpskPhase: return "bpsk_phase";
    case Prior::kPpm: return "ppm";
  }
  throw InvalidParams("prior_name: unrecognized prior tag");
}

Prior parse_prior(std::string_view name) {
  if (name == "gaussian_iso") return Prior::kGaussianIso;
  if (name == "bpsk_amp") return Prior::kBpskAmp;
  if (name == "uniform_phase") return Prior::kUniformPhase;
  if (name == "bpsk_phase") return Prior::kBpskPhase;
  if (name == "ppm") return Prior::kPpm;
  throw InvalidParams("parse_prior: '" + std::string(name) + "'");
}

Codebook generate_codebook(Prior prior, ensembles::Family family, int n, int M,
                           double ns, std::uint64_t seed) {
  if (n < 1 || M < 1) throw InvalidParams("generate_codebook: need n >= 1 and M >= 1");
  if (ns < 0.0) throw InvalidParams("generate_codebook: ns must be >= 0");
  if (!prior_matches_family(prior, family))
    throw InvalidParams("generate_codebook: prior '" + prior_name(prior) +
                        "' does not modulate family '" + ensembles::family_name(family) + "'");
  if (prior == Prior::kPpm && n != M)
    throw InvalidParams("generate_codebook: ppm requires n == M");

  Codebook cb{ensembles::StateFamily{family, ns}, prior, n, M, ns, seed,
              std::string(CounterRng::kEngineId) + "/" + CounterRng::kGaussMethod,
              Eigen::MatrixXcd::Zero(M, n)};

  CounterRng rng = CounterRng::stream(seed, "codebook");
  const double amp = std::sqrt(ns);
  for (int m = 0; m < M; ++m) {
    for (int k = 0; k < n; ++k) {
      switch (prior) {
        case Prior::kGaussianIso:
          cb.symbols(m, k) = rng.next_isotropic_gaussian(ns);
          break;
        case Prior::kBpskAmp:
          cb.symbols(m, k) = (rng.next_u64() & 1) ? -amp : amp;
          break;
        case Prior::kUniformPhase:
          cb.symbols(m, k) = 2.0 * std::numbers::pi * rng.next_double();
          break;
        case Prior::kBpskPhase:
          cb.symbols(m, k) = (rng.next_u64() & 1) ? std::numbers::pi : 0.0;
          break;
        case Prior::kPpm:
          cb.symbols(m, k) = (k == m) ? amp : 0.0;
          break;
      }
    }
  }
  return cb;
}

GramMatrix make_gram(Eigen::MatrixXcd g) {
  if (g.rows() != g.cols()) throw DimensionMismatch("make_gram: not square");
  if ((g - g.adjoint()).norm() > 1e-12 * std::max<double>(1.0, g.norm()))
    throw InvalidOperator("make_gram: matrix is not Hermitian");
  for (Eigen::Index i = 0; i < g.rows(); ++i)
    if (std::abs(g(i, i) - 1.0) > 1e-9)
      throw InvalidOperator("make_gram: diagonal entry differs from 1");
  return GramMatrix{std::move(g)};
}

GramMatrix codeword_gram(const Codebook& cb) {
  Eigen::MatrixXcd g = Eigen::MatrixXcd::Identity(cb.M, cb.M);
  for (int i = 0; i < cb.M; ++i) {
    for (int j = i + 1; j < cb.M; ++j) {
      std::complex<double> ov = 1.0;
      for (int k = 0; k < cb.n; ++k)
        ov *= ensembles::analytic_overlap(cb.family, cb.symbols(i, k), cb.symbols(j, k));
      g(i, j) = ov;
      g(j, i) = std::conj(ov);
    }
  }
  return GramMatrix{std::move(g)};
}

Codebook apply_loss(const Codebook& cb, double eta) {
  if (cb.family.tag != ensembles::Family::kCoherent)
    throw UnsupportedFamily("apply_loss: only coherent codebooks pass the pure-loss channel");
  if (eta < 0.0 || eta > 1.0) throw InvalidParams("apply_loss: eta outside [0,1]");
  Codebook out = cb;
  out.symbols *= std::sqrt(eta);
  out.ns = cb.ns * eta;
  out.family.ns = out.ns;
  return out;
}

nlohmann::json to_json(const Codebook& cb) {
  nlohmann::json j;
  j["family"] = ensembles::family_name(cb.family.tag);
  j["prior"] = prior_name(cb.prior);
  j["n"] = cb.n;
  j["M"] = cb.M;
  j["ns"] = cb.ns;
  j["seed"] = cb.seed;
  j["rng_id"] = cb.rng_id;
  nlohmann::json rows = nlohmann::json::array();
  const bool reading = is_reading(cb.family.tag);
  for (int m = 0; m < cb.M; ++m) {
    nlohmann::json row = nlohmann::json::array();
    for (int k = 0; k < cb.n; ++k) {
      if (reading)
        row.push_back(cb.symbols(m, k).real());
      else
        row.push_back(nlohmann::json::array(
            {cb.symbols(m, k).real(), cb.symbols(m, k).imag()}));
    }
    rows.push_back(std::move(row));
  }
  j["symbols"] = std::move(rows);
  return j;
}

Codebook codebook_from_json(const nlohmann::json& j) {
  const auto family = ensembles::parse_family(j.at("family").get<std::string>());
  const auto prior = parse_prior(j.at("prior").get<std::string>());
  const int n = j.at("n").get<int>();
  const int M = j.at("M").get<int>();
  if (n < 1 || M < 1) throw InvalidParams("codebook_from_json: bad dimensions");
  Codebook cb{ensembles::StateFamily{family, j.at("ns").get<double>()},
              prior,
              n,
              M,
              j.at("ns").get<double>(),
              j.at("seed").get<std::uint64_t>(),
              j.at("rng_id").get<std::string>(),
              Eigen::MatrixXcd::Zero(M, n)};
  const auto& rows = j.at("symbols");
  if (int(rows.size()) != M) throw InvalidParams("codebook_from_json: symbol row count");
  const bool reading = is_reading(family);
  for (int m = 0; m < M; ++m) {
    const auto& row = rows.at(m);
    if (int(row.size()) != n) throw InvalidParams("codebook_from_json: symbol column count");
    for (int k = 0; k < n; ++k) {
      if (reading)
        cb.symbols(m, k) = row.at(k).get<double>();
      else
        cb.symbols(m, k) = std::complex<double>(row.at(k).at(0).get<double>(),
                                                row.at(k).at(1).get<double>());
    }
  }
  return cb;
}

void save_codebook(const Codebook& cb, const std::string& path) {
  std::ofstream out(path, std::ios::binary);
  if (!out) throw InvalidParams("save_codebook: cannot open '" + path + "'");
  out << to_json(cb).dump(2) << "\n";
}

Codebook load_codebook(const std::string& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw InvalidParams("load_codebook: cannot open '" + path + "'");
  nlohmann::json j;
  in >> j;
  return codebook_from_json(j);
}

}  // namespace seqdec::codec
