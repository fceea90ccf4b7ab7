#pragma once

#include <cstdint>
#include <optional>
#include <string>
#include <vector>

#include "json.hpp"
#include "seqdec/decoder.hpp"

// Batch simulation points and the CSV results format. The CSV dialect is
// comma-separated, '.' decimal, LF line endings, header always present, no
// quoting needed by construction. wall_ms is kept in memory only so reruns
// with the same seed are byte-identical.
namespace seqdec::cli {

struct PointSpec {
  ensembles::Family family = ensembles::Family::kCoherent;
  codec::Prior prior = codec::Prior::kGaussianIso;
  decoder::Engine engine = decoder::Engine::kGram;
  int n = 1;
  int M = 2;
  double ns = 1.0;
  double eta = 1.0;
  std::uint64_t trials = 0;  // 0 = exact only
  bool exact = false;
  std::uint64_t seed = 0;
  std::optional<int> cutoff;  // fock engine override
  int workers = 1;
};

struct ResultRow {
  std::string engine, family, prior;
  int n = 0, M = 0;
  double rate_bits = 0.0, ns = 0.0, eta = 1.0;
  std::uint64_t trials = 0;
  std::optional<double> err_mean, err_ci_lo, err_ci_hi;  // absent when trials == 0
  std::optional<double> exact_err;                       // gram engine with exact=true
  std::uint64_t seed = 0;
  double wall_ms = 0.0;  // in-memory only; never serialized
};

inline constexpr const char* kCsvHeader =
    "engine,family,prior,n,M,rate_bits,ns,eta,trials,err_mean,err_ci_lo,err_ci_hi,"
    "exact_err,seed";

std::string csv_line(const ResultRow& row);
ResultRow simulate_point(const PointSpec& point);

struct SweepAxes {
  std::vector<int> n, M;
  std::vector<double> ns, eta;
};

struct SweepConfig {
  ensembles::Family family = ensembles::Family::kCoherent;
  codec::Prior prior = codec::Prior::kGaussianIso;
  decoder::Engine engine = decoder::Engine::kGram;
  std::uint64_t trials = 1;
  std::uint64_t seed = 0;
  bool exact = false;
  SweepAxes axes;
  std::string out;  // CSV path; may be overridden on the command line
};

SweepConfig sweep_config_from_json(const nlohmann::json& j);
SweepConfig load_sweep_config(const std::string& path);

// One row per axis combination, nested in n -> M -> ns -> eta order. Each
// point's seed is derived from (config seed, "sweep-point", index) and
// recorded in its row, so any row is reproducible by a single `simulate`
// run with that seed. Execution may be parallel; collection restores order.
std::vector<ResultRow> run_sweep(const SweepConfig& config, int workers);

// Writes header + rows to path via a ".partial" staging file.
void write_csv(const std::vector<ResultRow>& rows, const std::string& path);

}  // namespace seqdec::cli
