#include "seqdec/sweep.hpp"

#include <atomic>
#include <chrono>
#include <cstdio>
#include <filesystem>
#include <fstream>
#include <thread>

namespace seqdec::cli {

namespace {

std::string fmt(double v) {
  char buf[40];
  std::snprintf(buf, sizeof buf, "%.12g", v);
  return buf;
}

std::string fmt_opt(const std::optional<double>& v) { return v ? fmt(*v) : ""; }

}  // namespace

std::string csv_line(const ResultRow& r) {
  std::string line;
  line += r.engine + "," + r.family + "," + r.prior + ",";
  line += std::to_string(r.n) + "," + std::to_string(r.M) + ",";
  line += fmt(r.rate_bits) + "," + fmt(r.ns) + "," + fmt(r.eta) + ",";
  line += std::to_string(r.trials) + ",";
  line += fmt_opt(r.err_mean) + "," + fmt_opt(r.err_ci_lo) + "," + fmt_opt(r.err_ci_hi) + ",";
  line += fmt_opt(r.exact_err) + ",";
  line += std::to_string(r.seed);
  return line;
}

ResultRow simulate_point(const PointSpec& p) {
  const auto t0 = std::chrono::steady_clock::now();
  if (p.trials == 0 && !p.exact)
    throw InvalidParams("simulate_point: nothing to do (no trials, no exact evaluation)");
  if (p.exact && p.engine != decoder::Engine::kGram)
    throw InvalidParams("simulate_point: exact evaluation requires the gram engine");
  if (p.family != ensembles::Family::kCoherent && p.eta != 1.0)
    throw UnsupportedFamily("simulate_point: eta < 1 applies to coherent codebooks only");

  codec::Codebook cb =
      codec::generate_codebook(p.prior, p.family, p.n, p.M, p.ns, p.seed);
  if (p.family == ensembles::Family::kCoherent && p.eta != 1.0)
    cb = codec::apply_loss(cb, p.eta);

  ResultRow row;
  row.engine = decoder::engine_name(p.engine);
  row.family = ensembles::family_name(p.family);
  row.prior = codec::prior_name(p.prior);
  row.n = p.n;
  row.M = p.M;
  row.rate_bits = cb.rate_bits();
  row.ns = p.ns;
  row.eta = p.eta;
  row.trials = p.trials;
  row.seed = p.seed;

  if (p.exact) row.exact_err = decoder::average_error_exact(codec::codeword_gram(cb));
  if (p.trials > 0) {
    decoder::McOptions options;
    options.workers = p.workers;
    if (p.cutoff) options.cutoff = fock::FockCutoff(*p.cutoff);
    const decoder::ErrorEstimate est =
        decoder::monte_carlo_error(p.engine, cb, p.trials, p.seed, options);
    row.err_mean = est.p_hat;
    row.err_ci_lo = est.ci_lo;
    row.err_ci_hi = est.ci_hi;
  }
  row.wall_ms = std::chrono::duration<double, std::milli>(
                    std::chrono::steady_clock::now() - t0)
                    .count();
  return row;
}

SweepConfig sweep_config_from_json(const nlohmann::json& j) {
  SweepConfig cfg;
  cfg.family = ensembles::parse_family(j.at("family").get<std::string>());
  cfg.prior = codec::parse_prior(j.at("prior").get<std::string>());
  cfg.engine = decoder::parse_engine(j.at("engine").get<std::string>());
  cfg.trials = j.at("trials").get<std::uint64_t>();
  cfg.seed = j.at("seed").get<std::uint64_t>();
  cfg.exact = j.value("exact", false);
  const auto& axes = j.at("axes");
  cfg.axes.n = axes.at("n").get<std::vector<int>>();
  cfg.axes.M = axes.at("M").get<std::vector<int>>();
  cfg.axes.ns = axes.at("ns").get<std::vector<double>>();
  cfg.axes.eta = axes.value("eta", std::vector<double>{1.0});
  cfg.out = j.value("out", "");
  if (cfg.axes.n.empty() || cfg.axes.M.empty() || cfg.axes.ns.empty() || cfg.axes.eta.empty())
    throw InvalidParams("sweep config: every axis needs at least one value");
  if (cfg.trials < 1) throw InvalidParams("sweep config: trials must be >= 1");
  return cfg;
}

SweepConfig load_sweep_config(const std::string& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw InvalidParams("load_sweep_config: cannot open '" + path + "'");
  nlohmann::json j;
  in >> j;
  return sweep_config_from_json(j);
}

std::vector<ResultRow> run_sweep(const SweepConfig& cfg, int workers) {
  std::vector<PointSpec> points;
  for (int n : cfg.axes.n)
    for (int M : cfg.axes.M)
      for (double ns : cfg.axes.ns)
        for (double eta : cfg.axes.eta) {
          PointSpec p;
          p.family = cfg.family;
          p.prior = cfg.prior;
          p.engine = cfg.engine;
          p.n = n;
          p.M = M;
          p.ns = ns;
          p.eta = eta;
          p.trials = cfg.trials;
          p.exact = cfg.exact;
          p.seed = CounterRng::derive_key(cfg.seed, "sweep-point", points.size());
          points.push_back(p);
        }

  std::vector<ResultRow> rows(points.size());
  const int pool = std::max(1, std::min<int>(workers, int(points.size())));
  if (pool == 1) {
    for (std::size_t i = 0; i < points.size(); ++i) rows[i] = simulate_point(points[i]);
    return rows;
  }

  std::atomic<std::size_t> next{0};
  std::exception_ptr failure;
  std::mutex failure_mutex;
  std::vector<std::thread> threads;
  for (int w = 0; w < pool; ++w) {
    threads.emplace_back([&] {
      try {
        for (std::size_t i = next.fetch_add(1); i < points.size(); i = next.fetch_add(1))
          rows[i] = simulate_point(points[i]);
      } catch (...) {
        std::lock_guard<std::mutex> lock(failure_mutex);
        if (!failure) failure = std::current_exception();
      }
    });
  }
  for (auto& t : threads) t.join();
  if (failure) std::rethrow_exception(failure);
  return rows;
}

void write_csv(const std::vector<ResultRow>& rows, const std::string& path) {
  const std::string partial = path + ".partial";
  {
    std::ofstream out(partial, std::ios::binary);
    if (!out) throw InvalidParams("write_csv: cannot open '" + partial + "'");
    out << kCsvHeader << "\n";
    for (const auto& row : rows) out << csv_line(row) << "\n";
  }
  std::filesystem::rename(partial, path);
}

}  // namespace seqdec::cli
