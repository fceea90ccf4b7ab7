#include "seqdec/cli.hpp"

#include <cstdio>
#include <cstdlib>
#include <filesystem>
#include <fstream>
#include <optional>

#include "CLI11.hpp"
#include "seqdec/bounds.hpp"
#include "seqdec/ensembles.hpp"
#include "seqdec/sweep.hpp"

namespace seqdec::cli {

namespace {

int env_workers() {
  if (const char* s = std::getenv("SEQDEC_WORKERS")) {
    const int w = std::atoi(s);
    if (w >= 1) return w;
  }
  return 1;
}

std::string resolve_out(const std::string& path) {
  if (path.empty()) return path;
  std::filesystem::path p(path);
  if (p.is_absolute()) return path;
  if (const char* dir = std::getenv("SEQDEC_OUTDIR"))
    return (std::filesystem::path(dir) / p).string();
  return path;
}

void emit_rows(const std::vector<ResultRow>& rows, const std::string& out_path,
               std::ostream& out) {
  std::string text = std::string(kCsvHeader) + "\n";
  for (const auto& r : rows) text += csv_line(r) + "\n";
  out << text;
  if (!out_path.empty()) {
    write_csv(rows, resolve_out(out_path));
  }
}

struct SimulateArgs {
  std::string prior;
  std::string family = "reading_III";
  std::string engine = "gram";
  int n = 1;
  int M = 2;
  double ns = 1.0;
  double eta = 1.0;
  std::uint64_t trials = 0;
  bool exact = false;
  std::uint64_t seed = 42;
  int cutoff = 0;  // 0 = automatic
  std::string out_path;
  std::string dump_codebook;
};

void add_common_simulate_flags(CLI::App* cmd, SimulateArgs& a) {
  cmd->add_option("--n", a.n, "blocklength (symbols per codeword)")->check(CLI::PositiveNumber);
  cmd->add_option("--M", a.M, "message count")->check(CLI::PositiveNumber);
  cmd->add_option("--ns", a.ns, "mean photon number per use")->check(CLI::NonNegativeNumber);
  cmd->add_option("--engine", a.engine, "decoder engine: gram|fock|cpn");
  cmd->add_option("--trials", a.trials, "Monte Carlo trials (0 = exact only)");
  cmd->add_flag("--exact", a.exact, "also evaluate the exact average error (gram engine)");
  cmd->add_option("--seed", a.seed, "master seed");
  cmd->add_option("--cutoff", a.cutoff, "Fock cutoff override for the fock engine");
  cmd->add_option("--out", a.out_path, "write the result row as CSV to this path");
  cmd->add_option("--dump-codebook", a.dump_codebook, "write the generated codebook as JSON");
}

int run_simulate_mode(const SimulateArgs& a, bool comm, std::ostream& out) {
  PointSpec p;
  p.family = comm ? ensembles::Family::kCoherent : ensembles::parse_family(a.family);
  p.prior = codec::parse_prior(a.prior);
  p.engine = decoder::parse_engine(a.engine);
  p.n = a.n;
  p.M = a.M;
  p.ns = a.ns;
  p.eta = a.eta;
  p.trials = a.trials;
  p.exact = a.exact;
  p.seed = a.seed;
  if (a.cutoff > 0) p.cutoff = a.cutoff;
  p.workers = env_workers();

  if (!a.dump_codebook.empty()) {
    codec::Codebook cb = codec::generate_codebook(p.prior, p.family, p.n, p.M, p.ns, p.seed);
    if (p.family == ensembles::Family::kCoherent && p.eta != 1.0)
      cb = codec::apply_loss(cb, p.eta);
    codec::save_codebook(cb, resolve_out(a.dump_codebook));
  }
  emit_rows({simulate_point(p)}, a.out_path, out);
  return 0;
}

void print_sweep_summary(const bounds::SweepSummary& s, const char* suite, std::ostream& out) {
  out << "suite: " << suite << "\n";
  out << "samples: " << s.samples << "\n";
  out << "violations: " << s.violations << "\n";
  char buf[40];
  std::snprintf(buf, sizeof buf, "%.6g", s.min_slack);
  out << "min_slack: " << buf << "\n";
}

void print_typicality(const bounds::TypicalityReport& rep, std::ostream& out) {
  auto fmt6 = [](double v) {
    char buf[40];
    std::snprintf(buf, sizeof buf, "%.6g", v);
    return std::string(buf);
  };
  out << "suite: typicality\n";
  out << "entropy_bits: " << fmt6(rep.entropy_bits) << "\n";
  out << "type_classes: " << rep.type_classes << "\n";
  out << "mass: " << fmt6(rep.mass) << " (target >= " << fmt6(1.0 - rep.epsilon_target)
      << ", reached: " << (rep.mass_ok ? "yes" : "no") << ")\n";
  out << "log2_size: " << fmt6(rep.log2_size) << " (bound " << fmt6(rep.log2_size_bound)
      << ", ok: " << (rep.size_ok ? "yes" : "no") << ")\n";
  out << "member_log2p: [" << fmt6(rep.min_member_log2p) << ", "
      << fmt6(rep.max_member_log2p) << "] (ok: " << (rep.members_ok ? "yes" : "no")
      << ")\n";
  out << "violations: " << rep.violations() << "\n";
}

}  // namespace

int run(const std::vector<std::string>& argv, std::ostream& out, std::ostream& err) {
  CLI::App app{"Sequential-decoding simulator for lossy bosonic channels and quantum reading"};
  app.require_subcommand(1);

  // capacity ------------------------------------------------------------------
  std::string cap_type = "holevo";
  double cap_ns = 1.0, cap_eta = 1.0;
  auto* capacity = app.add_subcommand("capacity", "print a capacity formula value in bits");
  capacity->add_option("--type", cap_type, "holevo|bpsk|private");
  capacity->add_option("--ns", cap_ns, "mean photon number")->check(CLI::NonNegativeNumber);
  capacity->add_option("--eta", cap_eta, "transmissivity")->check(CLI::Range(0.0, 1.0));

  // simulate ------------------------------------------------------------------
  auto* simulate = app.add_subcommand("simulate", "run a decoder on one generated codebook");
  simulate->require_subcommand(1);
  SimulateArgs comm_args;
  comm_args.prior = "gaussian_iso";
  auto* comm = simulate->add_subcommand("comm", "coherent-state communication over the pure-loss channel");
  comm->add_option("--prior", comm_args.prior, "gaussian_iso|bpsk_amp|ppm (aliases gaussian|bpsk)");
  comm->add_option("--eta", comm_args.eta, "channel transmissivity")->check(CLI::Range(0.0, 1.0));
  add_common_simulate_flags(comm, comm_args);

  SimulateArgs read_args;
  read_args.prior = "uniform_phase";
  auto* read = simulate->add_subcommand("read", "phase-encoded quantum reading");
  read->add_option("--prior", read_args.prior, "uniform_phase|bpsk_phase (aliases uniform|bpsk)");
  read->add_option("--family", read_args.family, "reading_II|reading_III");
  add_common_simulate_flags(read, read_args);

  // verify --------------------------------------------------------------------
  std::string suite = "all";
  std::uint64_t samples = 10000;
  int dim = 8;
  std::uint64_t verify_seed = 0;
  double typ_p = 0.11, typ_delta = 0.1, typ_epsilon = 0.2;
  int typ_n = 20;
  auto* verify = app.add_subcommand("verify", "run a bound-verification suite");
  verify->add_option("--suite", suite, "sen|gentle|tracelemma|typicality|all");
  verify->add_option("--samples", samples, "random instances per suite");
  verify->add_option("--dim", dim, "maximum Hilbert-space dimension")->check(CLI::Range(2, 64));
  verify->add_option("--seed", verify_seed, "master seed");
  verify->add_option("--p", typ_p, "Bernoulli parameter for the typicality suite")
      ->check(CLI::Range(0.0, 1.0));
  verify->add_option("--n", typ_n, "typicality blocklength")->check(CLI::Range(1, 20));
  verify->add_option("--delta", typ_delta, "typicality delta")->check(CLI::PositiveNumber);
  verify->add_option("--epsilon", typ_epsilon, "typicality epsilon target");

  // sweep ---------------------------------------------------------------------
  std::string config_path, sweep_out;
  auto* sweep = app.add_subcommand("sweep", "run a batch sweep from a JSON config");
  sweep->add_option("--config", config_path, "sweep config JSON")->required();
  sweep->add_option("--out", sweep_out, "output CSV (overrides the config's `out`)");

  std::vector<std::string> args(argv.begin() + (argv.empty() ? 0 : 1), argv.end());
  try {
    std::vector<const char*> cargs;
    cargs.push_back("seqdec");
    for (const auto& a : args) cargs.push_back(a.c_str());
    app.parse(int(cargs.size()), cargs.data());
  } catch (const CLI::CallForHelp& e) {
    out << app.help();
    return 0;
  } catch (const CLI::ParseError& e) {
    err << "argument error: " << e.what() << "\n";
    return 2;
  }

  try {
    if (*capacity) {
      double value = 0.0;
      if (cap_type == "holevo")
        value = ensembles::g_capacity(cap_eta * cap_ns);
      else if (cap_type == "bpsk")
        value = ensembles::bpsk_capacity(cap_ns);
      else if (cap_type == "private")
        value = ensembles::private_capacity(ensembles::ChannelParams(cap_eta, cap_ns));
      else {
        err << "argument error: unknown capacity type '" << cap_type << "'\n";
        return 2;
      }
      char buf[40];
      std::snprintf(buf, sizeof buf, "%.6f", value);
      out << buf << "\n";
      return 0;
    }

    if (*simulate) {
      auto fix_prior = [](SimulateArgs& a, bool comm_mode) {
        if (comm_mode && a.prior == "gaussian") a.prior = "gaussian_iso";
        if (comm_mode && a.prior == "bpsk") a.prior = "bpsk_amp";
        if (!comm_mode && a.prior == "uniform") a.prior = "uniform_phase";
        if (!comm_mode && a.prior == "bpsk") a.prior = "bpsk_phase";
      };
      if (*comm) {
        fix_prior(comm_args, true);
        return run_simulate_mode(comm_args, true, out);
      }
      fix_prior(read_args, false);
      return run_simulate_mode(read_args, false, out);
    }

    if (*verify) {
      bool known = false;
      if (suite == "sen" || suite == "all") {
        print_sweep_summary(bounds::sen_sweep(samples, dim, verify_seed), "sen", out);
        known = true;
      }
      if (suite == "gentle" || suite == "all") {
        print_sweep_summary(bounds::gentle_sweep(samples, dim, verify_seed), "gentle", out);
        known = true;
      }
      if (suite == "tracelemma" || suite == "all") {
        print_sweep_summary(bounds::trace_lemma_sweep(samples, dim, verify_seed),
                            "tracelemma", out);
        known = true;
      }
      if (suite == "typicality" || suite == "all") {
        bounds::TypicalityParams params{typ_delta, typ_epsilon, typ_n, {1.0 - typ_p, typ_p}};
        print_typicality(bounds::typicality_report(params), out);
        known = true;
      }
      if (!known) {
        err << "argument error: unknown suite '" << suite << "'\n";
        return 2;
      }
      return 0;
    }

    if (*sweep) {
      const SweepConfig cfg = load_sweep_config(config_path);
      std::string out_path = !sweep_out.empty() ? sweep_out : cfg.out;
      if (out_path.empty())
        throw InvalidParams("sweep: no output path (config `out` or --out)");
      out_path = resolve_out(out_path);
      const auto rows = run_sweep(cfg, env_workers());
      write_csv(rows, out_path);
      out << "wrote " << rows.size() << " rows to " << out_path << "\n";
      return 0;
    }
  } catch (const InvalidParams& e) {
    err << "argument error: " << e.what() << "\n";
    return 2;
  } catch (const UnknownFamily& e) {
    err << "argument error: " << e.what() << "\n";
    return 2;
  } catch (const Error& e) {
    err << "error: " << e.what() << "\n";
    return 1;
  } catch (const std::exception& e) {
    err << "error: " << e.what() << "\n";
    return 1;
  }
  return 0;
}

}  // namespace seqdec::cli
