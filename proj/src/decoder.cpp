#include "seqdec/decoder.hpp"

#include <algorithm>
#include <chrono>
#include <cmath>
#include <numeric>
#include <thread>

namespace seqdec::decoder {

SpanRepresentation SpanRepresentation::from_gram(const codec::GramMatrix& gram) {
  Eigen::SelfAdjointEigenSolver<Eigen::MatrixXcd> es(gram.g);
  if (es.info() != Eigen::Success)
    throw InvalidOperator("SpanRepresentation: eigendecomposition failed");
  Eigen::VectorXd vals = es.eigenvalues();
  for (Eigen::Index i = 0; i < vals.size(); ++i) {
    if (vals(i) < -tol::kPsdFloor)
      throw InvalidOperator("SpanRepresentation: Gram eigenvalue below -1e-12");
    if (vals(i) < tol::kPsdFloor) vals(i) = tol::kPsdFloor;
  }
  // G = L L^H with L = V sqrt(vals); column m of L^H is codeword m in the
  // orthonormal eigenbasis.
  Eigen::MatrixXcd l = es.eigenvectors() * vals.cwiseSqrt().asDiagonal();
  SpanRepresentation span{l.adjoint(), "eigh-psd-floor"};
  for (int m = 0; m < span.size(); ++m) span.basis.col(m).normalize();
  return span;
}

namespace {

void check_message(int m, int M, const char* what) {
  if (m < 0 || m >= M) throw IndexOutOfRange(std::string(what) + ": message index out of range");
}

}  // namespace

double chain_success(const SpanRepresentation& span, int m) {
  check_message(m, span.size(), "chain_success");
  Eigen::VectorXcd w = span.basis.col(m);
  for (int i = 0; i < m; ++i) {
    const auto vi = span.basis.col(i);
    w -= vi * (vi.dot(w));
  }
  return std::norm(span.basis.col(m).dot(w));
}

double gram_chain_success(const codec::GramMatrix& gram, int m) {
  return chain_success(SpanRepresentation::from_gram(gram), m);
}

double average_error_exact(const codec::GramMatrix& gram) {
  const SpanRepresentation span = SpanRepresentation::from_gram(gram);
  double success = 0.0;
  for (int m = 0; m < span.size(); ++m) success += chain_success(span, m);
  return 1.0 - success / double(span.size());
}

Eigen::VectorXd branch_distribution(const SpanRepresentation& span, int m) {
  check_message(m, span.size(), "branch_distribution");
  const int M = span.size();
  Eigen::VectorXd out(M + 1);
  // Unnormalized state along the all-no path; ||w||^2 is the path probability,
  // so each "yes" branch weight is read off without renormalizing.
  Eigen::VectorXcd w = span.basis.col(m);
  for (int i = 0; i < M; ++i) {
    const auto vi = span.basis.col(i);
    const std::complex<double> a = vi.dot(w);
    out(i) = std::norm(a);
    w -= vi * a;
  }
  out(M) = w.squaredNorm();
  return out;
}

DecodeOutcome simulate_trajectory(const SpanRepresentation& span, int m, CounterRng& rng) {
  check_message(m, span.size(), "simulate_trajectory");
  const int M = span.size();
  DecodeOutcome outcome{m, kFail, {}, "gram"};
  Eigen::VectorXcd chi = span.basis.col(m);
  for (int i = 0; i < M; ++i) {
    const auto vi = span.basis.col(i);
    const std::complex<double> a = vi.dot(chi);
    const double p_yes = std::min(1.0, std::norm(a));
    if (rng.next_double() < p_yes) {
      outcome.steps.push_back(1);
      outcome.decoded = i;
      return outcome;
    }
    outcome.steps.push_back(0);
    chi -= vi * a;
    const double denom = chi.norm();
    if (denom < tol::kCollapse)
      throw NumericalCollapse("simulate_trajectory: state fully consumed");
    chi /= denom;
  }
  return outcome;  // all-no terminal outcome
}

// --- physical receiver --------------------------------------------------------

FockReceiver::FockReceiver(const codec::Codebook& cb, fock::FockCutoff cutoff)
    : cb_(cb), cutoff_(cutoff), dim_(0) {
  using ensembles::Family;
  const int d = cutoff.d;
  switch (cb.family.tag) {
    case Family::kCoherent:
      reading_ = false;
      break;
    case Family::kReadingIII:
      reading_ = true;
      break;
    case Family::kReadingII:
      throw UnsupportedFamily(
          "FockReceiver: no sequential receiver is implemented for reading II");
  }
  dim_ = fock::ipow(d, cb.n);
  if (std::size_t(dim_) > kAmpBudget)
    throw BudgetExceeded("FockReceiver: state exceeds the amplitude budget");
  mask_ = fock::sector_mask(cb.n, cutoff);

  undo_.reserve(std::size_t(cb.M) * cb.n);
  redo_.reserve(std::size_t(cb.M) * cb.n);
  if (reading_) {
    const double r = std::asinh(std::sqrt(cb.ns));
    const fock::Matrix unsqueeze = fock::squeeze2_diagonal_block(-r, cutoff);
    const fock::Matrix squeeze = fock::squeeze2_diagonal_block(r, cutoff);
    for (int i = 0; i < cb.M; ++i) {
      for (int k = 0; k < cb.n; ++k) {
        const double theta = cb_.symbols(i, k).real();
        fock::Matrix up = fock::Matrix::Zero(d, d);
        fock::Matrix down = fock::Matrix::Zero(d, d);
        for (int n = 0; n < d; ++n) {
          // P(theta) acts on the signal mode only: e^{i n theta} on |n,n>.
          down(n, n) = std::polar(1.0, -theta * double(n));
          up(n, n) = std::polar(1.0, theta * double(n));
        }
        undo_.push_back(unsqueeze * down);  // S^H(r) (P^H(theta) x I)
        redo_.push_back(up * squeeze);      // (P(theta) x I) S(r)
      }
    }
  } else {
    for (int i = 0; i < cb.M; ++i) {
      for (int k = 0; k < cb.n; ++k) {
        const fock::Complex a = cb_.symbols(i, k);
        undo_.push_back(fock::gaussian_unitary(fock::GaussianUnitarySpec::displace(-a), cutoff));
        redo_.push_back(fock::gaussian_unitary(fock::GaussianUnitarySpec::displace(a), cutoff));
      }
    }
  }
}

fock::TruncatedState FockReceiver::initial_state(int m) const {
  if (reading_) {
    // Cell state in the |n,n> sector basis, one "level" per photon pair.
    const double ns = cb_.ns;
    if (fock::geometric_tail(ns, cutoff_.d) > tol::kLeakage)
      throw CutoffTooSmall("FockReceiver: geometric tail above leakage tolerance");
    fock::TruncatedState state{0, cutoff_, fock::Vector()};
    for (int k = 0; k < cb_.n; ++k) {
      fock::TruncatedState cell{1, cutoff_, fock::Vector(cutoff_.d)};
      const double theta = cb_.symbols(m, k).real();
      for (int n = 0; n < cutoff_.d; ++n) {
        const double w = (ns == 0.0) ? (n == 0 ? 1.0 : 0.0)
                                     : std::pow(ns / (ns + 1.0), double(n)) / (ns + 1.0);
        cell.amps(n) = std::polar(std::sqrt(w), theta * double(n));
      }
      cell.normalize();
      state = (k == 0) ? cell : fock::tensor(state, cell);
    }
    return state;
  }
  fock::TruncatedState state{0, cutoff_, fock::Vector()};
  for (int k = 0; k < cb_.n; ++k) {
    fock::TruncatedState mode = fock::coherent_state(cb_.symbols(m, k), cutoff_);
    state = (k == 0) ? mode : fock::tensor(state, mode);
  }
  return state;
}

DecodeOutcome FockReceiver::decode(int m, CounterRng& rng) const {
  check_message(m, cb_.M, "FockReceiver::decode");
  DecodeOutcome outcome{m, kFail, {}, "fock"};
  fock::TruncatedState state = initial_state(m);

  auto masked_leak = [&](const fock::TruncatedState& s) {
    double leak = 0.0;
    for (Eigen::Index i = 0; i < s.dim(); ++i)
      if (mask_[std::size_t(i)]) leak += std::norm(s.amps(i));
    return leak;
  };

  for (int i = 0; i < cb_.M; ++i) {
    for (int k = 0; k < cb_.n; ++k)
      state = fock::apply_single_mode(state, undo_[std::size_t(i) * cb_.n + k], k);
    state.normalize();
    if (masked_leak(state) > tol::kSectorLeak)
      throw CutoffTooSmall("FockReceiver: state left the trusted sector");

    const double p_vac = std::min(1.0, std::norm(state.amps(0)));
    if (rng.next_double() < p_vac) {
      outcome.steps.push_back(1);
      outcome.decoded = i;
      return outcome;
    }
    outcome.steps.push_back(0);
    if (1.0 - p_vac < 1e-12)
      throw DegenerateBranch("FockReceiver: not-vacuum branch has no support");
    state.amps(0) = 0.0;
    state.normalize();
    for (int k = 0; k < cb_.n; ++k)
      state = fock::apply_single_mode(state, redo_[std::size_t(i) * cb_.n + k], k);
    state.normalize();
  }
  return outcome;
}

DecodeOutcome fock_receiver(const codec::Codebook& cb, int m, fock::FockCutoff cutoff,
                            CounterRng& rng) {
  return FockReceiver(cb, cutoff).decode(m, rng);
}

fock::FockCutoff recommended_cutoff(const codec::Codebook& cb) {
  using ensembles::Family;
  if (cb.family.tag == Family::kCoherent) {
    // Worst composite displacement during decoding is bounded by twice the
    // largest symbol magnitude; keep that Poisson support within d/2.
    const double amax = cb.symbols.cwiseAbs().maxCoeff();
    const int levels = fock::poisson_levels(4.0 * amax * amax, 1e-8);
    return fock::FockCutoff(std::max(4, 2 * levels));
  }
  if (cb.family.tag == Family::kReadingIII) {
    // Unsqueezing a phase-mismatched cell yields at most sinh^2(2r)
    // = 4 ns (ns+1) mean photon pairs.
    const double n_eff = 4.0 * cb.ns * (cb.ns + 1.0);
    const int levels = fock::geometric_levels(n_eff, 1e-8);
    return fock::FockCutoff(std::max(4, 2 * levels));
  }
  throw UnsupportedFamily("recommended_cutoff: no physical receiver for this family");
}

DecodeOutcome cpn_receiver(const codec::Codebook& cb, int true_slot, CounterRng& rng) {
  if (cb.prior != codec::Prior::kPpm)
    throw InvalidParams("cpn_receiver: codebook is not pulse-position modulated");
  check_message(true_slot, cb.M, "cpn_receiver");
  const int M = cb.M;
  const double ns = cb.ns;
  DecodeOutcome outcome{true_slot, kFail, {}, "cpn"};

  auto clicks = [&](double mean_photons) {
    if (mean_photons <= 0.0) return false;
    return rng.next_double() < 1.0 - std::exp(-mean_photons);
  };

  for (int h = 0; h < M; ++h) {
    // Null slot h with D^H(alpha) and direct-detect it.
    const bool click = clicks(true_slot == h ? 0.0 : ns);
    outcome.steps.push_back(click ? 1 : 0);
    if (click) continue;  // hypothesis h rejected; recurse on the next slots
    // Confirm h by direct-detecting the remaining (un-nulled) slots.
    int found = kFail;
    for (int j = h + 1; j < M; ++j) {
      const bool c = clicks(true_slot == j ? ns : 0.0);
      outcome.steps.push_back(c ? 1 : 0);
      if (c) {
        found = j;
        break;
      }
    }
    outcome.decoded = (found == kFail) ? h : found;
    return outcome;
  }
  return outcome;  // every hypothesis clicked; unreachable with ideal detectors
}

std::string engine_name(Engine e) {
  switch (e) {
    case Engine::kGram: return "gram";
    case Engine::kFock: return "fock";
    case Engine::kCpn: return "cpn";
  }
  throw InvalidParams("engine_name: unrecognized engine");
}

Engine parse_engine(std::string_view name) {
  if (name == "gram") return Engine::kGram;
  if (name == "fock") return Engine::kFock;
  if (name == "cpn") return Engine::kCpn;
  throw InvalidParams("parse_engine: '" + std::string(name) + "'");
}

namespace {

ErrorEstimate wilson_estimate(std::uint64_t trials, std::uint64_t errors) {
  ErrorEstimate est;
  est.trials = trials;
  est.errors = errors;
  est.p_hat = double(errors) / double(trials);
  const double z = 1.959963984540054;  // 95%
  const double n = double(trials);
  const double p = est.p_hat;
  const double denom = 1.0 + z * z / n;
  const double center = (p + z * z / (2.0 * n)) / denom;
  const double half =
      z * std::sqrt(p * (1.0 - p) / n + z * z / (4.0 * n * n)) / denom;
  est.ci_lo = std::max(0.0, center - half);
  est.ci_hi = std::min(1.0, center + half);
  return est;
}

}  // namespace

ErrorEstimate monte_carlo_error(Engine engine, const codec::Codebook& cb,
                                std::uint64_t trials, std::uint64_t seed,
                                const McOptions& options) {
  if (trials < 1) throw InvalidParams("monte_carlo_error: need trials >= 1");
  const auto t0 = std::chrono::steady_clock::now();

  // Per-engine setup done once, shared read-only across workers.
  std::optional<SpanRepresentation> span;
  std::optional<FockReceiver> receiver;
  if (engine == Engine::kGram) {
    span = SpanRepresentation::from_gram(codec::codeword_gram(cb));
  } else if (engine == Engine::kFock) {
    receiver.emplace(cb, options.cutoff ? *options.cutoff : recommended_cutoff(cb));
  } else if (cb.prior != codec::Prior::kPpm) {
    throw InvalidParams("monte_carlo_error: cpn engine requires a ppm codebook");
  }

  auto run_trial = [&](std::uint64_t t) {
    CounterRng rng = CounterRng::stream(seed, "trial", t);
    const int m = int(rng.next_below(std::uint64_t(cb.M)));
    DecodeOutcome out{m, kFail, {}, ""};
    switch (engine) {
      case Engine::kGram: out = simulate_trajectory(*span, m, rng); break;
      case Engine::kFock: out = receiver->decode(m, rng); break;
      case Engine::kCpn: out = cpn_receiver(cb, m, rng); break;
    }
    return out.decoded != m;
  };

  const int workers = std::max(1, options.workers);
  std::uint64_t errors = 0;
  if (workers == 1 || trials < 256) {
    for (std::uint64_t t = 0; t < trials; ++t) errors += run_trial(t) ? 1 : 0;
  } else {
    // Per-trial streams make the tally independent of the partition.
    std::vector<std::uint64_t> partial(std::size_t(workers), 0);
    std::vector<std::thread> pool;
    const std::uint64_t chunk = (trials + workers - 1) / workers;
    std::exception_ptr failure;
    std::mutex failure_mutex;
    for (int w = 0; w < workers; ++w) {
      pool.emplace_back([&, w] {
        try {
          const std::uint64_t lo = std::uint64_t(w) * chunk;
          const std::uint64_t hi = std::min(trials, lo + chunk);
          std::uint64_t local = 0;
          for (std::uint64_t t = lo; t < hi; ++t) local += run_trial(t) ? 1 : 0;
          partial[std::size_t(w)] = local;
        } catch (...) {
          std::lock_guard<std::mutex> lock(failure_mutex);
          if (!failure) failure = std::current_exception();
        }
      });
    }
    for (auto& th : pool) th.join();
    if (failure) std::rethrow_exception(failure);
    errors = std::accumulate(partial.begin(), partial.end(), std::uint64_t(0));
  }

  ErrorEstimate est = wilson_estimate(trials, errors);
  est.seed = seed;
  est.engine_id = engine_name(engine);
  est.wall_ms = std::chrono::duration<double, std::milli>(
                    std::chrono::steady_clock::now() - t0)
                    .count();
  return est;
}

codec::Codebook expurgate_worst_half(const codec::Codebook& cb) {
  if (cb.M < 2) throw InvalidParams("expurgate_worst_half: need M >= 2");
  const SpanRepresentation span =
      SpanRepresentation::from_gram(codec::codeword_gram(cb));
  std::vector<int> order(std::size_t(cb.M));
  std::iota(order.begin(), order.end(), 0);
  std::vector<double> success(std::size_t(cb.M));
  for (int m = 0; m < cb.M; ++m) success[std::size_t(m)] = chain_success(span, m);
  std::stable_sort(order.begin(), order.end(), [&](int a, int b) {
    return success[std::size_t(a)] > success[std::size_t(b)];
  });
  const int keep = cb.M / 2;
  std::vector<int> kept(order.begin(), order.begin() + keep);
  std::sort(kept.begin(), kept.end());

  codec::Codebook out = cb;
  out.M = keep;
  out.symbols = Eigen::MatrixXcd(keep, cb.n);
  for (int m = 0; m < keep; ++m) out.symbols.row(m) = cb.symbols.row(kept[std::size_t(m)]);
  return out;
}

}  // namespace seqdec::decoder
