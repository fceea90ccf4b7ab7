#include "seqdec/bounds.hpp"

#include <cmath>
#include <limits>

namespace seqdec::bounds {

namespace {

void check_square(const Matrix& m, const char* what) {
  if (m.rows() != m.cols()) throw DimensionMismatch(std::string(what) + ": not square");
}

void check_hermitian(const Matrix& m, const char* what, double tolerance = 1e-10) {
  check_square(m, what);
  if ((m - m.adjoint()).norm() > tolerance * std::max(1.0, m.norm()))
    throw InvalidOperator(std::string(what) + ": not Hermitian");
}

// Validates 0 <= lambda <= I within 1e-10.
void check_contraction(const Matrix& lambda, const char* what) {
  check_hermitian(lambda, what);
  Eigen::SelfAdjointEigenSolver<Matrix> es(lambda, Eigen::EigenvaluesOnly);
  const double lo = es.eigenvalues().minCoeff();
  const double hi = es.eigenvalues().maxCoeff();
  if (lo < -1e-10 || hi > 1.0 + 1e-10)
    throw InvalidOperator(std::string(what) + ": spectrum outside [0,1]");
}

void check_density(const Matrix& rho, const char* what) {
  check_hermitian(rho, what);
  Eigen::SelfAdjointEigenSolver<Matrix> es(rho, Eigen::EigenvaluesOnly);
  if (es.eigenvalues().minCoeff() < -1e-10)
    throw InvalidOperator(std::string(what) + ": negative eigenvalue");
  if (std::abs(rho.trace().real() - 1.0) > 1e-9)
    throw InvalidOperator(std::string(what) + ": trace differs from 1");
}

double trace_norm(const Matrix& hermitian) {
  Eigen::SelfAdjointEigenSolver<Matrix> es(hermitian, Eigen::EigenvaluesOnly);
  return es.eigenvalues().array().abs().sum();
}

Matrix psd_sqrt(const Matrix& m) {
  Eigen::SelfAdjointEigenSolver<Matrix> es(m);
  Eigen::VectorXd vals = es.eigenvalues().cwiseMax(0.0);
  return es.eigenvectors() * vals.cwiseSqrt().asDiagonal() * es.eigenvectors().adjoint();
}

}  // namespace

BoundReport make_report(double lhs, double rhs) {
  const double slack = rhs - lhs;
  return BoundReport{lhs, rhs, slack, slack >= -1e-9};
}

BoundReport trace_lemma_gap(const Matrix& rho, const Matrix& sigma, const Matrix& lambda) {
  check_density(rho, "trace_lemma_gap(rho)");
  check_density(sigma, "trace_lemma_gap(sigma)");
  check_contraction(lambda, "trace_lemma_gap(lambda)");
  if (rho.rows() != sigma.rows() || rho.rows() != lambda.rows())
    throw DimensionMismatch("trace_lemma_gap: dimensions differ");
  const double lhs = (lambda * rho).trace().real();
  const double rhs = (lambda * sigma).trace().real() + trace_norm(rho - sigma);
  return make_report(lhs, rhs);
}

TypicalityReport typicality_report(const TypicalityParams& params) {
  const int k = int(params.p.size());
  if (k < 1 || k > 16) throw InvalidParams("typicality_report: support must be in [1,16]");
  if (params.n < 1 || params.n > 20) throw InvalidParams("typicality_report: n must be in [1,20]");
  if (params.delta <= 0.0) throw InvalidParams("typicality_report: delta must be > 0");
  if (params.epsilon <= 0.0 || params.epsilon >= 1.0)
    throw InvalidParams("typicality_report: epsilon must be in (0,1)");
  double total = 0.0;
  for (double pi : params.p) {
    if (pi < 0.0) throw InvalidParams("typicality_report: negative probability");
    total += pi;
  }
  if (std::abs(total - 1.0) > 1e-12)
    throw InvalidParams("typicality_report: distribution does not sum to 1");

  // Type classes of length-n strings over k symbols: C(n+k-1, k-1) of them.
  double classes = 1.0;
  for (int i = 1; i < k; ++i)
    classes *= double(params.n + i) / double(i);
  if (classes > 2e7) throw EnumerationTooLarge("typicality_report: too many type classes");

  double h = 0.0;
  for (double pi : params.p)
    if (pi > 0.0) h -= pi * std::log2(pi);

  const double n = double(params.n);
  TypicalityReport rep{};
  rep.entropy_bits = h;
  rep.epsilon_target = params.epsilon;
  rep.log2_size_bound = n * (h + params.delta);
  rep.min_member_log2p = std::numeric_limits<double>::infinity();
  rep.max_member_log2p = -std::numeric_limits<double>::infinity();

  long double set_size = 0.0L;
  long double mass = 0.0L;
  std::vector<int> counts(std::size_t(k), 0);

  // Multinomial coefficient n! / prod(c_i!) built from binomials.
  auto multinomial = [&]() {
    long double r = 1.0L;
    int rem = params.n;
    for (int c : counts) {
      long double b = 1.0L;
      for (int i = 1; i <= c; ++i) b = b * (long double)(rem - c + i) / (long double)i;
      r *= b;
      rem -= c;
    }
    return r;
  };

  auto visit = [&]() {
    ++rep.type_classes;
    double log2p = 0.0;
    for (int i = 0; i < k; ++i) {
      if (counts[std::size_t(i)] == 0) continue;
      if (params.p[std::size_t(i)] == 0.0) return;  // zero-probability sequences
      log2p += counts[std::size_t(i)] * std::log2(params.p[std::size_t(i)]);
    }
    const double sample_h = -log2p / n;
    if (std::abs(sample_h - h) > params.delta) return;
    const long double cnt = multinomial();
    set_size += cnt;
    mass += cnt * std::exp2((long double)log2p);
    rep.min_member_log2p = std::min(rep.min_member_log2p, log2p);
    rep.max_member_log2p = std::max(rep.max_member_log2p, log2p);
  };

  // Enumerate compositions of n into k parts.
  auto recurse = [&](auto&& self, int sym, int remaining) -> void {
    if (sym == k - 1) {
      counts[std::size_t(sym)] = remaining;
      visit();
      return;
    }
    for (int c = 0; c <= remaining; ++c) {
      counts[std::size_t(sym)] = c;
      self(self, sym + 1, remaining - c);
    }
  };
  recurse(recurse, 0, params.n);

  rep.mass = double(mass);
  rep.mass_ok = rep.mass >= 1.0 - params.epsilon;
  rep.log2_size = set_size > 0.0L ? double(std::log2(set_size))
                                  : -std::numeric_limits<double>::infinity();
  rep.size_ok = rep.log2_size <= rep.log2_size_bound + 1e-9;
  rep.members_ok = set_size == 0.0L ||
                   (rep.min_member_log2p >= -n * (h + params.delta) - 1e-9 &&
                    rep.max_member_log2p <= -n * (h - params.delta) + 1e-9);
  return rep;
}

BoundReport gentle_operator_gap(const std::vector<WeightedState>& ensemble,
                                const Matrix& lambda) {
  if (ensemble.empty()) throw InvalidParams("gentle_operator_gap: empty ensemble");
  check_contraction(lambda, "gentle_operator_gap(lambda)");
  Matrix avg = Matrix::Zero(lambda.rows(), lambda.cols());
  double weight = 0.0;
  for (const auto& ws : ensemble) {
    if (ws.weight < 0.0) throw InvalidParams("gentle_operator_gap: negative weight");
    check_density(ws.rho, "gentle_operator_gap(rho_x)");
    if (ws.rho.rows() != lambda.rows())
      throw DimensionMismatch("gentle_operator_gap: dimensions differ");
    avg += ws.weight * ws.rho;
    weight += ws.weight;
  }
  if (std::abs(weight - 1.0) > 1e-9)
    throw InvalidParams("gentle_operator_gap: weights do not sum to 1");

  const double eps = std::max(0.0, 1.0 - (lambda * avg).trace().real());
  const Matrix root = psd_sqrt(lambda);
  double lhs = 0.0;
  for (const auto& ws : ensemble)
    lhs += ws.weight * trace_norm(root * ws.rho * root - ws.rho);
  return make_report(lhs, 2.0 * std::sqrt(eps));
}

BoundReport sen_bound_gap(const Matrix& sigma, const std::vector<Matrix>& projectors) {
  check_hermitian(sigma, "sen_bound_gap(sigma)");
  {
    Eigen::SelfAdjointEigenSolver<Matrix> es(sigma, Eigen::EigenvaluesOnly);
    if (es.eigenvalues().minCoeff() < -1e-9)
      throw InvalidOperator("sen_bound_gap: sigma has a negative eigenvalue");
  }
  const double tr_sigma = sigma.trace().real();
  if (tr_sigma > 1.0 + 1e-9)
    throw InvalidOperator("sen_bound_gap: sigma has trace above 1");

  double failure_sum = 0.0;
  Matrix chain = Matrix::Identity(sigma.rows(), sigma.cols());
  for (const auto& p : projectors) {
    if (p.rows() != sigma.rows())
      throw DimensionMismatch("sen_bound_gap: projector dimension differs");
    if ((p - p.adjoint()).norm() > 1e-10 || (p * p - p).norm() > 1e-10)
      throw NotAProjector("sen_bound_gap: operator is not a projector");
    chain = p * chain;  // projectors[0] innermost
    failure_sum += std::max(0.0, ((Matrix::Identity(sigma.rows(), sigma.cols()) - p) * sigma)
                                     .trace()
                                     .real());
  }
  const double survived = (chain * sigma * chain.adjoint()).trace().real();
  return make_report(tr_sigma - survived, 2.0 * std::sqrt(failure_sum));
}

double epsilon_prime(double epsilon, int n, double h_bits, double delta, double m_count) {
  if (epsilon < 0.0 || epsilon >= 1.0)
    throw InvalidParams("epsilon_prime: epsilon must be in [0,1)");
  if (delta <= 0.0) throw InvalidParams("epsilon_prime: delta must be > 0");
  if (m_count < 0.0) throw InvalidParams("epsilon_prime: |M| must be >= 0");
  // 2^{-n(H - delta)} |M| in log2 space.
  const double codebook_term =
      m_count == 0.0 ? 0.0
                     : std::exp2(-double(n) * (h_bits - delta) + std::log2(m_count));
  const double root_eps = std::sqrt(epsilon);
  return epsilon + 2.0 * root_eps + 2.0 * std::sqrt(2.0 * root_eps + codebook_term);
}

// --- random objects -------------------------------------------------------------

namespace {

Matrix ginibre(int dim, CounterRng& rng) {
  Matrix a(dim, dim);
  for (int i = 0; i < dim; ++i)
    for (int j = 0; j < dim; ++j)
      a(i, j) = std::complex<double>(rng.next_gaussian(), rng.next_gaussian());
  return a;
}

}  // namespace

Matrix haar_unitary(int dim, CounterRng& rng) {
  Eigen::HouseholderQR<Matrix> qr(ginibre(dim, rng));
  Matrix q = qr.householderQ() * Matrix::Identity(dim, dim);
  // Fix the phase ambiguity so the distribution is Haar.
  Matrix r = qr.matrixQR().triangularView<Eigen::Upper>();
  for (int j = 0; j < dim; ++j) {
    const std::complex<double> d = r(j, j);
    if (std::abs(d) > 0.0) q.col(j) *= d / std::abs(d);
  }
  return q;
}

Matrix random_density(int dim, CounterRng& rng) {
  const Matrix a = ginibre(dim, rng);
  Matrix rho = a * a.adjoint();
  rho /= rho.trace().real();
  // Symmetrize away the last bits of rounding.
  return (rho + rho.adjoint()) / 2.0;
}

Matrix random_projector(int dim, CounterRng& rng) {
  const int rank = 1 + int(rng.next_below(std::uint64_t(dim)));
  const Matrix q = haar_unitary(dim, rng).leftCols(rank);
  Matrix p = q * q.adjoint();
  return (p + p.adjoint()) / 2.0;
}

Matrix random_contraction(int dim, CounterRng& rng) {
  const Matrix u = haar_unitary(dim, rng);
  Eigen::VectorXd vals(dim);
  for (int i = 0; i < dim; ++i) vals(i) = rng.next_double();
  Matrix l = u * vals.cast<std::complex<double>>().asDiagonal() * u.adjoint();
  return (l + l.adjoint()) / 2.0;
}

Eigen::VectorXcd random_pure(int dim, CounterRng& rng) {
  Eigen::VectorXcd v(dim);
  for (int i = 0; i < dim; ++i)
    v(i) = std::complex<double>(rng.next_gaussian(), rng.next_gaussian());
  v.normalize();
  return v;
}

// --- sweeps ---------------------------------------------------------------------

SweepSummary sen_sweep(std::uint64_t samples, int max_dim, std::uint64_t seed) {
  if (max_dim < 2) throw InvalidParams("sen_sweep: max_dim must be >= 2");
  SweepSummary summary{samples, 0, std::numeric_limits<double>::infinity()};
  for (std::uint64_t s = 0; s < samples; ++s) {
    CounterRng rng = CounterRng::stream(seed, "sen", s);
    const int dim = 2 + int(rng.next_below(std::uint64_t(max_dim - 1)));
    const int chain_len = 1 + int(rng.next_below(5));
    Matrix sigma = random_density(dim, rng) * rng.next_double();  // subnormalized
    std::vector<Matrix> projectors;
    projectors.reserve(std::size_t(chain_len));
    for (int i = 0; i < chain_len; ++i) projectors.push_back(random_projector(dim, rng));
    const BoundReport rep = sen_bound_gap(sigma, projectors);
    summary.min_slack = std::min(summary.min_slack, rep.slack);
    if (!rep.satisfied) ++summary.violations;
  }
  return summary;
}

SweepSummary gentle_sweep(std::uint64_t samples, int max_dim, std::uint64_t seed) {
  if (max_dim < 2) throw InvalidParams("gentle_sweep: max_dim must be >= 2");
  SweepSummary summary{samples, 0, std::numeric_limits<double>::infinity()};
  for (std::uint64_t s = 0; s < samples; ++s) {
    CounterRng rng = CounterRng::stream(seed, "gentle", s);
    const int dim = 2 + int(rng.next_below(std::uint64_t(max_dim - 1)));
    const int states = 1 + int(rng.next_below(4));
    std::vector<WeightedState> ensemble;
    double total = 0.0;
    for (int i = 0; i < states; ++i) {
      const double w = rng.next_double_open();
      ensemble.push_back({w, random_density(dim, rng)});
      total += w;
    }
    for (auto& ws : ensemble) ws.weight /= total;
    const BoundReport rep = gentle_operator_gap(ensemble, random_contraction(dim, rng));
    summary.min_slack = std::min(summary.min_slack, rep.slack);
    if (!rep.satisfied) ++summary.violations;
  }
  return summary;
}

SweepSummary trace_lemma_sweep(std::uint64_t samples, int max_dim, std::uint64_t seed) {
  if (max_dim < 2) throw InvalidParams("trace_lemma_sweep: max_dim must be >= 2");
  SweepSummary summary{samples, 0, std::numeric_limits<double>::infinity()};
  for (std::uint64_t s = 0; s < samples; ++s) {
    CounterRng rng = CounterRng::stream(seed, "trace-lemma", s);
    const int dim = 2 + int(rng.next_below(std::uint64_t(max_dim - 1)));
    const BoundReport rep = trace_lemma_gap(random_density(dim, rng),
                                            random_density(dim, rng),
                                            random_contraction(dim, rng));
    summary.min_slack = std::min(summary.min_slack, rep.slack);
    if (!rep.satisfied) ++summary.violations;
  }
  return summary;
}

}  // namespace seqdec::bounds
