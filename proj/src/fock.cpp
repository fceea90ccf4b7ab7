#include "seqdec/fock.hpp"

#include <cmath>
#include <vector>

#include <unsupported/Eigen/KroneckerProduct>
#include <unsupported/Eigen/MatrixFunctions>

namespace seqdec::fock {

namespace {

Matrix annihilation(int d) {
  Matrix a = Matrix::Zero(d, d);
  for (int n = 1; n < d; ++n) a(n - 1, n) = std::sqrt(double(n));
  return a;
}

// ||(U^H U - I)||_F restricted to the rows/cols listed in `sector`.
double sector_defect(const Matrix& u, const std::vector<Eigen::Index>& sector) {
  const Eigen::Index s = Eigen::Index(sector.size());
  Matrix cols(u.rows(), s);
  for (Eigen::Index j = 0; j < s; ++j) cols.col(j) = u.col(sector[j]);
  Matrix block = cols.adjoint() * cols;
  block.diagonal().array() -= 1.0;
  return block.norm();
}

}  // namespace

Eigen::Index ipow(int base, int exp) {
  Eigen::Index r = 1;
  for (int i = 0; i < exp; ++i) r *= base;
  return r;
}

TruncatedState& TruncatedState::normalize() {
  const double nrm = amps.norm();
  if (nrm < tol::kCollapse)
    throw NumericalCollapse("normalize: state has (numerically) no support");
  amps /= nrm;
  return *this;
}

TruncatedState vacuum_state(int modes, FockCutoff cutoff) {
  if (modes < 1) throw InvalidParams("vacuum_state: need at least one mode");
  TruncatedState s{modes, cutoff, Vector::Zero(ipow(cutoff.d, modes))};
  s.amps(0) = 1.0;
  return s;
}

TruncatedState tensor(const TruncatedState& a, const TruncatedState& b) {
  if (a.cutoff.d != b.cutoff.d)
    throw DimensionMismatch("tensor: cutoffs differ");
  TruncatedState out{a.modes + b.modes, a.cutoff, Vector(a.dim() * b.dim())};
  for (Eigen::Index i = 0; i < a.dim(); ++i)
    out.amps.segment(i * b.dim(), b.dim()) = a.amps(i) * b.amps;
  return out;
}

Complex inner(const TruncatedState& a, const TruncatedState& b) {
  if (a.dim() != b.dim()) throw DimensionMismatch("inner: dimensions differ");
  return a.amps.dot(b.amps);  // Eigen's dot conjugates the left argument
}

double poisson_tail(double lambda, int d) {
  if (lambda < 0.0) throw InvalidParams("poisson_tail: lambda must be >= 0");
  if (lambda == 0.0) return 0.0;
  // Sum pmf forward from n = d; stable for any magnitude via log start.
  double term = std::exp(-lambda + d * std::log(lambda) - std::lgamma(double(d) + 1.0));
  double tail = 0.0;
  for (int n = d; n < d + 2000; ++n) {
    tail += term;
    term *= lambda / double(n + 1);
    if (term < tail * 1e-18 && term < 1e-300) break;
  }
  return tail;
}

double geometric_tail(double ns, int d) {
  if (ns < 0.0) throw InvalidParams("geometric_tail: ns must be >= 0");
  if (ns == 0.0) return 0.0;
  return std::pow(ns / (ns + 1.0), double(d));
}

int poisson_levels(double lambda, double tail_tol) {
  int d = 2;
  while (poisson_tail(lambda, d) > tail_tol) ++d;
  return d;
}

int geometric_levels(double ns, double tail_tol) {
  int d = 2;
  while (geometric_tail(ns, d) > tail_tol) ++d;
  return d;
}

FockCutoff coherent_cutoff(Complex alpha, double tail_tol) {
  return FockCutoff(poisson_levels(std::norm(alpha), tail_tol));
}

FockCutoff thermal_cutoff(double ns, double tail_tol) {
  return FockCutoff(geometric_levels(ns, tail_tol));
}

TruncatedState coherent_state(Complex alpha, FockCutoff cutoff) {
  const double lambda = std::norm(alpha);
  if (poisson_tail(lambda, cutoff.d) > tol::kLeakage)
    throw CutoffTooSmall("coherent_state: Poisson tail above leakage tolerance");
  TruncatedState s{1, cutoff, Vector(cutoff.d)};
  Complex c = std::exp(-lambda / 2.0);
  for (int n = 0; n < cutoff.d; ++n) {
    s.amps(n) = c;
    c *= alpha / std::sqrt(double(n + 1));
  }
  s.normalize();
  return s;
}

DensityMatrix thermal_state(double ns, FockCutoff cutoff) {
  if (ns < 0.0) throw InvalidParams("thermal_state: ns must be >= 0");
  if (geometric_tail(ns, cutoff.d) > tol::kLeakage)
    throw CutoffTooSmall("thermal_state: geometric tail above leakage tolerance");
  Eigen::VectorXd diag(cutoff.d);
  for (int n = 0; n < cutoff.d; ++n)
    diag(n) = (ns == 0.0) ? (n == 0 ? 1.0 : 0.0)
                          : std::pow(ns / (ns + 1.0), double(n)) / (ns + 1.0);
  diag /= diag.sum();
  DensityMatrix rho{1, cutoff, Matrix::Zero(cutoff.d, cutoff.d)};
  rho.rho.diagonal() = diag.cast<Complex>();
  return rho;
}

Matrix gaussian_unitary(const GaussianUnitarySpec& spec, FockCutoff cutoff) {
  const int d = cutoff.d;
  const int half = d / 2;
  using Kind = GaussianUnitarySpec::Kind;
  Matrix u;
  std::vector<Eigen::Index> sector;
  switch (spec.kind) {
    case Kind::kDisplace: {
      const Matrix a = annihilation(d);
      Matrix gen = spec.alpha * a.adjoint() - std::conj(spec.alpha) * a;
      u = gen.exp();
      for (int n = 0; n <= half; ++n) sector.push_back(n);
      break;
    }
    case Kind::kPhase: {
      u = Matrix::Zero(d, d);
      for (int n = 0; n < d; ++n)
        u(n, n) = std::polar(1.0, spec.theta * double(n));
      for (int n = 0; n <= half; ++n) sector.push_back(n);
      break;
    }
    case Kind::kSqueeze2: {
      const Matrix a = annihilation(d);
      const Matrix ad = a.adjoint();
      Matrix gen = spec.r * (Eigen::kroneckerProduct(ad, ad) - Eigen::kroneckerProduct(a, a));
      u = gen.exp();
      for (int n1 = 0; n1 <= half; ++n1)
        for (int n2 = 0; n2 <= half; ++n2)
          sector.push_back(Eigen::Index(n1) * d + n2);
      break;
    }
  }
  if (sector_defect(u, sector) > tol::kUnitaryDefect)
    throw CutoffTooSmall("gaussian_unitary: unitary defect bound not met on trusted sector");
  return u;
}

Matrix squeeze2_diagonal_block(double r, FockCutoff cutoff) {
  const int d = cutoff.d;
  // Generator of r(a'b' - ab) on span{|n,n>}: |n,n> -> r(n+1)|n+1,n+1> - rn|n-1,n-1>.
  Eigen::MatrixXd gen = Eigen::MatrixXd::Zero(d, d);
  for (int n = 0; n + 1 < d; ++n) {
    gen(n + 1, n) = r * double(n + 1);
    gen(n, n + 1) = -r * double(n + 1);
  }
  Eigen::MatrixXd u = gen.exp();
  return u.cast<Complex>();
}

namespace {

TruncatedState apply_block(const TruncatedState& state, const Matrix& u,
                           Eigen::Index before, Eigen::Index blockdim, Eigen::Index after) {
  TruncatedState out{state.modes, state.cutoff, Vector(state.dim())};
  using RowMat = Eigen::Matrix<Complex, Eigen::Dynamic, Eigen::Dynamic, Eigen::RowMajor>;
  const Eigen::Index span = blockdim * after;
  for (Eigen::Index b = 0; b < before; ++b) {
    Eigen::Map<const RowMat, 0, Eigen::OuterStride<>> in(
        state.amps.data() + b * span, blockdim, after, Eigen::OuterStride<>(after));
    Eigen::Map<RowMat, 0, Eigen::OuterStride<>> o(
        out.amps.data() + b * span, blockdim, after, Eigen::OuterStride<>(after));
    o.noalias() = u * in;
  }
  return out;
}

}  // namespace

TruncatedState apply_single_mode(const TruncatedState& state, const Matrix& u, int mode) {
  const int d = state.cutoff.d;
  if (mode < 0 || mode >= state.modes)
    throw IndexOutOfRange("apply_single_mode: mode index out of range");
  if (u.rows() != d || u.cols() != d)
    throw DimensionMismatch("apply_single_mode: operator does not match cutoff");
  return apply_block(state, u, ipow(d, mode), d, ipow(d, state.modes - mode - 1));
}

TruncatedState apply_adjacent_pair(const TruncatedState& state, const Matrix& u, int mode) {
  const int d = state.cutoff.d;
  if (mode < 0 || mode + 1 >= state.modes)
    throw IndexOutOfRange("apply_adjacent_pair: mode pair out of range");
  if (u.rows() != Eigen::Index(d) * d || u.cols() != Eigen::Index(d) * d)
    throw DimensionMismatch("apply_adjacent_pair: operator does not match cutoff");
  return apply_block(state, u, ipow(d, mode), Eigen::Index(d) * d,
                     ipow(d, state.modes - mode - 2));
}

VacuumOrNot vacuum_or_not(const TruncatedState& psi) {
  const Complex c = psi.amps(0);
  double p0 = std::norm(c);
  p0 = std::min(1.0, std::max(0.0, p0));
  const double p1 = 1.0 - p0;

  VacuumOrNot result{MeasurementOutcome{Branch::kVacuum, p0,
                                        vacuum_state(psi.modes, psi.cutoff)},
                     std::nullopt};
  if (p1 >= 1e-12) {
    TruncatedState rest = psi;
    rest.amps(0) = 0.0;  // psi - c|0..0> zeroes the vacuum component exactly
    rest.normalize();
    result.not_vacuum = MeasurementOutcome{Branch::kNotVacuum, p1, std::move(rest)};
  }
  return result;
}

namespace {

Eigen::VectorXd hermitian_eigenvalues(const Matrix& m, const char* what) {
  if (m.rows() != m.cols()) throw DimensionMismatch(std::string(what) + ": not square");
  if ((m - m.adjoint()).norm() > 1e-8 * std::max(1.0, m.norm()))
    throw InvalidOperator(std::string(what) + ": matrix is not Hermitian");
  Eigen::SelfAdjointEigenSolver<Matrix> es(m, Eigen::EigenvaluesOnly);
  return es.eigenvalues();
}

}  // namespace

double entropy_bits(const Matrix& rho) {
  Eigen::VectorXd ev = hermitian_eigenvalues(rho, "entropy");
  double h = 0.0;
  for (Eigen::Index i = 0; i < ev.size(); ++i) {
    double l = ev(i);
    if (l < -1e-10)
      throw InvalidOperator("entropy: eigenvalue below -1e-10, not a density matrix");
    if (l < 1e-15) continue;
    h -= l * std::log2(l);
  }
  return h;
}

double entropy_bits(const DensityMatrix& rho) { return entropy_bits(rho.rho); }

double trace_distance(const Matrix& a, const Matrix& b) {
  if (a.rows() != b.rows() || a.cols() != b.cols())
    throw DimensionMismatch("trace_distance: dimensions differ");
  Eigen::VectorXd ev = hermitian_eigenvalues(a - b, "trace_distance");
  return ev.array().abs().sum();
}

double trace_distance(const DensityMatrix& a, const DensityMatrix& b) {
  return trace_distance(a.rho, b.rho);
}

std::vector<std::uint8_t> sector_mask(int modes, FockCutoff cutoff) {
  const int d = cutoff.d;
  const int half = d / 2;
  std::vector<std::uint8_t> mask(std::size_t(ipow(d, modes)), 0);
  for (std::size_t idx = 0; idx < mask.size(); ++idx) {
    std::size_t rest = idx;
    for (int k = 0; k < modes; ++k) {
      if (int(rest % d) > half) {
        mask[idx] = 1;
        break;
      }
      rest /= d;
    }
  }
  return mask;
}

double sector_leak(const TruncatedState& state) {
  const auto mask = sector_mask(state.modes, state.cutoff);
  double leak = 0.0;
  for (Eigen::Index i = 0; i < state.dim(); ++i)
    if (mask[std::size_t(i)]) leak += std::norm(state.amps(i));
  return leak;
}

}  // namespace seqdec::fock
