#include "doctest.h"

#include <cmath>
#include <complex>

#include "seqdec/bounds.hpp"
#include "seqdec/ensembles.hpp"
#include "seqdec/fock.hpp"
#include "seqdec/rng.hpp"

using namespace seqdec;
using fock::Complex;
using fock::FockCutoff;

namespace {

// Independent oracle: coherent amplitudes straight from the series,
// without the renormalization step.
Complex coherent_series_amp(Complex alpha, int n) {
  Complex c = std::exp(-std::norm(alpha) / 2.0);
  for (int k = 1; k <= n; ++k) c *= alpha / std::sqrt(double(k));
  return c;
}

fock::TruncatedState random_state(int modes, FockCutoff cutoff, CounterRng& rng) {
  fock::TruncatedState s{modes, cutoff, fock::Vector(fock::ipow(cutoff.d, modes))};
  for (Eigen::Index i = 0; i < s.dim(); ++i)
    s.amps(i) = Complex(rng.next_gaussian(), rng.next_gaussian());
  s.normalize();
  return s;
}

}  // namespace

TEST_SUITE("fock") {

TEST_CASE("cutoff selection follows the leakage rule") {
  CHECK_THROWS_AS(FockCutoff(1), InvalidParams);
  // Smallest admissible d: tail(d) <= 1e-9 < tail(d-1).
  const int d_coh = fock::coherent_cutoff(Complex(1.0, 0.0)).d;
  CHECK(fock::poisson_tail(1.0, d_coh) <= tol::kLeakage);
  CHECK(fock::poisson_tail(1.0, d_coh - 1) > tol::kLeakage);
  const int d_th = fock::thermal_cutoff(1.0).d;
  CHECK(fock::geometric_tail(1.0, d_th) <= tol::kLeakage);
  CHECK(fock::geometric_tail(1.0, d_th - 1) > tol::kLeakage);
  CHECK(fock::geometric_tail(1.0, 30) == doctest::Approx(std::pow(0.5, 30)).epsilon(1e-12));
}

TEST_CASE("coherent state amplitudes") {
  SUBCASE("alpha = 0 is the vacuum") {
    auto s = fock::coherent_state(0.0, FockCutoff(8));
    CHECK(s.amps(0) == Complex(1.0, 0.0));
    CHECK(s.amps.tail(7).norm() == 0.0);
  }
  SUBCASE("alpha = 1, d = 32 reproduces the series") {
    auto s = fock::coherent_state(1.0, FockCutoff(32));
    CHECK(std::abs(s.amps(0) - std::exp(-0.5)) < 1e-12);
    CHECK(std::abs(s.amps(0).real() - 0.60653) < 1e-5);
    for (int n = 0; n < 12; ++n)
      CHECK(std::abs(s.amps(n) - coherent_series_amp(1.0, n)) < 1e-12);
    CHECK(s.norm_sq() == doctest::Approx(1.0).epsilon(1e-12));
  }
  SUBCASE("tail above tolerance is rejected") {
    CHECK_THROWS_AS(fock::coherent_state(1.0, FockCutoff(2)), CutoffTooSmall);
  }
}

TEST_CASE("displacement operators") {
  const FockCutoff d(24);
  SUBCASE("displace(0) is the identity") {
    auto u = fock::gaussian_unitary(fock::GaussianUnitarySpec::displace(0.0), d);
    CHECK((u - fock::Matrix::Identity(d.d, d.d)).norm() < 1e-13);
  }
  SUBCASE("displacing the vacuum prepares the coherent state") {
    for (Complex alpha : {Complex(0.8, 0.0), Complex(0.3, -0.7), Complex(-1.0, 0.4)}) {
      auto u = fock::gaussian_unitary(fock::GaussianUnitarySpec::displace(alpha), d);
      auto vac = fock::vacuum_state(1, d);
      auto displaced = fock::apply_single_mode(vac, u, 0);
      auto direct = fock::coherent_state(alpha, d);
      CHECK((displaced.amps - direct.amps).norm() < 1e-8);
    }
  }
  SUBCASE("inverse displacement composes to the identity on the trusted sector") {
    const Complex alpha(0.9, 0.5);
    auto u = fock::gaussian_unitary(fock::GaussianUnitarySpec::displace(alpha), d);
    auto v = fock::gaussian_unitary(fock::GaussianUnitarySpec::displace(-alpha), d);
    fock::Matrix prod = u * v;
    const int half = d.d / 2;
    for (int i = 0; i <= half; ++i)
      for (int j = 0; j <= half; ++j) {
        const Complex expect = (i == j) ? 1.0 : 0.0;
        CHECK(std::abs(prod(i, j) - expect) < 1e-8);
      }
  }
}

TEST_CASE("phase shifter is diagonal e^{i n theta}") {
  const FockCutoff d(6);
  const double theta = 0.7;
  auto u = fock::gaussian_unitary(fock::GaussianUnitarySpec::phase(theta), d);
  for (int n = 0; n < d.d; ++n)
    CHECK(std::abs(u(n, n) - std::polar(1.0, theta * n)) < 1e-15);
  CHECK(u.cwiseAbs().sum() == doctest::Approx(d.d));  // nothing off-diagonal
}

TEST_CASE("two-mode squeezing") {
  SUBCASE("full operator agrees with its diagonal-sector block") {
    const FockCutoff d(12);
    const double r = std::asinh(1.0);
    auto full = fock::gaussian_unitary(fock::GaussianUnitarySpec::squeeze2(r), d);
    auto block = fock::squeeze2_diagonal_block(r, d);
    auto vac2 = fock::vacuum_state(2, d);
    auto tmsv = fock::apply_adjacent_pair(vac2, full, 0);
    for (int n = 0; n < d.d; ++n)
      CHECK(std::abs(tmsv.amps(Eigen::Index(n) * d.d + n) - block(n, 0)) < 1e-12);
    // Off-sector amplitudes must vanish: the generator preserves n1 - n2.
    double off = 0.0;
    for (int n1 = 0; n1 < d.d; ++n1)
      for (int n2 = 0; n2 < d.d; ++n2)
        if (n1 != n2) off += std::norm(tmsv.amps(Eigen::Index(n1) * d.d + n2));
    CHECK(off < 1e-24);
  }
  SUBCASE("Schmidt coefficients follow sqrt(ns^n/(ns+1)^{n+1}) with ns = sinh^2 r") {
    const FockCutoff d(40);
    const double ns = 1.0;
    const double r = std::asinh(std::sqrt(ns));
    auto block = fock::squeeze2_diagonal_block(r, d);
    for (int n = 0; n <= 20; ++n) {
      const double expect = std::sqrt(std::pow(ns / (ns + 1.0), n) / (ns + 1.0));
      CHECK(std::abs(block(n, 0) - Complex(expect, 0.0)) < 1e-9);
    }
  }
}

TEST_CASE("vacuum-or-not measurement") {
  const FockCutoff d(16);
  SUBCASE("all-vacuum input") {
    auto r = fock::vacuum_or_not(fock::vacuum_state(2, d));
    CHECK(r.vacuum.probability == doctest::Approx(1.0).epsilon(1e-12));
    CHECK(!r.not_vacuum);
    CHECK_THROWS_AS(r.not_vacuum_or_throw(), DegenerateBranch);
  }
  SUBCASE("coherent alpha = 1") {
    auto r = fock::vacuum_or_not(fock::coherent_state(1.0, FockCutoff(32)));
    CHECK(std::abs(r.vacuum.probability - std::exp(-1.0)) < 1e-9);
    CHECK(std::abs(r.vacuum.probability - 0.36788) < 1e-5);
    REQUIRE(r.not_vacuum);
    CHECK(std::abs(r.vacuum.probability + r.not_vacuum->probability - 1.0) < 1e-12);
  }
  SUBCASE("equal superposition of |0> and |1>") {
    fock::TruncatedState s{1, d, fock::Vector::Zero(d.d)};
    s.amps(0) = 1.0 / std::sqrt(2.0);
    s.amps(1) = 1.0 / std::sqrt(2.0);
    auto r = fock::vacuum_or_not(s);
    REQUIRE(r.not_vacuum);
    CHECK(r.not_vacuum->probability == doctest::Approx(0.5).epsilon(1e-12));
    CHECK(std::abs(r.not_vacuum->post_state.amps(1) - Complex(1.0, 0.0)) < 1e-12);
  }
  SUBCASE("branch probabilities sum to 1 and branches reassemble the input") {
    CounterRng rng(123);
    for (int rep = 0; rep < 25; ++rep) {
      auto psi = random_state(2, FockCutoff(5), rng);
      auto r = fock::vacuum_or_not(psi);
      REQUIRE(r.not_vacuum);
      CHECK(std::abs(r.vacuum.probability + r.not_vacuum->probability - 1.0) < 1e-9);
      const Complex c = psi.amps(0);
      fock::Vector rebuilt = c * r.vacuum.post_state.amps +
                             std::sqrt(r.not_vacuum->probability) * r.not_vacuum->post_state.amps;
      CHECK((rebuilt - psi.amps).norm() < 1e-8);
      CHECK(std::abs(r.not_vacuum->post_state.amps(0)) < 1e-9);
    }
  }
}

TEST_CASE("thermal states") {
  SUBCASE("ns = 0 is the vacuum projector") {
    auto rho = fock::thermal_state(0.0, FockCutoff(4));
    CHECK(std::abs(rho.rho(0, 0) - Complex(1.0, 0.0)) < 1e-15);
    CHECK(rho.rho.cwiseAbs().sum() == doctest::Approx(1.0).epsilon(1e-14));
  }
  SUBCASE("ns = 1, d = 60 has the geometric diagonal") {
    auto rho = fock::thermal_state(1.0, FockCutoff(60));
    for (int n = 0; n < 20; ++n)
      CHECK(std::abs(rho.rho(n, n).real() - std::pow(0.5, n + 1)) < 1e-15);
    CHECK(std::abs(rho.rho.trace().real() - 1.0) < 1e-12);
  }
  SUBCASE("tail above tolerance is rejected") {
    CHECK_THROWS_AS(fock::thermal_state(1.0, FockCutoff(3)), CutoffTooSmall);
  }
}

TEST_CASE("entropy") {
  SUBCASE("pure state has zero entropy") {
    auto psi = fock::coherent_state(0.7, FockCutoff(16));
    fock::Matrix rho = psi.amps * psi.amps.adjoint();
    CHECK(fock::entropy_bits(rho) < 1e-10);
  }
  SUBCASE("maximally mixed qubit has one bit") {
    fock::Matrix rho = fock::Matrix::Identity(2, 2) / 2.0;
    CHECK(fock::entropy_bits(rho) == doctest::Approx(1.0).epsilon(1e-14));
  }
  SUBCASE("thermal entropy matches g(ns)") {
    CHECK(std::abs(fock::entropy_bits(fock::thermal_state(1.0, FockCutoff(60))) - 2.0) < 1e-6);
    for (double ns : {0.25, 0.5, 1.0, 2.0}) {
      auto rho = fock::thermal_state(ns, fock::thermal_cutoff(ns));
      CHECK(std::abs(fock::entropy_bits(rho) - ensembles::g_capacity(ns)) < 1e-6);
    }
  }
  SUBCASE("large negative eigenvalues are rejected") {
    fock::Matrix bad = fock::Matrix::Zero(2, 2);
    bad(0, 0) = 1.5;
    bad(1, 1) = -0.5;
    CHECK_THROWS_AS(fock::entropy_bits(bad), InvalidOperator);
  }
}

TEST_CASE("trace distance") {
  SUBCASE("identical states") {
    auto rho = fock::thermal_state(0.5, FockCutoff(32));
    CHECK(fock::trace_distance(rho, rho) == 0.0);
  }
  SUBCASE("orthogonal pure states are at distance two") {
    fock::Matrix a = fock::Matrix::Zero(3, 3), b = fock::Matrix::Zero(3, 3);
    a(0, 0) = 1.0;
    b(1, 1) = 1.0;
    CHECK(fock::trace_distance(a, b) == doctest::Approx(2.0).epsilon(1e-14));
  }
  SUBCASE("diagonal example") {
    fock::Matrix a = fock::Matrix::Zero(2, 2), b = fock::Matrix::Zero(2, 2);
    a(0, 0) = 0.75;
    a(1, 1) = 0.25;
    b(0, 0) = 0.5;
    b(1, 1) = 0.5;
    CHECK(fock::trace_distance(a, b) == doctest::Approx(0.5).epsilon(1e-14));
  }
  SUBCASE("dimension mismatch") {
    CHECK_THROWS_AS(fock::trace_distance(fock::Matrix::Identity(2, 2),
                                         fock::Matrix::Identity(3, 3)),
                    DimensionMismatch);
  }
  SUBCASE("triangle inequality and unitary invariance on random triples") {
    CounterRng rng(99);
    for (int rep = 0; rep < 20; ++rep) {
      const int dim = 2 + int(rng.next_below(5));
      auto a = bounds::random_density(dim, rng);
      auto b = bounds::random_density(dim, rng);
      auto c = bounds::random_density(dim, rng);
      const double ab = fock::trace_distance(a, b);
      const double bc = fock::trace_distance(b, c);
      const double ac = fock::trace_distance(a, c);
      CHECK(ac <= ab + bc + 1e-9);
      auto u = bounds::haar_unitary(dim, rng);
      CHECK(std::abs(fock::trace_distance(u * a * u.adjoint(), u * b * u.adjoint()) - ab) <
            1e-9);
    }
  }
}

TEST_CASE("single-mode operator application respects the mode layout") {
  const FockCutoff d(3);
  CounterRng rng(7);
  auto psi = random_state(3, d, rng);
  fock::Matrix u = bounds::haar_unitary(d.d, rng);
  // Mode 1 of three: compare against the full Kronecker operator.
  fock::Matrix eye = fock::Matrix::Identity(d.d, d.d);
  fock::Matrix full = fock::Matrix::Zero(27, 27);
  for (int a = 0; a < 3; ++a)
    for (int b = 0; b < 3; ++b)
      for (int c = 0; c < 3; ++c)
        for (int e = 0; e < 3; ++e)
          for (int f = 0; f < 3; ++f)
            for (int g = 0; g < 3; ++g)
              full(a * 9 + b * 3 + c, e * 9 + f * 3 + g) = eye(a, e) * u(b, f) * eye(c, g);
  auto fast = fock::apply_single_mode(psi, u, 1);
  fock::Vector slow = full * psi.amps;
  CHECK((fast.amps - slow).norm() < 1e-12);
}

TEST_CASE("sector bookkeeping") {
  const FockCutoff d(6);  // trusted levels 0..3
  auto mask = fock::sector_mask(2, d);
  CHECK(mask.size() == 36);
  CHECK(mask[0] == 0);
  CHECK(mask[4] == 1);          // |0,4>
  CHECK(mask[5 * 6 + 5] == 1);  // |5,5>
  CHECK(mask[3 * 6 + 3] == 0);  // |3,3>
  fock::TruncatedState s{2, d, fock::Vector::Zero(36)};
  s.amps(4) = 1.0;
  CHECK(fock::sector_leak(s) == doctest::Approx(1.0));
}

}  // TEST_SUITE
