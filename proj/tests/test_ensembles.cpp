#include "doctest.h"

#include <cmath>
#include <complex>

#include "seqdec/ensembles.hpp"
#include "seqdec/rng.hpp"

using namespace seqdec;
using ensembles::Family;
using ensembles::StateFamily;
using fock::Complex;
using fock::FockCutoff;

TEST_SUITE("ensembles") {

TEST_CASE("g_capacity") {
  CHECK(ensembles::g_capacity(0.0) == 0.0);
  CHECK(ensembles::g_capacity(1.0) == doctest::Approx(2.0).epsilon(1e-14));
  CHECK(std::abs(ensembles::g_capacity(0.5) - 1.377443751081734) < 1e-6);
  CHECK_THROWS_AS(ensembles::g_capacity(-0.1), InvalidParams);

  SUBCASE("strictly increasing and concave on a grid") {
    const double h = 1e-4;
    for (double x = 0.05; x < 4.0; x += 0.05) {
      CHECK(ensembles::g_capacity(x + h) > ensembles::g_capacity(x));
      const double second = ensembles::g_capacity(x + h) - 2.0 * ensembles::g_capacity(x) +
                            ensembles::g_capacity(x - h);
      CHECK(second < 0.0);
    }
  }
}

TEST_CASE("bpsk_capacity") {
  CHECK(ensembles::bpsk_capacity(0.0) == 0.0);
  CHECK(std::abs(ensembles::bpsk_capacity(20.0) - 1.0) < 1e-9);
  CHECK(std::abs(ensembles::bpsk_capacity(std::log(2.0) / 2.0) -
                 ensembles::binary_entropy(0.75)) < 1e-15);
  CHECK(std::abs(ensembles::binary_entropy(0.75) - 0.811278) < 1e-6);
}

TEST_CASE("private_capacity") {
  CHECK(ensembles::private_capacity({1.0, 1.3}) ==
        doctest::Approx(ensembles::g_capacity(1.3)).epsilon(1e-14));
  CHECK(ensembles::private_capacity({0.5, 0.7}) == 0.0);
  CHECK(std::abs(ensembles::private_capacity({0.8, 1.0}) -
                 (ensembles::g_capacity(0.8) - ensembles::g_capacity(0.2))) < 1e-14);
  CHECK_THROWS_AS(ensembles::ChannelParams(1.2, 1.0), InvalidParams);
}

TEST_CASE("reading states") {
  SUBCASE("ns = 0 is the vacuum") {
    auto ii = ensembles::reading_state({Family::kReadingII, 0.0}, 1.1, FockCutoff(4));
    CHECK(std::abs(ii.amps(0) - Complex(1.0, 0.0)) < 1e-15);
    CHECK(ii.amps.tail(3).norm() == 0.0);
    auto iii = ensembles::reading_state({Family::kReadingIII, 0.0}, 0.3, FockCutoff(4));
    CHECK(std::abs(iii.amps(0) - Complex(1.0, 0.0)) < 1e-15);
    CHECK(iii.modes == 2);
  }
  SUBCASE("reading II at theta = 0, ns = 1 has the geometric amplitudes") {
    auto s = ensembles::reading_state({Family::kReadingII, 1.0}, 0.0, FockCutoff(32));
    CHECK(std::abs(s.amps(0) - Complex(1.0 / std::sqrt(2.0), 0.0)) < 1e-9);
    CHECK(std::abs(s.amps(1) - Complex(0.5, 0.0)) < 1e-9);
    CHECK(std::abs(s.amps(2) - Complex(1.0 / (2.0 * std::sqrt(2.0)), 0.0)) < 1e-9);
  }
  SUBCASE("reading III matches the two-mode squeezer") {
    const double ns = 0.35;
    const FockCutoff d(fock::thermal_cutoff(ns).d);
    auto direct = ensembles::reading_state({Family::kReadingIII, ns}, 0.0, d);
    auto u = fock::gaussian_unitary(
        fock::GaussianUnitarySpec::squeeze2(std::asinh(std::sqrt(ns))), d);
    auto squeezed = fock::apply_adjacent_pair(fock::vacuum_state(2, d), u, 0);
    CHECK((direct.amps - squeezed.amps).norm() < 1e-8);
  }
  SUBCASE("phase rotates the n-th amplitude by n theta") {
    const double theta = 1.3;
    auto s0 = ensembles::reading_state({Family::kReadingII, 0.8}, 0.0, FockCutoff(32));
    auto st = ensembles::reading_state({Family::kReadingII, 0.8}, theta, FockCutoff(32));
    for (int n = 0; n < 8; ++n)
      CHECK(std::abs(st.amps(n) - s0.amps(n) * std::polar(1.0, theta * n)) < 1e-12);
  }
  SUBCASE("cutoff below the leakage rule is rejected") {
    CHECK_THROWS_AS(ensembles::reading_state({Family::kReadingII, 1.0}, 0.0, FockCutoff(8)),
                    CutoffTooSmall);
  }
}

TEST_CASE("analytic overlaps") {
  SUBCASE("identical symbols give 1") {
    CHECK(std::abs(ensembles::analytic_overlap({Family::kCoherent, 0.0}, {0.4, -0.2},
                                               {0.4, -0.2}) -
                   1.0) < 1e-14);
    CHECK(std::abs(ensembles::analytic_overlap({Family::kReadingII, 1.3}, 0.9, 0.9) - 1.0) <
          1e-14);
  }
  SUBCASE("coherent antipodal pair") {
    const Complex a(0.6, 0.3);
    const auto ov = ensembles::analytic_overlap({Family::kCoherent, 0.0}, a, -a);
    CHECK(std::abs(ov - std::exp(-2.0 * std::norm(a))) < 1e-14);
  }
  SUBCASE("reading phase-flip at ns = 1 gives 1/3") {
    const auto ov = ensembles::analytic_overlap({Family::kReadingIII, 1.0}, 0.0,
                                                std::numbers::pi);
    CHECK(std::abs(ov - Complex(1.0 / 3.0, 0.0)) < 1e-12);
  }
  SUBCASE("overlaps agree with explicitly constructed states") {
    CounterRng rng(2024);
    for (int rep = 0; rep < 15; ++rep) {
      const Complex a(1.4 * (2.0 * rng.next_double() - 1.0),
                      1.4 * (2.0 * rng.next_double() - 1.0));
      const Complex b(1.4 * (2.0 * rng.next_double() - 1.0),
                      1.4 * (2.0 * rng.next_double() - 1.0));
      const FockCutoff d(32);  // admits |alpha| <= 2 under the leakage rule
      const auto sa = fock::coherent_state(a, d);
      const auto sb = fock::coherent_state(b, d);
      const auto direct = fock::inner(sa, sb);
      const auto closed = ensembles::analytic_overlap({Family::kCoherent, 0.0}, a, b);
      CHECK(std::abs(direct - closed) < 1e-8);

      const double ns = 2.0 * rng.next_double();
      const double ta = 2.0 * std::numbers::pi * rng.next_double();
      const double tb = 2.0 * std::numbers::pi * rng.next_double();
      const StateFamily fam{rep % 2 == 0 ? Family::kReadingII : Family::kReadingIII, ns};
      const FockCutoff dr(fock::thermal_cutoff(ns).d);
      const auto ra = ensembles::reading_state(fam, ta, dr);
      const auto rb = ensembles::reading_state(fam, tb, dr);
      CHECK(std::abs(fock::inner(ra, rb) - ensembles::analytic_overlap(fam, ta, tb)) < 1e-8);
    }
  }
  SUBCASE("modulus bounded by one with equality only at equal symbols") {
    CounterRng rng(77);
    for (int rep = 0; rep < 200; ++rep) {
      const Complex a(2.0 * rng.next_double() - 1.0, 2.0 * rng.next_double() - 1.0);
      const Complex b(2.0 * rng.next_double() - 1.0, 2.0 * rng.next_double() - 1.0);
      const auto ov = ensembles::analytic_overlap({Family::kCoherent, 0.0}, a, b);
      CHECK(std::abs(ov) <= 1.0 + 1e-12);
      if (std::abs(ov) >= 1.0 - 1e-12) CHECK(std::abs(a - b) < 1e-5);

      const double ns = 0.1 + 2.0 * rng.next_double();
      const double dt = 2.0 * std::numbers::pi * rng.next_double();
      const auto rv = ensembles::analytic_overlap({Family::kReadingII, ns}, 0.0, dt);
      CHECK(std::abs(rv) <= 1.0 + 1e-12);
      if (std::abs(rv) >= 1.0 - 1e-12)
        CHECK(std::min(dt, 2.0 * std::numbers::pi - dt) < 1e-5);
    }
  }
}

TEST_CASE("phase averaging") {
  SUBCASE("K = 1 is a pure projector") {
    auto rho = ensembles::phase_average({Family::kReadingII, 0.5}, 1, FockCutoff(32));
    CHECK(std::abs(fock::entropy_bits(rho)) < 1e-9);
    CHECK(std::abs((rho.rho * rho.rho - rho.rho).norm()) < 1e-12);
  }
  SUBCASE("K >= d dephases exactly to the truncated thermal state") {
    const FockCutoff d(32);
    auto avg = ensembles::phase_average({Family::kReadingII, 1.0}, 64, d);
    auto th = fock::thermal_state(1.0, d);
    CHECK(fock::trace_distance(avg, th) < 1e-10);
  }
  SUBCASE("K = 2 cancels only odd off-diagonals") {
    const FockCutoff d(32);
    auto avg = ensembles::phase_average({Family::kReadingII, 1.0}, 2, d);
    CHECK(std::abs(avg.rho(0, 1)) < 1e-15);
    CHECK(std::abs(avg.rho(1, 2)) < 1e-15);
    CHECK(std::abs(avg.rho(0, 2)) > 1e-3);
    CHECK(std::abs(avg.rho(1, 3)) > 1e-3);
  }
  SUBCASE("entropy of the dephased ensemble saturates g(ns)") {
    for (double ns : {0.5, 1.0}) {
      const FockCutoff d(fock::thermal_cutoff(ns).d);
      auto avg = ensembles::phase_average({Family::kReadingII, ns}, d.d, d);
      CHECK(std::abs(fock::entropy_bits(avg) - ensembles::g_capacity(ns)) < 1e-6);
    }
  }
  SUBCASE("reading III average is diagonal on pair states") {
    const double ns = 0.5;
    const FockCutoff d(fock::thermal_cutoff(ns).d);
    auto avg = ensembles::phase_average({Family::kReadingIII, ns}, d.d, d);
    auto th = fock::thermal_state(ns, d);
    // Diagonal entries over |n,n> match the thermal weights.
    for (int n = 0; n < 6; ++n)
      CHECK(std::abs(avg.rho(Eigen::Index(n) * d.d + n, Eigen::Index(n) * d.d + n) -
                     th.rho(n, n)) < 1e-12);
    CHECK(std::abs(avg.rho.trace().real() - 1.0) < 1e-12);
  }
}

TEST_CASE("family parsing") {
  CHECK(ensembles::parse_family("coherent") == Family::kCoherent);
  CHECK(ensembles::parse_family("reading_II") == Family::kReadingII);
  CHECK(ensembles::parse_family("reading_III") == Family::kReadingIII);
  CHECK_THROWS_AS(ensembles::parse_family("reading_IV"), UnknownFamily);
  CHECK(ensembles::family_name(Family::kReadingIII) == "reading_III");
}

}  // TEST_SUITE
