#include <doctest.h>

#include <numbers>
#include <random>

#include "emhd1d/datum.hpp"
#include "emhd1d/lp_analysis.hpp"
#include "emhd1d/operators.hpp"

using namespace emhd1d;
using std::numbers::pi;

TEST_SUITE("lp") {

TEST_CASE("cutoff profile") {
  using LP = LittlewoodPaley;
  CHECK(LP::chi(0.0) == 1.0);
  CHECK(LP::chi(0.75) == 1.0);
  CHECK(LP::chi(-0.6) == 1.0);
  CHECK(LP::chi(1.0) == 0.0);
  CHECK(LP::chi(3.0) == 0.0);
  // Midpoint of the bridge is 1/2 by symmetry of the smooth step.
  CHECK(LP::chi(0.875) == doctest::Approx(0.5).epsilon(1e-15));
  double prev = 1.0;
  for (double xi = 0.75; xi <= 1.0; xi += 1e-3) {
    CHECK(LP::chi(xi) <= prev + 1e-15);
    prev = LP::chi(xi);
  }
  CHECK(LP::phi(0.7) == 0.0);
  CHECK(LP::phi(2.0) == 0.0);
  CHECK(LP::phi(1.0) == 1.0);
}

TEST_CASE("partition of unity") {
  std::mt19937_64 rng(1);
  std::uniform_real_distribution<double> u(0.0, 1000.0);
  for (int i = 0; i < 500; ++i) {
    const double xi = u(rng);
    double sum = LittlewoodPaley::chi(xi);
    for (int q = 0; q < 14; ++q) sum += LittlewoodPaley::shell_weight(q, xi);
    CHECK(sum == doctest::Approx(1.0).epsilon(1e-14));
  }
}

TEST_CASE("shell index range") {
  const LittlewoodPaley lp(GridSpec(pi, 64));
  CHECK_THROWS_AS(lp.project(SpectralField::zero(lp.grid()), -2), std::out_of_range);
  CHECK_THROWS_AS(lp.project(SpectralField::zero(lp.grid()), lp.q_max() + 1), std::out_of_range);
  // Every grid wavenumber is covered by some shell up to q_max.
  const GridSpec& g = lp.grid();
  for (int k = 0; k <= g.n_modes() / 2; ++k) {
    double sum = 0.0;
    for (int q = -1; q <= lp.q_max(); ++q) sum += LittlewoodPaley::shell_weight(q, g.wavenumber(k));
    CHECK(sum == doctest::Approx(1.0).epsilon(1e-14));
  }
}

TEST_CASE("shell spectrum of simple fields") {
  const GridSpec g(pi, 64);
  const LittlewoodPaley lp(g);
  CHECK(shell_spectrum(lp, SpectralField::zero(g), 1.0).total == 0.0);
  // xi = 8 = 2^3 sits where phi_3 = 1 and all other shells vanish.
  const double a = 0.7;
  const auto f = SpectralField::from_function(g, [&](double x) { return a * std::sin(8 * x); });
  for (double s : {0.0, 0.5, 1.5}) {
    const auto sp = shell_spectrum(lp, f, s);
    const double expected = std::pow(8.0, 2 * s) * a * a * pi;
    CHECK(sp.mass(3) == doctest::Approx(expected).epsilon(1e-13));
    CHECK(sp.total == doctest::Approx(expected).epsilon(1e-13));
  }
  // xi = 7 lies in the overlap of shells 2 and 3 only. Set the coefficient
  // directly so no sampling roundoff reaches other modes.
  std::vector<Complex> c(g.n_coefs(), Complex(0.0));
  c[7] = Complex(0.5 * a, 0.0);
  const auto h = SpectralField::from_coefficients(g, c);
  const auto sp = shell_spectrum(lp, h, 0.0);
  for (int q = -1; q <= lp.q_max(); ++q) {
    if (q != 2 && q != 3) CHECK(sp.mass(q) == 0.0);
  }
  CHECK(sp.mass(2) > 0.0);
  CHECK(sp.mass(3) > 0.0);
}

TEST_CASE("direct Sobolev norms on single modes") {
  const double L = 3.0;
  const GridSpec g(L, 64);
  const double xi = 4 * pi / L;
  const double a = 1.3;
  const auto f = SpectralField::from_function(g, [&](double x) { return a * std::cos(xi * x); });
  CHECK(sobolev_norm(SpectralField::zero(g), 1.0) == 0.0);
  for (double s : {0.0, 0.5, 1.25, 2.0}) {
    CHECK(sobolev_norm(f, s) == doctest::Approx(std::pow(xi, s) * a * std::sqrt(L)).epsilon(1e-13));
    CHECK(hs_norm(f, s) ==
          doctest::Approx(std::pow(1 + xi * xi, s / 2) * a * std::sqrt(L)).epsilon(1e-13));
  }
  // The constant mode carries no homogeneous norm for s > 0.
  const auto one = SpectralField::from_function(g, [](double) { return 1.0; });
  CHECK(sobolev_norm(one, 1.0) == 0.0);
  CHECK(sobolev_norm(one, 0.0) == doctest::Approx(std::sqrt(2 * L)));
  CHECK(hs_norm(one, 2.0) == doctest::Approx(std::sqrt(2 * L)));
}

TEST_CASE("quadrature norms") {
  const GridSpec g(2.0, 128);
  std::mt19937_64 rng(4);
  const auto f = random_band_limited(g, 30, 1.0, rng);
  CHECK(lp_norm(f, 2.0) == doctest::Approx(f.l2_norm()).epsilon(1e-13));
  CHECK(sup_norm_oversampled(f) >= f.max_abs());
  CHECK(sup_norm_oversampled(f, 1) == f.max_abs());
}

TEST_CASE("reconstruction and near orthogonality") {
  for (int n : {64, 256, 1024}) {
    const GridSpec g(5.0, n);
    const LittlewoodPaley lp(g);
    std::mt19937_64 rng(static_cast<std::uint64_t>(n));
    for (int trial = 0; trial < 5; ++trial) {
      const auto f = random_band_limited(g, n / 2 - 1, 0.5, rng);
      std::vector<SpectralField> shells;
      SpectralField sum = SpectralField::zero(g);
      for (int q = -1; q <= lp.q_max(); ++q) {
        shells.push_back(lp.project(f, q));
        sum = sum + shells.back();
      }
      CHECK((sum - f).l2_norm() <= 1e-12 * f.l2_norm());
      for (int p = -1; p <= lp.q_max(); ++p)
        for (int q = p + 2; q <= lp.q_max(); ++q)
          CHECK(lp.project(shells[q + 1], p).max_abs() == 0.0);
    }
  }
}

TEST_CASE("norm equivalence constants are stable across resolutions") {
  for (double s : {0.0, 0.5, 1.5}) {
    std::vector<NormEquivalence> reps;
    for (int n : {256, 1024, 4096}) reps.push_back(norm_equivalence(GridSpec(pi, n), s, 100, 3));
    for (const auto& r : reps) {
      CHECK(r.lower > 0.0);
      CHECK(r.lower <= r.upper);
      CHECK(r.upper < 3.0);
    }
    double hi = 0.0, lo = 1e300;
    for (const auto& r : reps) {
      hi = std::max(hi, r.upper);
      lo = std::min(lo, r.upper);
    }
    CHECK(hi / lo <= 1.1);
  }
}

TEST_CASE("Bernstein constants") {
  const auto rep = bernstein_check(GridSpec(pi, 512), 100, 7);
  CHECK(rep.trials == 100);
  CHECK(rep.derivative_constant > 0.5);
  CHECK(rep.passed());
}

TEST_CASE("commutator ratios stay bounded") {
  const auto rep = commutator_check(GridSpec(pi, 256), 100, 11);
  MESSAGE("shell ratio " << rep.shell_l2_ratio << ", fractional ratio " << rep.fractional_max_ratio);
  CHECK(rep.shell_l2_ratio > 0.0);
  CHECK(rep.fractional_max_ratio > 0.0);
  CHECK(rep.passed());
  // Same ceiling at a higher resolution.
  CHECK(commutator_check(GridSpec(pi, 1024), 20, 12).passed());
}

}
