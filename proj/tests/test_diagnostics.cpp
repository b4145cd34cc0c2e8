#include <doctest.h>

#include <numbers>
#include <random>

#include "emhd1d/datum.hpp"
#include "emhd1d/diagnostics.hpp"
#include "emhd1d/operators.hpp"
#include "oracles.hpp"

using namespace emhd1d;
using std::numbers::pi;

namespace {

StepperConfig fixed(double dt, double t_end) {
  StepperConfig c;
  c.dt_init = dt;
  c.t_end = t_end;
  c.adaptive = false;
  return c;
}

std::vector<double> log_times(double t0, double t1, int n) {
  std::vector<double> t;
  for (int i = 0; i < n; ++i) t.push_back(t0 * std::pow(t1 / t0, i / (n - 1.0)));
  return t;
}

}  // namespace

TEST_SUITE("diagnostics") {

TEST_CASE("norm series of the zero run") {
  const GridSpec g(pi, 32);
  EvolveOptions o;
  o.snapshot_cadence = 0.1;
  const auto run = evolve(SpectralField::zero(g), ModelParams{}, fixed(0.05, 0.5), o);
  const auto table = norm_series(run, {0.0, 1.0});
  REQUIRE(table.rows.size() == 6);
  for (const auto& r : table.rows) {
    for (double v : r.hs) CHECK(v == 0.0);
    for (double v : r.dissipative) CHECK(v == 0.0);
    for (double v : r.dissipation_integral) CHECK(v == 0.0);
    CHECK(r.l2_budget_defect == 0.0);
  }
}

TEST_CASE("pure dissipation decays every norm exponentially") {
  const double L = 2.0;
  const GridSpec g(L, 64);
  const double xi = 3 * pi / L;
  const auto b0 = SpectralField::from_function(g, [&](double x) { return std::cos(xi * x); });
  const ModelParams p{ModelKind::Full, 0.5, 1.5, false};
  EvolveOptions o;
  o.snapshot_cadence = 0.05;
  const auto run = evolve(b0, p, fixed(0.01, 0.2), o);
  const auto table = norm_series(run, {0.5, 2.0});
  const double rate = p.mu * std::pow(xi, p.alpha);
  for (const auto& r : table.rows) {
    for (std::size_t j = 0; j < 2; ++j) {
      CHECK(r.hs[j] / table.rows[0].hs[j] == doctest::Approx(std::exp(-rate * r.t)).epsilon(1e-12));
    }
  }
}

TEST_CASE("L2 budget closes at second order in the sampling interval") {
  const GridSpec g(pi, 128);
  const auto b0 = dealias(gaussian_packet(g, 0.5, 0.7, 2.0));
  const ModelParams p{ModelKind::Full, 0.5, 2.0, true};
  std::vector<double> defects;
  for (double h : {0.01, 0.005}) {
    EvolveOptions o;
    o.snapshot_cadence = h;
    const auto run = evolve(b0, p, fixed(h / 4, 0.2), o);
    double worst = 0.0;
    for (const auto& r : norm_series(run, {1.0}).rows) worst = std::max(worst, std::abs(r.l2_budget_defect));
    defects.push_back(worst);
  }
  MESSAGE("budget defects " << defects[0] << " " << defects[1]);
  CHECK(defects[0] / defects[1] >= 3.5);
}

TEST_CASE("dissipation lowers the L2 norm for small data") {
  const GridSpec g(pi, 128);
  const auto b0 = dealias(gaussian_packet(g, 0.1, 0.7, 2.0));
  StepperConfig c;
  c.t_end = 0.5;
  const auto run = evolve(b0, ModelParams{ModelKind::Full, 1.0, 2.0, true}, c);
  CHECK(run.records.back().l2 < run.records.front().l2);
}

TEST_CASE("smoothing exponent is zero without dynamics") {
  const GridSpec g(pi, 256);
  const auto b0 = random_rough(g, 0.5, 0.05, 3, 0.0);
  EvolveOptions o;
  o.output_times = log_times(1e-3, 1e-2, 6);
  const auto run = evolve(b0, ModelParams{ModelKind::Full, 0.0, 2.0, false}, fixed(1e-3, 1e-2), o);
  const auto fit = smoothing_rate_fit(run, 0.5, 0.5, 2.0, 1e-3);
  CHECK(fit.expected == 0.0);
  CHECK(std::abs(fit.exponent_est) < 1e-12);
  CHECK(fit.points == 6);
  CHECK_THROWS_AS(smoothing_rate_fit(run, 0.5, 1.5, 2.0, 1.0), std::runtime_error);
}

TEST_CASE("smoothing exponent of the dissipative semigroup") {
  const GridSpec g(4 * pi, 16384);
  for (auto [alpha, sb, st] : {std::tuple{2.0, 0.5, 1.5}, std::tuple{1.5, 1.0, 1.75}}) {
    const auto b0 = random_rough(g, sb, 0.05, 1, 0.0);
    EvolveOptions o;
    o.output_times = log_times(1e-3, 1e-2, 11);
    const auto run = evolve(b0, ModelParams{ModelKind::Full, 1.0, alpha, false}, fixed(1e-2, 1e-2), o);
    const auto fit = smoothing_rate_fit(run, sb, st, alpha, 1e-3);
    MESSAGE("alpha " << alpha << " exponent " << fit.exponent_est << " expected " << fit.expected);
    CHECK(std::abs(fit.exponent_est - fit.expected) <= 1e-3);
  }
}

TEST_CASE("flux decomposition of zero and cubic scaling") {
  const GridSpec g(3.0, 128);
  const LittlewoodPaley lp(g);
  const auto z = flux_decomposition(lp, SpectralField::zero(g), 1.0);
  CHECK(z.i_total == 0.0);
  CHECK(z.k_total == 0.0);
  std::mt19937_64 rng(8);
  const auto b = random_band_limited(g, 40, 1.0, rng);
  const auto f1 = flux_decomposition(lp, b, 0.7);
  const auto f2 = flux_decomposition(lp, 1.7 * b, 0.7);
  const double c3 = 1.7 * 1.7 * 1.7;
  CHECK(f2.i_total == doctest::Approx(c3 * f1.i_total).epsilon(1e-12));
  CHECK(f2.k_total == doctest::Approx(c3 * f1.k_total).epsilon(1e-12));
  double si = 0.0;
  for (double v : f1.i_shells) si += v;
  CHECK(si == doctest::Approx(f1.i_total).epsilon(1e-12));
}

TEST_CASE("flux decomposition on a few modes against convolution algebra") {
  const double L = pi;
  const GridSpec g(L, 64);
  const LittlewoodPaley lp(g);
  const auto modes = oracle::real_modes({{1, {0.4, -0.2}}, {2, {0.0, 0.3}}, {3, {0.25, 0.1}}});
  std::vector<Complex> half(g.n_coefs());
  for (int k = 0; k <= 3; ++k) half[k] = modes.count(k) ? modes.at(k) : Complex{};
  const auto b = SpectralField::from_coefficients(g, half);

  auto abs_xi = [](double xi) { return Complex(std::abs(xi), 0.0); };
  auto i_xi = [](double xi) { return Complex(0.0, xi); };
  const auto lam = oracle::apply(modes, L, abs_xi);
  const auto bx = oracle::apply(modes, L, i_xi);
  const auto b_lam = oracle::convolve(modes, lam);
  const auto lam_bx = oracle::convolve(lam, bx);
  for (double s : {0.0, 1.0, 1.5}) {
    double i_ref = 0.0, k_ref = 0.0;
    for (int q = -1; q <= lp.q_max(); ++q) {
      auto w = [q](double xi) {
        const double phi = LittlewoodPaley::shell_weight(q, xi);
        return phi * phi;
      };
      const double lq = std::pow(LittlewoodPaley::lambda(q), 2 * s);
      i_ref += lq * oracle::pairing(b_lam, bx, L, w);
      k_ref += lq * oracle::pairing(lam_bx, modes, L, w);
    }
    const auto f = flux_decomposition(lp, b, s);
    CHECK(f.i_total == doctest::Approx(i_ref).epsilon(1e-12));
    CHECK(f.k_total == doctest::Approx(k_ref).epsilon(1e-12));
  }
}

TEST_CASE("shell energy rate matches a centered difference of the evolution") {
  const GridSpec g(pi, 128);
  const auto b0 = dealias(gaussian_packet(g, 0.5, 0.7, 2.0));
  const ModelParams p{ModelKind::Full, 1.0, 2.0, true};
  const LittlewoodPaley lp(g);
  // The centered difference carries an O(h^2) error; it must fall by 4 per halving.
  std::vector<double> gaps;
  for (double h : {1e-4, 5e-5, 2.5e-5}) {
    const auto run = evolve(b0, p, fixed(h / 4, 2 * h), EvolveOptions{h, {}, false, {}});
    REQUIRE(run.snapshots.size() == 3);
    const double e0 = shell_spectrum(lp, run.snapshots[0].field, 1.0).total;
    const double e2 = shell_spectrum(lp, run.snapshots[2].field, 1.0).total;
    const double rate = shell_energy_rate(lp, run.snapshots[1].field, p, 1.0);
    gaps.push_back(std::abs((e2 - e0) / (2 * h) - rate) / std::abs(rate));
  }
  MESSAGE("relative gaps " << gaps[0] << " " << gaps[1] << " " << gaps[2]);
  CHECK(gaps[0] / gaps[1] == doctest::Approx(4.0).epsilon(0.05));
  CHECK(gaps[1] / gaps[2] == doctest::Approx(4.0).epsilon(0.05));
  CHECK(gaps[2] < 5e-7);
  CHECK_THROWS_AS(shell_energy_rate(lp, b0, ModelParams{ModelKind::Transport, 1.0, 1.0, true}, 1.0),
                  std::invalid_argument);
}

TEST_CASE("flux balance defect is second order in dt") {
  const GridSpec g(pi, 128);
  const auto b0 = dealias(gaussian_packet(g, 0.5, 0.7, 2.0));
  const ModelParams p{ModelKind::Full, 1.0, 2.0, true};
  const auto a = flux_balance_defect(b0, p, Scheme::IFRK4, 1.0, 2e-3, 25);
  const auto b = flux_balance_defect(b0, p, Scheme::IFRK4, 1.0, 1e-3, 50);
  const double ratio = a.max_defect / b.max_defect;
  MESSAGE("defect ratio " << ratio);
  CHECK(ratio >= 3.5);
  CHECK(ratio <= 4.5);
}

}
