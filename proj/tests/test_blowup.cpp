#include <doctest.h>

#include <numbers>

#include "emhd1d/blowup.hpp"
#include "emhd1d/datum.hpp"
#include "emhd1d/operators.hpp"

using namespace emhd1d;
using std::numbers::pi;

TEST_SUITE("blowup") {

TEST_CASE("profile derivatives") {
  for (double x : {-1.3, -0.2, 0.0, 0.4, 1.1}) {
    const double h = 1e-4;
    const double fd1 = (quartic_profile(x + h) - quartic_profile(x - h)) / (2 * h);
    const double fd2 = (quartic_profile(x + h) - 2 * quartic_profile(x) + quartic_profile(x - h)) / (h * h);
    CHECK(quartic_profile_dx(x) == doctest::Approx(fd1).epsilon(1e-7));
    CHECK(quartic_profile_dxx(x) == doctest::Approx(fd2).epsilon(1e-5));
  }
  CHECK(quartic_profile_dx(0.0) == 1.0);
  CHECK(quartic_profile_dxx(0.0) == 0.0);
}

TEST_CASE("quadrature fractional Laplacian on a Gaussian") {
  // Lambda exp(-x^2) at 0 is (1/pi) int (1 - exp(-y^2)) / y^2 dy = 2 / sqrt(pi).
  const double v = pv_fractional_laplacian([](double x) { return std::exp(-x * x); }, 0.0);
  CHECK(v == doctest::Approx(2.0 / std::sqrt(pi)).epsilon(1e-9));
  // Same value off the origin after translation.
  const double w = pv_fractional_laplacian([](double x) { return std::exp(-(x - 1.5) * (x - 1.5)); }, 1.5);
  CHECK(w == doctest::Approx(2.0 / std::sqrt(pi)).epsilon(1e-9));
}

TEST_CASE("blowup datum e^{-x^4} sin x") {
  const auto d = make_blowup_datum(GridSpec(6.0, 1024));
  CHECK(d.x0 == 0.0);
  CHECK_NOTHROW(validate_datum(d));
  CHECK(predict_blowup_time(d) == doctest::Approx(1.0 / d.w0));
  const double pv = pv_fractional_laplacian(quartic_profile_dx, 0.0);
  CHECK(std::abs(pv - d.w0) / d.w0 <= 1e-4);
  CHECK_THROWS_AS(make_blowup_datum(GridSpec(2.0, 256)), std::invalid_argument);
}

TEST_CASE("datum validation rejects bad profiles") {
  const GridSpec g(6.0, 512);
  // Slope 2 at the origin.
  BlowupDatum d{2.0 * quartic_sine_datum(g), 0.0, 1.0};
  CHECK_THROWS_AS(validate_datum(d), std::invalid_argument);
  // Nonzero curvature at the chosen point.
  BlowupDatum e{quartic_sine_datum(g), 0.3, 1.0};
  CHECK_THROWS_AS(validate_datum(e), std::invalid_argument);
}

TEST_CASE("general datum construction recovers a shifted profile") {
  const GridSpec g(6.0, 1024);
  const double shift = 0.437;
  const auto moved = SpectralField::from_function(
      g, [&](double x) { return 1.7 * quartic_profile(x - shift); });
  const auto d = make_blowup_datum(moved, true);
  const auto ref = make_blowup_datum(g);
  CHECK(d.w0 == doctest::Approx(ref.w0).epsilon(1e-9));
  CHECK((d.b0 - ref.b0).max_abs() < 1e-9);
}

TEST_CASE("finite difference weights") {
  const std::vector<double> x = {0.0, 0.1, 0.25, 0.3, 0.5};
  const auto w = fd_weights(0.25, x, 1);
  for (int p = 0; p <= 4; ++p) {
    double s = 0.0;
    for (std::size_t i = 0; i < x.size(); ++i) s += w[i] * std::pow(x[i], p);
    const double exact = p == 0 ? 0.0 : p * std::pow(0.25, p - 1);
    CHECK(s == doctest::Approx(exact).epsilon(1e-10));
  }
}

TEST_CASE("blowup-time fit on an exact Riccati trajectory") {
  const double w0 = 2.0, T = 0.5;
  std::vector<TrajectoryState> states;
  for (int i = 0; i <= 2000; ++i) {
    TrajectoryState s;
    s.t = 0.49 * i / 2000.0;
    s.w = 1.0 / (T - s.t);
    s.bx = 1.0;
    s.bxx_sup = 1.0;
    states.push_back(s);
  }
  const auto fit = measure_blowup_time(states, w0);
  REQUIRE(fit.valid);
  CHECK(fit.slope == doctest::Approx(-1.0).epsilon(1e-12));
  CHECK(fit.t_est == doctest::Approx(T).epsilon(1e-12));
  CHECK(fit.residual < 1e-12);
  const auto rep = riccati_invariant_report(states, 0.4);
  CHECK(rep.bx_defect == 0.0);
  CHECK(rep.riccati_relative < 1e-6);

  states.resize(10);
  CHECK_FALSE(measure_blowup_time(states, w0).valid);
}

TEST_CASE("trajectory tracker follows a frozen velocity field") {
  // dX/dt = -Lambda B(X) with B = a sin x on L = pi: dX/dt = -a sin X,
  // so tan(X/2) = tan(X0/2) exp(-a t). Here Lambda B_x = a cos x as well.
  const GridSpec g(pi, 64);
  const double a = 0.8, x0 = 1.0;
  const auto b = SpectralField::from_function(g, [&](double x) { return a * std::sin(x); });
  const auto zero = SpectralField::zero(g);
  TrajectoryTracker tr(x0, StepState{0.0, b, zero});
  const double h = 0.01;
  for (int i = 0; i < 100; ++i) tr.advance(StepState{i * h, b, zero}, StepState{(i + 1) * h, b, zero});
  const double expected = 2.0 * std::atan(std::tan(x0 / 2) * std::exp(-a * 1.0));
  CHECK(tr.last().x == doctest::Approx(expected).epsilon(1e-9));
  CHECK(tr.last().bx == doctest::Approx(a * std::cos(expected)).epsilon(1e-9));
  CHECK(tr.last().w == doctest::Approx(a * std::cos(expected)).epsilon(1e-9));
  CHECK_FALSE(tr.left_resolved_region());
}

TEST_CASE("tracker matches post-processing of a stored run") {
  const GridSpec g(6.0, 256);
  const auto d = make_blowup_datum(g);
  StepperConfig c;
  c.t_end = 0.1;
  EvolveOptions o;
  o.store_every_step = true;
  const auto run = evolve(d.b0, ModelParams{ModelKind::Transport, 1.0, 1.0, true}, c, o);
  const auto states = advect_trajectory(run, 0.0);
  REQUIRE(states.size() == run.steps.size());
  // By odd symmetry the characteristic through 0 stays at 0.
  for (const auto& s : states) CHECK(std::abs(s.x) < 1e-13);
  CHECK_THROWS_AS(advect_trajectory(evolve(d.b0, ModelParams{ModelKind::Transport, 1.0, 1.0, true}, c), 0.0),
                  std::invalid_argument);
}

TEST_CASE("harness at moderate resolution") {
  BlowupOptions opts;
  const auto run = run_blowup(GridSpec(6.0, 2048), opts);
  REQUIRE(run.fit.valid);
  CHECK(run.fit.slope == doctest::Approx(-1.0).epsilon(0.01));
  CHECK(std::abs(run.fit.t_est - run.predicted_t) / run.predicted_t < 0.02);
  CHECK(run.invariants.bx_defect < 1e-3);
  CHECK_FALSE(run.left_resolved_region);
  CHECK((run.stop_reason == "w_threshold" || run.stop_reason == "invariant_lost"));
}

}
