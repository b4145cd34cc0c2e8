#pragma once

#include <functional>
#include <optional>
#include <string>
#include <vector>

#include "emhd1d/solver.hpp"
#include "emhd1d/spectral_field.hpp"

namespace emhd1d {

/// Initial profile with B0'(x0) = 1, B0''(x0) = 0 and w0 = Lambda B0'(x0) > 0.
struct BlowupDatum {
  SpectralField b0;
  double x0 = 0.0;
  double w0 = 0.0;
};

/// Checks the pointwise conditions at x0 and that x0 maximizes B0' on the grid.
/// Throws std::invalid_argument on violation.
void validate_datum(const BlowupDatum& d, double tol = 1e-10);

/// exp(-x^4) sin x with x0 = 0. Throws if the grid is too short for the decay.
BlowupDatum make_blowup_datum(const GridSpec& grid);

/// Locates x0 as the maximizer of B0' (grid search, then golden section), shifts
/// the field so that x0 lands on the grid node x = 0, and validates. With
/// `normalize` the field is rescaled so that B0'(x0) = 1.
BlowupDatum make_blowup_datum(const SpectralField& b0, bool normalize = false);

/// (1/pi) PV int (f(x0) - f(y)) / (x0 - y)^2 dy over the real line for a fast
/// decaying f, by adaptive Gauss-Kronrod on the symmetrized integrand. With
/// f = B0' this is Lambda B0'(x0), evaluated without any Fourier transform.
double pv_fractional_laplacian(const std::function<double(double)>& f, double x0,
                               double cutoff = 20.0);

/// T = 1 / w0.
double predict_blowup_time(const BlowupDatum& d);

struct TrajectoryState {
  double t = 0.0;
  double x = 0.0;     ///< characteristic position X(x0, t)
  double bx = 0.0;    ///< B_x(X, t)
  double bxx = 0.0;   ///< B_xx(X, t)
  double bxxx = 0.0;  ///< B_xxx(X, t)
  double w = 0.0;     ///< H B_xx(X, t) = Lambda B_x(X, t)
  double bxx_sup = 0.0;        ///< sup_x |B_xx(x, t)|
  double lambda_bx_sup = 0.0;  ///< sup_x |Lambda B_x(x, t)|

  double bbar_x() const { return bx - 1.0; }
};

/// Integrates dX/dt = -Lambda B(X, t) with RK4 over the solver's accepted steps,
/// using cubic Hermite interpolation in time of Lambda B between steps.
class TrajectoryTracker {
 public:
  TrajectoryTracker(double x0, const StepState& initial);

  void advance(const StepState& before, const StepState& after);

  const std::vector<TrajectoryState>& states() const { return states_; }
  const TrajectoryState& last() const { return states_.back(); }
  /// Set once |X| has exceeded L/2.
  bool left_resolved_region() const { return left_region_; }

 private:
  TrajectoryState sample(double t, double x, const SpectralField& b) const;

  std::vector<TrajectoryState> states_;
  bool left_region_ = false;
};

/// Post-processing form: requires a run made with EvolveOptions::store_every_step.
std::vector<TrajectoryState> advect_trajectory(const TimeSeries& run, double x0);

struct BlowupFit {
  bool valid = false;
  std::string error;
  double slope = 0.0;
  double intercept = 0.0;
  double t_est = 0.0;
  double residual = 0.0;  ///< max |1/w - fitted line| over the window
  int points = 0;
};

/// Least-squares line through 1/w(t) on the monotone stretch with
/// w in [1.25 w0, 10 w0]; T_est is its root.
BlowupFit measure_blowup_time(const std::vector<TrajectoryState>& states, double w0);

struct RiccatiReport {
  double t_max = 0.0;
  double bx_defect = 0.0;         ///< max |B_x(X) - 1|
  double bxx_defect = 0.0;        ///< max |B_xx(X)| / sup |B_xx|
  double riccati_defect = 0.0;    ///< max |dw/dt - (w^2 - bxx^2 - (bx - 1) bxxx)|
  double riccati_relative = 0.0;  ///< same, divided by w^2
  int points = 0;
};

/// Invariant defects over states with t <= t_max; dw/dt from 5-point
/// finite differences on the (non-uniform) step times.
RiccatiReport riccati_invariant_report(const std::vector<TrajectoryState>& states, double t_max);

/// Finite-difference weights for the m-th derivative at z from nodes x.
std::vector<double> fd_weights(double z, const std::vector<double>& x, int m);

struct BlowupOptions {
  StepperConfig stepper;
  double stop_factor = 50.0;        ///< stop once w >= stop_factor * w0
  bool to_collapse = false;         ///< ignore stop_factor and the invariant guard
  double invariant_guard = 1e-2;    ///< stop once |B_x(X) - 1| exceeds this
  double invariant_window = 0.8;    ///< invariants are reported for t <= invariant_window / w0
};

struct BlowupRun {
  BlowupDatum datum;
  double w0_pv = 0.0;
  double predicted_t = 0.0;
  std::vector<TrajectoryState> states;
  BlowupFit fit;
  RiccatiReport invariants;
  std::string stop_reason;
  long steps = 0;
  bool left_resolved_region = false;
};

/// Datum e^{-x^4} sin x, transport model with mu = alpha = 1, trajectory from x0 = 0.
BlowupRun run_blowup(const GridSpec& grid, const BlowupOptions& opts);

struct ToleranceCheck {
  std::string name;
  double value = 0.0;
  double tolerance = 0.0;
  bool passed = false;
};

/// The harness run at N and at N/2, with the pass/fail checks: slope of 1/w
/// within 0.01 of -1, fit residual <= 1e-3, T_est within 2% of 1/w0, the
/// quadrature w0 within 1e-4, both trajectory defects <= 1e-4, and each
/// defect shrinking at least 4x from N/2 to N (defects already at the
/// rounding floor, <= 1e-10, count as converged).
struct BlowupAcceptance {
  BlowupRun fine;
  BlowupRun coarse;
  std::vector<ToleranceCheck> checks;
  bool passed() const;
};

BlowupAcceptance blowup_acceptance(const GridSpec& grid, const BlowupOptions& opts);

}  // namespace emhd1d
