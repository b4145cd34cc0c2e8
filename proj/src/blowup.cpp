#include "emhd1d/blowup.hpp"

#include <boost/math/quadrature/gauss_kronrod.hpp>

#include <algorithm>
#include <cmath>
#include <limits>
#include <stdexcept>

#include "emhd1d/datum.hpp"
#include "emhd1d/operators.hpp"

namespace emhd1d {

namespace {

std::vector<Complex> weighted_coefs(const SpectralField& f,
                                    const std::function<Complex(double)>& symbol, bool even) {
  const GridSpec& g = f.grid();
  auto c = f.coefs();
  std::vector<Complex> out(c.size());
  const int nyq = g.n_modes() / 2;
  for (int k = 0; k < nyq; ++k) out[k] = symbol(g.wavenumber(k)) * c[k];
  out[nyq] = even ? symbol(g.wavenumber(-nyq)) * c[nyq] : Complex{};
  return out;
}

Complex i_xi(double xi) { return {0.0, xi}; }
Complex abs_xi(double xi) { return {std::abs(xi), 0.0}; }

double golden_section_max(const std::function<double(double)>& f, double a, double b,
                          double tol) {
  const double inv_phi = (std::sqrt(5.0) - 1.0) / 2.0;
  double c = b - inv_phi * (b - a);
  double d = a + inv_phi * (b - a);
  double fc = f(c);
  double fd = f(d);
  while (b - a > tol) {
    if (fc > fd) {
      b = d;
      d = c;
      fd = fc;
      c = b - inv_phi * (b - a);
      fc = f(c);
    } else {
      a = c;
      c = d;
      fc = fd;
      d = a + inv_phi * (b - a);
      fd = f(d);
    }
  }
  return 0.5 * (a + b);
}

}  // namespace

void validate_datum(const BlowupDatum& d, double tol) {
  const auto bx = derivative(d.b0);
  const auto bxx = derivative(d.b0, 2);
  const double bx0 = evaluate_at(bx, d.x0);
  const double bxx0 = evaluate_at(bxx, d.x0);
  if (std::abs(bx0 - 1.0) > tol) {
    throw std::invalid_argument("blowup datum: B0'(x0) = " + std::to_string(bx0) + ", expected 1");
  }
  if (std::abs(bxx0) > tol) {
    throw std::invalid_argument("blowup datum: B0''(x0) = " + std::to_string(bxx0) +
                                ", expected 0");
  }
  if (!(d.w0 > 0.0)) throw std::invalid_argument("blowup datum: Lambda B0'(x0) must be positive");
  const auto phys = bx.phys();
  if (*std::max_element(phys.begin(), phys.end()) > bx0 + tol) {
    throw std::invalid_argument("blowup datum: x0 is not a global maximum of B0'");
  }
}

BlowupDatum make_blowup_datum(const GridSpec& grid) {
  const double edge = grid.half_length();
  const double boundary = std::max({std::abs(quartic_profile(edge)), std::abs(quartic_profile_dx(edge)),
                                    std::abs(quartic_profile_dxx(edge))});
  if (boundary > 1e-10) {
    throw std::invalid_argument("grid half_length " + std::to_string(edge) +
                                " too small for exp(-x^4) sin x (boundary value " +
                                std::to_string(boundary) + ")");
  }
  auto b0 = quartic_sine_datum(grid);
  const double w0 = evaluate_at(frac_laplacian(derivative(b0), 1.0), 0.0);
  BlowupDatum d{std::move(b0), 0.0, w0};
  validate_datum(d);
  return d;
}

BlowupDatum make_blowup_datum(const SpectralField& b0, bool normalize) {
  const GridSpec& grid = b0.grid();
  const auto bx = derivative(b0);
  auto phys = bx.phys();
  const auto best = std::max_element(phys.begin(), phys.end()) - phys.begin();
  const double h = grid.dx();
  double x0 = golden_section_max([&](double x) { return evaluate_at(bx, x); },
                                 grid.x(static_cast<int>(best)) - h,
                                 grid.x(static_cast<int>(best)) + h, 1e-9 * h);
  // Polish on the root of B0'' where the maximum is flat.
  const auto bxx = derivative(b0, 2);
  const auto bxxx = derivative(b0, 3);
  for (int it = 0; it < 8; ++it) {
    const double curv = evaluate_at(bxxx, x0);
    if (curv == 0.0) break;
    const double dx = evaluate_at(bxx, x0) / curv;
    x0 -= dx;
    if (std::abs(dx) < 1e-15 * std::max(1.0, std::abs(x0))) break;
  }
  // Translate so that x0 sits on the node x = 0: c_k -> c_k exp(i xi_k x0).
  auto shifted = apply_multiplier(
      b0, {[x0](double xi) { return std::polar(1.0, xi * x0); }, false});
  if (normalize) {
    const double slope = evaluate_at(derivative(shifted), 0.0);
    if (slope <= 0.0) throw std::invalid_argument("blowup datum: B0'(x0) must be positive");
    shifted = (1.0 / slope) * shifted;
  }
  const double w0 = evaluate_at(frac_laplacian(derivative(shifted), 1.0), 0.0);
  BlowupDatum d{std::move(shifted), 0.0, w0};
  validate_datum(d);
  return d;
}

double pv_fractional_laplacian(const std::function<double(double)>& f, double x0, double cutoff) {
  using boost::math::quadrature::gauss_kronrod;
  const double f0 = f(x0);
  auto integrand = [&](double y) { return (2.0 * f0 - f(x0 + y) - f(x0 - y)) / (y * y); };
  // The integrand is smooth at y = 0 but cancels catastrophically there; a
  // two-point Gauss rule on [0, delta] keeps the nodes away from it.
  const double delta = 1e-3;
  const double g = delta / (2.0 * std::sqrt(3.0));
  const double head = 0.5 * delta * (integrand(0.5 * delta - g) + integrand(0.5 * delta + g));
  double err = 0.0;
  const double body = gauss_kronrod<double, 61>::integrate(integrand, delta, cutoff, 20, 1e-15, &err);
  // Beyond the cutoff only the constant 2 f(x0) / y^2 survives.
  const double tail = 2.0 * f0 / cutoff;
  return (head + body + tail) / std::numbers::pi;
}

double predict_blowup_time(const BlowupDatum& d) { return 1.0 / d.w0; }

TrajectoryTracker::TrajectoryTracker(double x0, const StepState& initial) {
  states_.push_back(sample(initial.t, x0, initial.field));
  left_region_ = std::abs(x0) > 0.5 * initial.field.grid().half_length();
}

TrajectoryState TrajectoryTracker::sample(double t, double x, const SpectralField& b) const {
  const GridSpec& g = b.grid();
  TrajectoryState s;
  s.t = t;
  s.x = x;
  s.bx = evaluate_series(g, weighted_coefs(b, i_xi, false), x);
  s.bxx = evaluate_series(g, weighted_coefs(b, [](double xi) { return Complex(-xi * xi, 0.0); }, true), x);
  s.bxxx = evaluate_series(
      g, weighted_coefs(b, [](double xi) { return Complex(0.0, -xi * xi * xi); }, false), x);
  s.w = evaluate_series(
      g, weighted_coefs(b, [](double xi) { return Complex(0.0, std::abs(xi) * xi); }, false), x);
  s.bxx_sup = derivative(b, 2).max_abs();
  s.lambda_bx_sup = frac_laplacian(derivative(b), 1.0).max_abs();
  return s;
}

void TrajectoryTracker::advance(const StepState& before, const StepState& after) {
  const GridSpec& g = before.field.grid();
  const auto v0 = weighted_coefs(before.field, abs_xi, true);
  const auto v1 = weighted_coefs(after.field, abs_xi, true);
  const auto d0 = weighted_coefs(before.dfield_dt, abs_xi, true);
  const auto d1 = weighted_coefs(after.dfield_dt, abs_xi, true);
  const double h = after.t - before.t;

  // Cubic Hermite in time of Lambda B at fixed x; velocity is its negative.
  auto velocity = [&](double x, double s) {
    if (s == 0.0) return -evaluate_series(g, v0, x);
    if (s == 1.0) return -evaluate_series(g, v1, x);
    const double s2 = s * s;
    const double s3 = s2 * s;
    const double h00 = 2 * s3 - 3 * s2 + 1;
    const double h10 = s3 - 2 * s2 + s;
    const double h01 = -2 * s3 + 3 * s2;
    const double h11 = s3 - s2;
    return -(h00 * evaluate_series(g, v0, x) + h10 * h * evaluate_series(g, d0, x) +
             h01 * evaluate_series(g, v1, x) + h11 * h * evaluate_series(g, d1, x));
  };

  const double x = states_.back().x;
  const double k1 = velocity(x, 0.0);
  const double k2 = velocity(x + 0.5 * h * k1, 0.5);
  const double k3 = velocity(x + 0.5 * h * k2, 0.5);
  const double k4 = velocity(x + h * k3, 1.0);
  const double x_next = x + h / 6.0 * (k1 + 2.0 * k2 + 2.0 * k3 + k4);
  states_.push_back(sample(after.t, x_next, after.field));
  if (std::abs(x_next) > 0.5 * g.half_length()) left_region_ = true;
}

std::vector<TrajectoryState> advect_trajectory(const TimeSeries& run, double x0) {
  if (run.steps.empty()) {
    throw std::invalid_argument("advect_trajectory: run must store every step");
  }
  TrajectoryTracker tracker(x0, run.steps.front());
  for (std::size_t i = 1; i < run.steps.size(); ++i) tracker.advance(run.steps[i - 1], run.steps[i]);
  return tracker.states();
}

BlowupFit measure_blowup_time(const std::vector<TrajectoryState>& states, double w0) {
  BlowupFit fit;
  std::vector<double> ts, ys;
  for (const auto& s : states) {
    if (s.w > 10.0 * w0) break;
    if (s.w >= 1.25 * w0) {
      ts.push_back(s.t);
      ys.push_back(1.0 / s.w);
    }
  }
  fit.points = static_cast<int>(ts.size());
  if (ts.size() < 3) {
    fit.error = "fit window empty: run ended before w reached the window";
    return fit;
  }
  const double n = static_cast<double>(ts.size());
  double st = 0, sy = 0, stt = 0, sty = 0;
  for (std::size_t i = 0; i < ts.size(); ++i) {
    st += ts[i];
    sy += ys[i];
    stt += ts[i] * ts[i];
    sty += ts[i] * ys[i];
  }
  const double tbar = st / n;
  const double ybar = sy / n;
  fit.slope = (sty - n * tbar * ybar) / (stt - n * tbar * tbar);
  fit.intercept = ybar - fit.slope * tbar;
  fit.t_est = -fit.intercept / fit.slope;
  for (std::size_t i = 0; i < ts.size(); ++i) {
    fit.residual = std::max(fit.residual, std::abs(ys[i] - (fit.intercept + fit.slope * ts[i])));
  }
  fit.valid = true;
  return fit;
}

std::vector<double> fd_weights(double z, const std::vector<double>& x, int m) {
  // Fornberg's recursion.
  const int n = static_cast<int>(x.size());
  std::vector<std::vector<double>> c(n, std::vector<double>(m + 1, 0.0));
  double c1 = 1.0;
  double c4 = x[0] - z;
  c[0][0] = 1.0;
  for (int i = 1; i < n; ++i) {
    const int mn = std::min(i, m);
    double c2 = 1.0;
    const double c5 = c4;
    c4 = x[i] - z;
    for (int j = 0; j < i; ++j) {
      const double c3 = x[i] - x[j];
      c2 *= c3;
      if (j == i - 1) {
        for (int k = mn; k >= 1; --k) {
          c[i][k] = c1 * (k * c[i - 1][k - 1] - c5 * c[i - 1][k]) / c2;
        }
        c[i][0] = -c1 * c5 * c[i - 1][0] / c2;
      }
      for (int k = mn; k >= 1; --k) c[j][k] = (c4 * c[j][k] - k * c[j][k - 1]) / c3;
      c[j][0] = c4 * c[j][0] / c3;
    }
    c1 = c2;
  }
  std::vector<double> out(n);
  for (int i = 0; i < n; ++i) out[i] = c[i][m];
  return out;
}

RiccatiReport riccati_invariant_report(const std::vector<TrajectoryState>& states, double t_max) {
  RiccatiReport rep;
  rep.t_max = t_max;
  for (std::size_t i = 0; i < states.size(); ++i) {
    const auto& s = states[i];
    if (s.t > t_max) break;
    ++rep.points;
    rep.bx_defect = std::max(rep.bx_defect, std::abs(s.bx - 1.0));
    if (s.bxx_sup > 0.0) rep.bxx_defect = std::max(rep.bxx_defect, std::abs(s.bxx) / s.bxx_sup);
    if (i < 2 || i + 2 >= states.size()) continue;
    std::vector<double> ts, ws;
    for (std::size_t j = i - 2; j <= i + 2; ++j) {
      ts.push_back(states[j].t);
      ws.push_back(states[j].w);
    }
    const auto wts = fd_weights(s.t, ts, 1);
    double dw = 0.0;
    for (std::size_t j = 0; j < wts.size(); ++j) dw += wts[j] * ws[j];
    const double model = s.w * s.w - s.bxx * s.bxx - (s.bx - 1.0) * s.bxxx;
    const double defect = std::abs(dw - model);
    rep.riccati_defect = std::max(rep.riccati_defect, defect);
    rep.riccati_relative = std::max(rep.riccati_relative, defect / (s.w * s.w));
  }
  return rep;
}

BlowupRun run_blowup(const GridSpec& grid, const BlowupOptions& opts) {
  BlowupRun out{make_blowup_datum(grid), 0.0, 0.0, {}, {}, {}, {}, 0, false};
  out.w0_pv = pv_fractional_laplacian(quartic_profile_dx, 0.0);
  out.predicted_t = predict_blowup_time(out.datum);
  const double w0 = out.datum.w0;

  const ModelParams model{ModelKind::Transport, 1.0, 1.0, true};
  StepperConfig cfg = opts.stepper;
  cfg.t_end = 2.0 * out.predicted_t;

  std::optional<TrajectoryTracker> tracker;
  EvolveOptions evolve_opts;
  evolve_opts.observer = [&](const StepView& v) {
    if (!tracker) tracker.emplace(out.datum.x0, v.before);
    tracker->advance(v.before, v.after);
    if (opts.to_collapse) return true;
    const auto& last = tracker->last();
    if (last.w >= opts.stop_factor * w0) {
      out.stop_reason = "w_threshold";
      return false;
    }
    if (std::abs(last.bx - 1.0) > opts.invariant_guard) {
      out.stop_reason = "invariant_lost";
      return false;
    }
    return true;
  };
  const auto run = evolve(out.datum.b0, model, cfg, evolve_opts);
  if (out.stop_reason.empty()) out.stop_reason = to_string(run.cause);
  out.steps = static_cast<long>(run.records.size()) - 1;
  if (tracker) {
    out.states = tracker->states();
    out.left_resolved_region = tracker->left_resolved_region();
  }
  out.fit = measure_blowup_time(out.states, w0);
  out.invariants = riccati_invariant_report(out.states, opts.invariant_window / w0);
  return out;
}

bool BlowupAcceptance::passed() const {
  return std::all_of(checks.begin(), checks.end(), [](const ToleranceCheck& c) { return c.passed; });
}

BlowupAcceptance blowup_acceptance(const GridSpec& grid, const BlowupOptions& opts) {
  constexpr double kFloor = 1e-10;
  BlowupAcceptance out{run_blowup(grid, opts), run_blowup(grid.with_modes(grid.n_modes() / 2), opts), {}};
  const auto& f = out.fine;
  const double t_pred = 1.0 / f.datum.w0;
  auto add = [&out](std::string name, double value, double tol, bool ok) {
    out.checks.push_back({std::move(name), value, tol, ok});
  };
  const bool fit_ok = f.fit.valid;
  add("slope", f.fit.slope, 0.01, fit_ok && std::abs(f.fit.slope + 1.0) <= 0.01);
  add("fit_residual", f.fit.residual, 1e-3, fit_ok && f.fit.residual <= 1e-3);
  const double t_err = std::abs(f.fit.t_est - t_pred) / t_pred;
  add("blowup_time_relative_error", t_err, 0.02, fit_ok && t_err <= 0.02);
  const double w0_err = std::abs(f.w0_pv - f.datum.w0) / f.datum.w0;
  add("w0_quadrature_relative_error", w0_err, 1e-4, w0_err <= 1e-4);
  add("bx_defect", f.invariants.bx_defect, 1e-4, f.invariants.bx_defect <= 1e-4);
  add("bxx_defect", f.invariants.bxx_defect, 1e-4, f.invariants.bxx_defect <= 1e-4);
  auto shrink = [&](const std::string& name, double coarse, double fine) {
    const double ratio = fine > 0.0 ? coarse / fine : std::numeric_limits<double>::infinity();
    add(name, ratio, 4.0, ratio >= 4.0 || (fine <= kFloor && coarse <= kFloor));
  };
  shrink("bx_defect_refinement_ratio", out.coarse.invariants.bx_defect, f.invariants.bx_defect);
  shrink("bxx_defect_refinement_ratio", out.coarse.invariants.bxx_defect, f.invariants.bxx_defect);
  return out;
}

}  // namespace emhd1d
