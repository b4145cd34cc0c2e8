#include "emhd1d/solver.hpp"

#include <algorithm>
#include <cmath>
#include <limits>

#include "emhd1d/operators.hpp"

namespace emhd1d {

std::string to_string(ModelKind kind) { return kind == ModelKind::Full ? "full" : "transport"; }
std::string to_string(Scheme scheme) { return scheme == Scheme::IFRK4 ? "ifrk4" : "etdrk4"; }

ModelKind parse_model_kind(const std::string& s) {
  if (s == "full") return ModelKind::Full;
  if (s == "transport") return ModelKind::Transport;
  throw std::invalid_argument("unknown model kind '" + s + "'");
}

Scheme parse_scheme(const std::string& s) {
  if (s == "ifrk4") return Scheme::IFRK4;
  if (s == "etdrk4") return Scheme::ETDRK4;
  throw std::invalid_argument("unknown scheme '" + s + "'");
}

std::string to_string(Termination t) {
  switch (t) {
    case Termination::Completed: return "completed";
    case Termination::BlowupThreshold: return "blowup_threshold";
    case Termination::CflCollapse: return "cfl_collapse";
    case Termination::MaxSteps: return "max_steps";
    case Termination::Stopped: return "stopped";
  }
  return "unknown";
}

void ModelParams::validate() const {
  if (!(mu >= 0.0)) throw std::invalid_argument("model.mu must be >= 0");
  if (!(alpha >= 0.0)) throw std::invalid_argument("model.alpha must be >= 0");
}

void StepperConfig::validate() const {
  if (!(dt_init > 0.0)) throw std::invalid_argument("stepper.dt_init must be positive");
  if (!(cfl_safety > 0.0 && cfl_safety <= 1.0)) {
    throw std::invalid_argument("stepper.cfl_safety must lie in (0, 1]");
  }
  if (!(t_end > 0.0)) throw std::invalid_argument("stepper.t_end must be positive");
  if (max_steps <= 0) throw std::invalid_argument("stepper.max_steps must be positive");
  if (!(blowup_threshold > 0.0)) {
    throw std::invalid_argument("stepper.blowup_threshold must be positive");
  }
}

CflCollapse::CflCollapse(double dt, double t)
    : std::runtime_error("CFL collapse: admissible dt " + std::to_string(dt) + " at t = " +
                         std::to_string(t)),
      dt_(dt),
      t_(t) {}

SpectralField stretching_term(const SpectralField& b) {
  // -B d_x J = B Lambda B_x
  return product(b, frac_laplacian(derivative(b), 1.0));
}

SpectralField nonlinear_term(const SpectralField& b, const ModelParams& p) {
  if (!p.nonlinear) return SpectralField::zero(b.grid());
  const auto lambda_b = frac_laplacian(b, 1.0);
  const auto bx = derivative(b);
  const auto transport = product(lambda_b, bx);
  if (p.kind == ModelKind::Transport) return transport;
  // -(B J_x - J B_x) = B Lambda B_x - Lambda B B_x
  return product(b, frac_laplacian(bx, 1.0)) - transport;
}

SpectralField rhs(const SpectralField& b, const ModelParams& p) {
  auto out = nonlinear_term(b, p);
  if (p.mu > 0.0) out = out - p.mu * frac_laplacian(b, p.alpha);
  return out;
}

std::vector<double> linear_rates(const GridSpec& grid, const ModelParams& p) {
  std::vector<double> rates(grid.n_coefs());
  const int nyq = grid.n_modes() / 2;
  for (int k = 0; k <= nyq; ++k) {
    const double xi = std::abs(grid.wavenumber(k == nyq ? -nyq : k));
    rates[k] = (k == 0 || p.mu == 0.0) ? 0.0 : -p.mu * std::pow(xi, p.alpha);
  }
  return rates;
}

namespace {

using Coefs = std::vector<Complex>;

Coefs coefs_of(const SpectralField& f) { return Coefs(f.coefs().begin(), f.coefs().end()); }

// phi_1..phi_3 of a real argument; Taylor series near 0 avoids cancellation.
struct PhiFunctions {
  double e, phi1, phi2, phi3;
};

PhiFunctions phi_functions(double z) {
  PhiFunctions r{};
  r.e = std::exp(z);
  if (std::abs(z) < 0.5) {
    // phi_k(z) = sum_n z^n / (n + k)!
    double p1 = 0.0, p2 = 0.0, p3 = 0.0;
    double term = 1.0;  // z^n / n!
    for (int n = 0; n < 30; ++n) {
      p1 += term / (n + 1);
      p2 += term / ((n + 1.0) * (n + 2.0));
      p3 += term / ((n + 1.0) * (n + 2.0) * (n + 3.0));
      term *= z / (n + 1);
    }
    r.phi1 = p1;
    r.phi2 = p2;
    r.phi3 = p3;
  } else {
    r.phi1 = (r.e - 1.0) / z;
    r.phi2 = (r.e - 1.0 - z) / (z * z);
    r.phi3 = (r.e - 1.0 - z - 0.5 * z * z) / (z * z * z);
  }
  return r;
}

SpectralField ifrk4_step(const SpectralField& u, double t, double dt,
                         const std::vector<double>& rates, const StageFunction& nl) {
  const GridSpec& g = u.grid();
  const std::size_t n = rates.size();
  std::vector<double> half(n), full(n);
  for (std::size_t k = 0; k < n; ++k) {
    half[k] = std::exp(rates[k] * 0.5 * dt);
    full[k] = half[k] * half[k];
  }
  const Coefs u0 = coefs_of(u);
  const Coefs k1 = coefs_of(nl(u, t, 0));

  Coefs a(n);
  for (std::size_t k = 0; k < n; ++k) a[k] = half[k] * (u0[k] + 0.5 * dt * k1[k]);
  const Coefs k2 = coefs_of(nl(SpectralField::from_coefficients(g, a), t + 0.5 * dt, 1));

  Coefs b(n);
  for (std::size_t k = 0; k < n; ++k) b[k] = half[k] * u0[k] + 0.5 * dt * k2[k];
  const Coefs k3 = coefs_of(nl(SpectralField::from_coefficients(g, b), t + 0.5 * dt, 2));

  Coefs c(n);
  for (std::size_t k = 0; k < n; ++k) c[k] = full[k] * u0[k] + dt * half[k] * k3[k];
  const Coefs k4 = coefs_of(nl(SpectralField::from_coefficients(g, c), t + dt, 3));

  Coefs out(n);
  for (std::size_t k = 0; k < n; ++k) {
    out[k] = full[k] * u0[k] +
             dt / 6.0 * (full[k] * k1[k] + 2.0 * half[k] * (k2[k] + k3[k]) + k4[k]);
  }
  return SpectralField::from_coefficients(g, std::move(out));
}

// Cox-Matthews ETDRK4 with phi-function weights.
SpectralField etdrk4_step(const SpectralField& u, double t, double dt,
                          const std::vector<double>& rates, const StageFunction& nl) {
  const GridSpec& g = u.grid();
  const std::size_t n = rates.size();
  std::vector<double> e_half(n), e_full(n), q(n), f1(n), f2(n), f3(n);
  for (std::size_t k = 0; k < n; ++k) {
    const double z = rates[k] * dt;
    const auto h = phi_functions(0.5 * z);
    const auto p = phi_functions(z);
    e_half[k] = h.e;
    e_full[k] = p.e;
    q[k] = 0.5 * dt * h.phi1;
    f1[k] = dt * (p.phi1 - 3.0 * p.phi2 + 4.0 * p.phi3);
    f2[k] = dt * (p.phi2 - 2.0 * p.phi3);
    f3[k] = dt * (4.0 * p.phi3 - p.phi2);
  }
  const Coefs u0 = coefs_of(u);
  const Coefs nu = coefs_of(nl(u, t, 0));

  Coefs a(n);
  for (std::size_t k = 0; k < n; ++k) a[k] = e_half[k] * u0[k] + q[k] * nu[k];
  const Coefs na = coefs_of(nl(SpectralField::from_coefficients(g, a), t + 0.5 * dt, 1));

  Coefs b(n);
  for (std::size_t k = 0; k < n; ++k) b[k] = e_half[k] * u0[k] + q[k] * na[k];
  const Coefs nb = coefs_of(nl(SpectralField::from_coefficients(g, b), t + 0.5 * dt, 2));

  Coefs c(n);
  for (std::size_t k = 0; k < n; ++k) c[k] = e_half[k] * a[k] + q[k] * (2.0 * nb[k] - nu[k]);
  const Coefs nc = coefs_of(nl(SpectralField::from_coefficients(g, c), t + dt, 3));

  Coefs out(n);
  for (std::size_t k = 0; k < n; ++k) {
    out[k] = e_full[k] * u0[k] + f1[k] * nu[k] + 2.0 * f2[k] * (na[k] + nb[k]) + f3[k] * nc[k];
  }
  return SpectralField::from_coefficients(g, std::move(out));
}

StepRecord make_record(long n, double t, double dt, const SpectralField& b) {
  const auto lambda_b = frac_laplacian(b, 1.0);
  const auto lambda_bx = derivative(lambda_b);
  return StepRecord{n, t, dt, b.mean(), b.l2_norm(), b.max_abs(), lambda_b.max_abs(),
                    lambda_bx.max_abs()};
}

}  // namespace

SpectralField exponential_step(const SpectralField& u, double t, double dt,
                               const std::vector<double>& rates, Scheme scheme,
                               const StageFunction& nonlinear) {
  return scheme == Scheme::IFRK4 ? ifrk4_step(u, t, dt, rates, nonlinear)
                                 : etdrk4_step(u, t, dt, rates, nonlinear);
}

double cfl_limit(const SpectralField& b, const StepperConfig& cfg) {
  const double speed = frac_laplacian(b, 1.0).max_abs();
  if (speed == 0.0) return std::numeric_limits<double>::infinity();
  return cfg.cfl_safety * b.grid().dx() / speed;
}

StepResult step(const SpectralField& b, double t, double dt, const ModelParams& p,
                const StepperConfig& cfg) {
  if (!(dt > 0.0)) throw std::invalid_argument("step: dt must be positive");
  double used = dt;
  if (cfg.adaptive && p.nonlinear) {
    const double limit = cfl_limit(b, cfg);
    if (limit < cfg.min_dt) throw CflCollapse(limit, t);
    used = std::min(dt, limit);
  }
  const auto rates = linear_rates(b.grid(), p);
  auto next = exponential_step(b, t, used, rates, cfg.scheme,
                               [&p](const SpectralField& u, double, int) {
                                 return nonlinear_term(u, p);
                               });
  return {std::move(next), used};
}

TimeSeries evolve(const SpectralField& b0, const ModelParams& p, const StepperConfig& cfg,
                  const EvolveOptions& opts) {
  p.validate();
  cfg.validate();
  TimeSeries run{b0.grid(), p, cfg, {}, {}, {}, Termination::Completed, 0.0};

  std::vector<double> outputs = opts.output_times;
  if (outputs.empty() && opts.snapshot_cadence > 0.0) {
    for (long i = 1;; ++i) {
      const double t = i * opts.snapshot_cadence;
      if (t >= cfg.t_end * (1.0 - 1e-12)) break;
      outputs.push_back(t);
    }
  }
  std::erase_if(outputs, [&](double t) { return t <= 0.0 || t > cfg.t_end; });
  std::sort(outputs.begin(), outputs.end());
  if (outputs.empty() || outputs.back() < cfg.t_end) outputs.push_back(cfg.t_end);

  const bool need_derivative = opts.store_every_step || static_cast<bool>(opts.observer);
  auto state_of = [&](double t, const SpectralField& b) {
    return StepState{t, b, need_derivative ? rhs(b, p) : SpectralField::zero(b.grid())};
  };

  SpectralField b = b0;
  double t = 0.0;
  long n = 0;
  std::size_t next_output = 0;
  run.snapshots.push_back({0.0, b});
  run.records.push_back(make_record(0, 0.0, 0.0, b));
  StepState current = state_of(0.0, b);
  if (opts.store_every_step) run.steps.push_back(current);

  while (true) {
    if (next_output >= outputs.size()) {
      run.cause = Termination::Completed;
      break;
    }
    if (n >= cfg.max_steps) {
      run.cause = Termination::MaxSteps;
      break;
    }
    if (run.records.back().lambda_bx_sup > cfg.blowup_threshold) {
      run.cause = Termination::BlowupThreshold;
      break;
    }
    const double target = outputs[next_output];
    // Absorb a roundoff-sized remainder into this step rather than leaving a
    // vanishing step before the output time.
    const double gap = target - t;
    double dt = gap <= cfg.dt_init * (1.0 + 1e-9) ? gap : cfg.dt_init;
    StepResult res{b, 0.0};
    try {
      res = step(b, t, dt, p, cfg);
    } catch (const CflCollapse&) {
      run.cause = Termination::CflCollapse;
      break;
    }
    const bool hit = res.dt_used >= gap || t + res.dt_used >= target;
    t = hit ? target : t + res.dt_used;
    b = std::move(res.field);
    ++n;
    run.records.push_back(make_record(n, t, res.dt_used, b));
    if (hit) {
      run.snapshots.push_back({t, b});
      ++next_output;
    }
    if (need_derivative) {
      StepState after = state_of(t, b);
      bool keep_going = true;
      if (opts.observer) keep_going = opts.observer(StepView{current, after});
      if (opts.store_every_step) run.steps.push_back(after);
      current = std::move(after);
      if (!keep_going) {
        run.cause = Termination::Stopped;
        break;
      }
    }
  }
  run.t_final = t;
  if (run.snapshots.back().t != t) run.snapshots.push_back({t, b});
  return run;
}

ScalingReport scaling_symmetry_check(const SpectralField& b0, const ModelParams& p,
                                     const StepperConfig& cfg, double lambda, int n_outputs) {
  if (!(lambda > 0.0)) throw std::invalid_argument("scaling_symmetry_check: lambda must be positive");
  if (n_outputs < 1) throw std::invalid_argument("scaling_symmetry_check: n_outputs must be >= 1");
  p.validate();
  cfg.validate();
  const double time_scale = std::pow(lambda, p.alpha);
  const double amp = std::pow(lambda, p.alpha - 2.0);

  ScalingReport report;
  report.lambda = lambda;
  EvolveOptions opts;
  for (int i = 1; i <= n_outputs; ++i) opts.output_times.push_back(cfg.t_end * i / n_outputs);
  const TimeSeries base = evolve(b0, p, cfg, opts);

  const GridSpec& grid = b0.grid();
  const GridSpec scaled_grid = grid.with_half_length(grid.half_length() / lambda);
  std::vector<double> samples(b0.phys().begin(), b0.phys().end());
  for (double& v : samples) v *= amp;
  const SpectralField scaled_b0 = SpectralField::from_physical(scaled_grid, std::move(samples));
  StepperConfig scaled_cfg = cfg;
  scaled_cfg.dt_init /= time_scale;
  scaled_cfg.t_end /= time_scale;
  scaled_cfg.min_dt /= time_scale;
  scaled_cfg.blowup_threshold *= time_scale;
  EvolveOptions scaled_opts;
  for (double t : opts.output_times) scaled_opts.output_times.push_back(t / time_scale);
  const TimeSeries scaled = evolve(scaled_b0, p, scaled_cfg, scaled_opts);

  report.cause = base.cause;
  report.scaled_cause = scaled.cause;
  // Snapshot 0 is the initial state; matched outputs follow in order.
  const std::size_t matched = std::min(base.snapshots.size(), scaled.snapshots.size());
  for (std::size_t i = 1; i < matched; ++i) {
    const auto& u = base.snapshots[i].field.phys();
    const auto& v = scaled.snapshots[i].field.phys();
    double num = 0.0;
    double den = 0.0;
    for (std::size_t j = 0; j < u.size(); ++j) {
      const double ref = amp * u[j];
      num += (v[j] - ref) * (v[j] - ref);
      den += ref * ref;
    }
    const double m = den > 0.0 ? std::sqrt(num / den) : std::sqrt(num);
    report.times.push_back(base.snapshots[i].t);
    report.mismatch.push_back(m);
    report.max_mismatch = std::max(report.max_mismatch, m);
  }
  if (report.times.empty() || base.cause != Termination::Completed ||
      scaled.cause != Termination::Completed) {
    report.max_mismatch = std::numeric_limits<double>::infinity();
  }
  return report;
}

}  // namespace emhd1d
