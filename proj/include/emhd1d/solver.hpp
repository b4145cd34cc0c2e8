#pragma once

#include <functional>
#include <stdexcept>
#include <string>
#include <vector>

#include "emhd1d/spectral_field.hpp"

namespace emhd1d {

enum class ModelKind { Full, Transport };
enum class Scheme { IFRK4, ETDRK4 };

std::string to_string(ModelKind kind);
std::string to_string(Scheme scheme);
ModelKind parse_model_kind(const std::string& s);
Scheme parse_scheme(const std::string& s);

/// Full:      B_t + B J_x - J B_x + mu Lambda^alpha B = 0,  J = -Lambda B
/// Transport: B_t - Lambda B B_x + mu Lambda^alpha B = 0
///
/// `nonlinear = false` keeps only the dissipative term.
struct ModelParams {
  ModelKind kind = ModelKind::Full;
  double mu = 1.0;
  double alpha = 2.0;
  bool nonlinear = true;

  void validate() const;
};

struct StepperConfig {
  Scheme scheme = Scheme::IFRK4;
  double dt_init = 1e-3;  ///< upper bound on the step (the step itself when not adaptive)
  double cfl_safety = 0.5;
  double t_end = 1.0;
  long max_steps = 10'000'000;
  double blowup_threshold = 1e8;  ///< stop once sup |Lambda B_x| exceeds this
  bool adaptive = true;
  double min_dt = 1e-12;

  void validate() const;
};

/// Thrown when the adaptive step falls below StepperConfig::min_dt.
class CflCollapse : public std::runtime_error {
 public:
  CflCollapse(double dt, double t);
  double dt() const { return dt_; }
  double t() const { return t_; }

 private:
  double dt_;
  double t_;
};

/// The dealiased quadratic part of the right-hand side.
SpectralField nonlinear_term(const SpectralField& b, const ModelParams& p);

/// -B d_x J with J = -Lambda B, dealiased; the part the transport model drops.
SpectralField stretching_term(const SpectralField& b);

/// dB/dt for the chosen model.
SpectralField rhs(const SpectralField& b, const ModelParams& p);

/// Decay rate -mu |xi|^alpha for each stored coefficient.
std::vector<double> linear_rates(const GridSpec& grid, const ModelParams& p);

/// Stage callback N(u, t, stage) used by the exponential integrators; stage
/// runs 0..3 at times t, t + dt/2, t + dt/2, t + dt.
using StageFunction = std::function<SpectralField(const SpectralField& u, double t, int stage)>;

/// One step of u_t = L u + N(u, t) with diagonal L, exact on the linear part.
SpectralField exponential_step(const SpectralField& u, double t, double dt,
                               const std::vector<double>& rates, Scheme scheme,
                               const StageFunction& nonlinear);

/// Advective CFL bound cfl_safety * dx / sup |Lambda B| (infinite when B is 0).
double cfl_limit(const SpectralField& b, const StepperConfig& cfg);

struct StepResult {
  SpectralField field;
  double dt_used;
};

/// Advances B by at most dt; with cfg.adaptive the CFL bound may shorten it.
/// Throws CflCollapse when the admissible step falls below cfg.min_dt.
StepResult step(const SpectralField& b, double t, double dt, const ModelParams& p,
                const StepperConfig& cfg);

enum class Termination { Completed, BlowupThreshold, CflCollapse, MaxSteps, Stopped };
std::string to_string(Termination t);

struct StepRecord {
  long step = 0;
  double t = 0.0;
  double dt = 0.0;
  double mean = 0.0;
  double l2 = 0.0;
  double sup = 0.0;
  double lambda_b_sup = 0.0;
  double lambda_bx_sup = 0.0;
};

struct Snapshot {
  double t;
  SpectralField field;
};

/// Field and its time derivative at one accepted step.
struct StepState {
  double t;
  SpectralField field;
  SpectralField dfield_dt;
};

/// Passed to an evolve observer after each accepted step.
struct StepView {
  const StepState& before;
  const StepState& after;
};

struct EvolveOptions {
  /// Snapshot spacing in time; 0 stores only the initial and final states.
  double snapshot_cadence = 0.0;
  /// Explicit snapshot times; overrides the cadence when non-empty.
  std::vector<double> output_times;
  /// Keep every accepted step with its time derivative (needed by trajectory tracking).
  bool store_every_step = false;
  /// Return false to stop the run.
  std::function<bool(const StepView&)> observer;
};

struct TimeSeries {
  GridSpec grid;
  ModelParams params;
  StepperConfig config;
  std::vector<Snapshot> snapshots;
  std::vector<StepRecord> records;
  std::vector<StepState> steps;
  Termination cause = Termination::Completed;
  double t_final = 0.0;
};

TimeSeries evolve(const SpectralField& b0, const ModelParams& p, const StepperConfig& cfg,
                  const EvolveOptions& opts = {});

struct PicardResult {
  /// Iterate k at t_end, for k = 0..iterations-1.
  std::vector<SpectralField> iterates;
  /// gaps[k] = max over step times of ||B^k - B^{k-1}||_{H^s}; gaps[0] compares with B^{-1} = 0.
  std::vector<double> gaps;
  bool converged = false;
  double sobolev_index = 0.0;
};

/// Iterates the frozen-coefficient linear problems
///   B^k_t + B^{k-1} J^k_x - J^{k-1} B^k_x + mu Lambda^alpha B^k = 0,  B^{-1} = 0,
/// each with the exponential integrator at the fixed step cfg.dt_init, stage
/// fields of iterate k-1 supplying the coefficients at matching stage times.
PicardResult picard_solve(const SpectralField& b0, const ModelParams& p, const StepperConfig& cfg,
                          int k_max, double tol, double s);

struct ScalingReport {
  double lambda = 0.0;
  std::vector<double> times;     ///< output times of the unscaled run
  std::vector<double> mismatch;  ///< relative L2 mismatch at each matched time
  double max_mismatch = 0.0;
  Termination cause = Termination::Completed;
  Termination scaled_cause = Termination::Completed;
};

/// Evolves b0 on its grid and lambda^{alpha-2} b0(lambda x) on the grid of
/// half-length L/lambda (same samples, same N), with times and step bounds
/// scaled by lambda^{-alpha}, and compares B_lambda(x, t) with
/// lambda^{alpha-2} B(lambda x, lambda^alpha t) at n_outputs matched times.
ScalingReport scaling_symmetry_check(const SpectralField& b0, const ModelParams& p,
                                     const StepperConfig& cfg, double lambda, int n_outputs = 4);

/// s = 5/2 - alpha + 1/2, the default index for H^s diagnostics.
inline double default_sobolev_index(double alpha) { return 3.0 - alpha; }

}  // namespace emhd1d
