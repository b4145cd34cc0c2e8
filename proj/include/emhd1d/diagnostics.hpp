#pragma once

#include <vector>

#include "emhd1d/lp_analysis.hpp"
#include "emhd1d/solver.hpp"

namespace emhd1d {

struct NormRow {
  double t = 0.0;
  std::vector<double> hs;          ///< ||B(t)||_{H^s}, one per s
  std::vector<double> dissipative; ///< ||B(t)||_{Hdot^{s + alpha/2}}
  std::vector<double> dissipation_integral;  ///< int_0^t ||B||^2_{H^{s + alpha/2}}
  /// ||B||^2 + 2 mu int ||Lambda^{alpha/2} B||^2 - 2 int <B, N(B)> - ||B0||^2
  double l2_budget_defect = 0.0;
};

struct NormTable {
  std::vector<double> s_list;
  std::vector<NormRow> rows;
};

/// Norms at every snapshot of the run; time integrals by the trapezoidal rule.
NormTable norm_series(const TimeSeries& run, const std::vector<double>& s_list);

struct SmoothingFit {
  double exponent_est = 0.0;  ///< e in ||B(t)||_{Hdot^{s_target}} ~ t^{-e}
  double expected = 0.0;      ///< (s_target - s_base) / alpha
  double residual = 0.0;      ///< max log-space deviation from the fitted line
  int points = 0;
};

/// Log-log least squares on the snapshots with t in [t_min, 10 t_min].
SmoothingFit smoothing_rate_fit(const TimeSeries& run, double s_base, double s_target,
                                double alpha, double t_min);

struct FluxDecomposition {
  double i_total = 0.0;
  double k_total = 0.0;
  std::vector<double> i_shells;  ///< index q + 1
  std::vector<double> k_shells;
};

/// I = sum_q lambda_q^{2s} int (B Lambda B)_q B_{x,q},
/// K = sum_q lambda_q^{2s} int (Lambda B B_x)_q B_q, products dealiased.
FluxDecomposition flux_decomposition(const LittlewoodPaley& lp, const SpectralField& b, double s);

/// sum_q lambda_q^{2s} ||Lambda^{alpha/2} B_q||^2
double shell_dissipation(const LittlewoodPaley& lp, const SpectralField& b, double s, double alpha);

/// d/dt sum_q lambda_q^{2s} ||B_q||^2 predicted by the flux identity for the
/// full model: 2 (-mu D - I - 2K).
double shell_energy_rate(const LittlewoodPaley& lp, const SpectralField& b, const ModelParams& p,
                         double s);

struct FluxBalance {
  double max_defect = 0.0;
  long steps = 0;
};

/// Runs n_steps fixed steps of size dt and returns the largest
/// |(E_{n+1} - E_n)/dt - (R_n + R_{n+1})/2| with E the shell energy and R its
/// predicted rate.
FluxBalance flux_balance_defect(const SpectralField& b0, const ModelParams& p, Scheme scheme,
                                double s, double dt, long n_steps);

}  // namespace emhd1d
