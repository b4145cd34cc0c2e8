#pragma once

#include <cmath>
#include <cstdint>
#include <vector>

#include "emhd1d/spectral_field.hpp"

namespace emhd1d {

/// Smooth dyadic cutoffs: chi = 1 on |xi| <= 3/4, chi = 0 on |xi| >= 1,
/// phi(xi) = chi(xi/2) - chi(xi), phi_q(xi) = phi(xi / 2^q) for q >= 0 and
/// phi_{-1} = chi.
class LittlewoodPaley {
 public:
  explicit LittlewoodPaley(const GridSpec& grid);

  static double chi(double xi);
  static double phi(double xi);
  static double lambda(int q) { return std::ldexp(1.0, q); }
  static double shell_weight(int q, double xi);

  const GridSpec& grid() const { return grid_; }
  /// Highest shell that can be nonzero on the grid.
  int q_max() const { return q_max_; }

  /// Delta_q f. Throws for q < -1 or q > q_max.
  SpectralField project(const SpectralField& f, int q) const;

 private:
  GridSpec grid_;
  int q_max_;
};

struct ShellSpectrum {
  double s = 0.0;
  /// masses[i] belongs to shell q = i - 1.
  std::vector<double> masses;
  double total = 0.0;

  double mass(int q) const { return masses.at(static_cast<std::size_t>(q + 1)); }
};

/// lambda_q^{2s} ||Delta_q f||^2 for q = -1..q_max.
ShellSpectrum shell_spectrum(const LittlewoodPaley& lp, const SpectralField& f, double s);

/// Homogeneous Sobolev norm through the direct multiplier |xi|^s. The zero mode
/// only counts for s = 0.
double sobolev_norm(const SpectralField& f, double s);

/// Inhomogeneous H^s norm, multiplier (1 + xi^2)^{s/2}.
double hs_norm(const SpectralField& f, double s);

/// Sup norm sampled on a grid refined by `factor` (zero-padded spectrum).
double sup_norm_oversampled(const SpectralField& f, int factor = 4);

/// L^p norm by trapezoidal quadrature on the native grid.
double lp_norm(const SpectralField& f, double p);

struct BernsteinReport {
  int trials = 0;
  double derivative_constant = 0.0;  ///< max ||d_x f_q|| / (lambda_q ||f_q||)
  double sup_constant = 0.0;         ///< max ||f_q||_inf / (lambda_q^{1/2} ||f_q||)
  double bound = 4.0;
  bool passed() const { return derivative_constant <= bound && sup_constant <= bound; }
};

BernsteinReport bernstein_check(const GridSpec& grid, int trials, std::uint64_t seed);

/// Bounded-ratio harness for the Delta_q commutator and the Lambda^gamma
/// commutator, with n = 1, r0 = 0, r1 = 1/2, r2 = -1/2 + eps, gamma = 1/2,
/// sigma = 1 - eps, r = 2 and r1 = r2 = 4 for the Holder pair.
struct CommutatorReport {
  int trials = 0;
  double epsilon = 0.1;
  double shell_max_ratio = 0.0;     ///< max over trials and q of LHS_q / RHS_q
  double shell_l2_ratio = 0.0;      ///< max over trials of (sum_q ratio_q^2)^{1/2}
  double fractional_max_ratio = 0.0;
  double bound = 0.0;               ///< ratio ceiling used for pass/fail
  bool passed() const {
    return shell_l2_ratio <= bound && fractional_max_ratio <= bound;
  }
};

CommutatorReport commutator_check(const GridSpec& grid, int trials, std::uint64_t seed,
                                  double epsilon = 0.1);

/// Range [c, C] of (LP total) / (direct |xi|^{2s} sum) over random fields.
struct NormEquivalence {
  double s = 0.0;
  int n_modes = 0;
  double lower = 0.0;
  double upper = 0.0;
};

NormEquivalence norm_equivalence(const GridSpec& grid, double s, int trials, std::uint64_t seed);

}  // namespace emhd1d
