#include "emhd1d/lp_analysis.hpp"

#include <algorithm>
#include <limits>
#include <random>
#include <stdexcept>
#include <string>

#include "emhd1d/datum.hpp"
#include "emhd1d/operators.hpp"

namespace emhd1d {

namespace {

double bump(double t) { return t > 0.0 ? std::exp(-1.0 / t) : 0.0; }

// Smooth step: 0 for t <= 0, 1 for t >= 1.
double smooth_step(double t) {
  const double a = bump(t);
  const double b = bump(1.0 - t);
  return a / (a + b);
}

// Sum over the full spectrum of w(xi_k) |coef_k|^2, times 2L.
template <typename Weight>
double weighted_energy(const SpectralField& f, Weight&& w) {
  const GridSpec& g = f.grid();
  auto c = f.coefs();
  const int nyq = g.n_modes() / 2;
  double sum = w(0.0) * std::norm(c[0]) + w(g.wavenumber(-nyq)) * std::norm(c[nyq]);
  for (int k = 1; k < nyq; ++k) sum += 2.0 * w(g.wavenumber(k)) * std::norm(c[k]);
  return g.length() * sum;
}

}  // namespace

LittlewoodPaley::LittlewoodPaley(const GridSpec& grid) : grid_(grid) {
  const double xi_dealiased = grid.dealiased_max_wavenumber();
  const double xi_grid = std::abs(grid.wavenumber(-grid.n_modes() / 2));
  int q = std::max(0, static_cast<int>(std::ceil(std::log2(xi_dealiased))));
  // Shells above q_max must vanish on every grid wavenumber.
  while (0.75 * lambda(q + 1) < xi_grid) ++q;
  q_max_ = q;
}

double LittlewoodPaley::chi(double xi) { return smooth_step(4.0 * (1.0 - std::abs(xi))); }

double LittlewoodPaley::phi(double xi) { return chi(xi / 2.0) - chi(xi); }

double LittlewoodPaley::shell_weight(int q, double xi) {
  if (q < -1) return 0.0;
  if (q == -1) return chi(xi);
  return phi(xi / lambda(q));
}

SpectralField LittlewoodPaley::project(const SpectralField& f, int q) const {
  if (q < -1 || q > q_max_) {
    throw std::out_of_range("shell index " + std::to_string(q) + " outside [-1, " +
                            std::to_string(q_max_) + "]");
  }
  return apply_multiplier(f, {[q](double xi) { return Complex(shell_weight(q, xi), 0.0); }, true});
}

ShellSpectrum shell_spectrum(const LittlewoodPaley& lp, const SpectralField& f, double s) {
  ShellSpectrum out;
  out.s = s;
  for (int q = -1; q <= lp.q_max(); ++q) {
    const double w = std::pow(LittlewoodPaley::lambda(q), 2.0 * s);
    const double shell = weighted_energy(f, [q](double xi) {
      const double phi = LittlewoodPaley::shell_weight(q, xi);
      return phi * phi;
    });
    out.masses.push_back(w * shell);
    out.total += w * shell;
  }
  return out;
}

double sobolev_norm(const SpectralField& f, double s) {
  return std::sqrt(weighted_energy(f, [s](double xi) {
    if (xi == 0.0) return s == 0.0 ? 1.0 : 0.0;
    return std::pow(std::abs(xi), 2.0 * s);
  }));
}

double hs_norm(const SpectralField& f, double s) {
  return std::sqrt(weighted_energy(f, [s](double xi) { return std::pow(1.0 + xi * xi, s); }));
}

double sup_norm_oversampled(const SpectralField& f, int factor) {
  if (factor <= 1) return f.max_abs();
  const GridSpec& g = f.grid();
  const GridSpec fine(g.half_length(), g.n_modes() * factor, g.dealias_fraction());
  std::vector<Complex> c(fine.n_coefs());
  auto src = f.coefs();
  const int nyq = g.n_modes() / 2;
  for (int k = 0; k < nyq; ++k) c[k] = src[k];
  // Split the coarse -N/2 mode evenly between +N/2 and -N/2 on the fine grid.
  c[nyq] = 0.5 * src[nyq];
  return SpectralField::from_coefficients(fine, std::move(c)).max_abs();
}

double lp_norm(const SpectralField& f, double p) {
  double sum = 0.0;
  for (double v : f.phys()) sum += std::pow(std::abs(v), p);
  return std::pow(sum * f.grid().dx(), 1.0 / p);
}

BernsteinReport bernstein_check(const GridSpec& grid, int trials, std::uint64_t seed) {
  LittlewoodPaley lp(grid);
  std::mt19937_64 rng(seed);
  std::uniform_int_distribution<int> pick_q(0, lp.q_max());
  BernsteinReport rep;
  rep.trials = trials;
  for (int t = 0; t < trials; ++t) {
    const int q = pick_q(rng);
    auto f = lp.project(random_band_limited(grid, grid.n_modes() / 2 - 1, 0.0, rng), q);
    const double norm = f.l2_norm();
    if (norm == 0.0) continue;
    const double lam = LittlewoodPaley::lambda(q);
    rep.derivative_constant =
        std::max(rep.derivative_constant, derivative(f).l2_norm() / (lam * norm));
    rep.sup_constant =
        std::max(rep.sup_constant, sup_norm_oversampled(f) / (std::sqrt(lam) * norm));
  }
  return rep;
}

CommutatorReport commutator_check(const GridSpec& grid, int trials, std::uint64_t seed,
                                  double epsilon) {
  LittlewoodPaley lp(grid);
  std::mt19937_64 rng(seed);
  std::uniform_real_distribution<double> slope(0.5, 2.0);
  // Band limit N/8 keeps every product below the Nyquist mode, so undealiased
  // pointwise products are exact and L^4 quadrature on the grid is exact.
  const int kmax = grid.n_modes() / 8;
  CommutatorReport rep;
  rep.trials = trials;
  rep.epsilon = epsilon;
  rep.bound = 10.0;
  const double r1 = 0.5;
  const double r2 = -0.5 + epsilon;
  const double gamma = 0.5;
  const double sigma = 1.0 - epsilon;
  for (int t = 0; t < trials; ++t) {
    auto f = random_band_limited(grid, kmax, slope(rng), rng);
    auto g = random_band_limited(grid, kmax, slope(rng), rng);

    const auto fg = product(f, g, false);
    const double rhs_norms = 2.0 * sobolev_norm(f, r1) * sobolev_norm(g, r2);
    double l2 = 0.0;
    for (int q = -1; q <= lp.q_max(); ++q) {
      const double lhs = (lp.project(fg, q) - product(f, lp.project(g, q), false)).l2_norm();
      const double rhs = std::pow(LittlewoodPaley::lambda(q), -(r1 + r2 - 0.5)) * rhs_norms;
      const double ratio = lhs / rhs;
      rep.shell_max_ratio = std::max(rep.shell_max_ratio, ratio);
      l2 += ratio * ratio;
    }
    rep.shell_l2_ratio = std::max(rep.shell_l2_ratio, std::sqrt(l2));

    const double lhs =
        (frac_laplacian(fg, gamma) - product(f, frac_laplacian(g, gamma), false)).l2_norm();
    const double rhs =
        lp_norm(frac_laplacian(f, sigma), 4.0) * lp_norm(riesz_potential(g, sigma - gamma), 4.0);
    rep.fractional_max_ratio = std::max(rep.fractional_max_ratio, lhs / rhs);
  }
  return rep;
}

NormEquivalence norm_equivalence(const GridSpec& grid, double s, int trials, std::uint64_t seed) {
  LittlewoodPaley lp(grid);
  std::mt19937_64 rng(seed);
  std::uniform_real_distribution<double> slope(0.0, 3.0);
  NormEquivalence out{s, grid.n_modes(), std::numeric_limits<double>::infinity(), 0.0};
  for (int t = 0; t < trials; ++t) {
    auto f = random_band_limited(grid, grid.dealias_cutoff(), slope(rng), rng);
    const double direct = sobolev_norm(f, s);
    const double ratio = shell_spectrum(lp, f, s).total / (direct * direct);
    out.lower = std::min(out.lower, ratio);
    out.upper = std::max(out.upper, ratio);
  }
  return out;
}

}  // namespace emhd1d
