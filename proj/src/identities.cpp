#include "emhd1d/identities.hpp"

#include <algorithm>
#include <random>
#include <stdexcept>

#include "emhd1d/datum.hpp"
#include "emhd1d/lp_analysis.hpp"
#include "emhd1d/operators.hpp"

namespace emhd1d {

bool IdentityReport::passed() const {
  return std::all_of(checks.begin(), checks.end(), [](const IdentityCheck& c) { return c.passed(); });
}

const IdentityCheck& IdentityReport::check(const std::string& name) const {
  for (const auto& c : checks) {
    if (c.name == name) return c;
  }
  throw std::out_of_range("no identity check named " + name);
}

namespace {

double rel(const SpectralField& diff, double scale) {
  return scale > 0.0 ? diff.l2_norm() / scale : diff.l2_norm();
}

}  // namespace

IdentityReport operator_identity_suite(const GridSpec& grid, int trials, std::uint64_t seed) {
  if (trials <= 0) throw std::invalid_argument("operator_identity_suite: trials must be positive");
  std::mt19937_64 rng(seed);
  std::uniform_real_distribution<double> unit(0.0, 1.0);
  const int band = grid.n_modes() / 8;
  const LittlewoodPaley lp(grid);

  IdentityReport report;
  report.trials = trials;
  report.checks = {{"hilbert_squared", 0.0, 1e-10},   {"lambda_hilbert_dx", 0.0, 1e-10},
                   {"riesz_inverse", 0.0, 1e-10},     {"cotlar", 0.0, 1e-10},
                   {"hilbert_isometry", 0.0, 1e-12},  {"lp_reconstruction", 0.0, 1e-12},
                   {"lp_orthogonality", 0.0, 1e-13},  {"evaluate_nodes", 0.0, 1e-12}};
  auto bump = [&report](std::size_t i, double e) {
    report.checks[i].max_error = std::max(report.checks[i].max_error, e);
  };

  for (int trial = 0; trial < trials; ++trial) {
    const SpectralField f0 = random_band_limited(grid, band, 1.0, rng);
    // A nonzero mean exercises the "- mean" parts of the identities.
    std::vector<double> shifted(f0.phys().begin(), f0.phys().end());
    const double offset = unit(rng) - 0.5;
    for (double& v : shifted) v += offset;
    const SpectralField f = SpectralField::from_physical(grid, std::move(shifted));
    const SpectralField centered = f - SpectralField::from_physical(
                                           grid, std::vector<double>(grid.n_modes(), f.mean()));
    const double fn = f.l2_norm();

    const SpectralField hf = hilbert(f);
    bump(0, rel(hilbert(hf) + centered, fn));

    const SpectralField lam = frac_laplacian(f, 1.0);
    const double ln = lam.l2_norm();
    bump(1, std::max(rel(lam - hilbert(derivative(f)), ln), rel(lam - derivative(hf), ln)));

    const double r = 0.05 + 0.9 * unit(rng);
    bump(2, rel(frac_laplacian(riesz_potential(f, r), r) - centered, fn));

    const SpectralField hf0 = hilbert(f0);
    const double f0n = f0.l2_norm();
    const SpectralField lhs = hilbert(product(f0, hf0));
    const SpectralField rhs = 0.5 * (product(hf0, hf0) - product(f0, f0));
    bump(3, rel(lhs - rhs, f0n * f0n));

    bump(4, std::abs(hf0.l2_norm() - f0n) / f0n);

    SpectralField sum = SpectralField::zero(grid);
    std::vector<SpectralField> shells;
    for (int q = -1; q <= lp.q_max(); ++q) {
      shells.push_back(lp.project(f, q));
      sum = sum + shells.back();
    }
    bump(5, rel(sum - f, fn));

    for (int p = -1; p <= lp.q_max(); ++p) {
      for (int q = p + 2; q <= lp.q_max(); ++q) {
        bump(6, rel(lp.project(shells[static_cast<std::size_t>(q + 1)], p), fn));
      }
    }

    const double scale = f.max_abs();
    double node_err = 0.0;
    for (int j = 0; j < grid.n_modes(); j += 7) {
      node_err = std::max(node_err, std::abs(evaluate_at(f, grid.x(j)) - f.phys()[j]));
    }
    bump(7, node_err / scale);
  }
  return report;
}

}  // namespace emhd1d
