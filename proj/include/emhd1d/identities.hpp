#pragma once

#include <cstdint>
#include <string>
#include <vector>

#include "emhd1d/spectral_field.hpp"

namespace emhd1d {

struct IdentityCheck {
  std::string name;
  double max_error = 0.0;  ///< worst relative error over the trials
  double tolerance = 0.0;
  bool passed() const { return max_error <= tolerance; }
};

struct IdentityReport {
  int trials = 0;
  std::vector<IdentityCheck> checks;
  bool passed() const;
  const IdentityCheck& check(const std::string& name) const;
};

/// Operator and Littlewood-Paley identities on random band-limited fields
/// (band |k| <= N/8, so dealiased products of two fields are exact):
///   hilbert_squared       H H f = -(f - mean f)
///   lambda_hilbert_dx     Lambda f = H d_x f = d_x H f
///   riesz_inverse         Lambda^r I_r f = f - mean f, r drawn from (0, 1)
///   cotlar                H(f H f) = ((H f)^2 - f^2) / 2, relative to ||f||^2
///   hilbert_isometry      ||H f|| = ||f|| for zero-mean f
///   lp_reconstruction     sum_q Delta_q f = f
///   lp_orthogonality      Delta_p Delta_q f = 0 for |p - q| >= 2
///   evaluate_nodes        evaluate_at(x_j) = f(x_j)
IdentityReport operator_identity_suite(const GridSpec& grid, int trials, std::uint64_t seed);

}  // namespace emhd1d
