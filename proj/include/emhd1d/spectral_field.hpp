#pragma once

#include <cmath>
#include <complex>
#include <functional>
#include <numbers>
#include <span>
#include <vector>

namespace emhd1d {

using Complex = std::complex<double>;

/// Periodic grid on the torus [-L, L) with N physical samples.
///
/// Sample j sits at x_j = -L + 2Lj/N. Fourier index k runs over
/// {-N/2, ..., N/2-1} with wavenumber xi_k = pi k / L.
class GridSpec {
 public:
  GridSpec(double half_length, int n_modes, double dealias_fraction = 2.0 / 3.0);

  double half_length() const { return half_length_; }
  int n_modes() const { return n_modes_; }
  double dealias_fraction() const { return dealias_fraction_; }

  double length() const { return 2.0 * half_length_; }
  double dx() const { return length() / n_modes_; }
  double x(int j) const { return -half_length_ + dx() * j; }
  double wavenumber(int k) const { return std::numbers::pi * k / half_length_; }

  /// Number of stored (non-negative index) coefficients, N/2 + 1.
  int n_coefs() const { return n_modes_ / 2 + 1; }

  /// Largest |k| kept by dealiasing.
  int dealias_cutoff() const;
  /// Largest wavenumber kept by dealiasing.
  double dealiased_max_wavenumber() const { return wavenumber(dealias_cutoff()); }

  GridSpec with_half_length(double half_length) const {
    return GridSpec(half_length, n_modes_, dealias_fraction_);
  }
  GridSpec with_modes(int n_modes) const {
    return GridSpec(half_length_, n_modes, dealias_fraction_);
  }

  friend bool operator==(const GridSpec&, const GridSpec&) = default;

 private:
  double half_length_;
  int n_modes_;
  double dealias_fraction_;
};

/// Real periodic field held both as physical samples and Fourier coefficients.
///
/// Only the non-negative half of the spectrum is stored (k = 0..N/2); the
/// negative half follows from conjugate symmetry. Coefficients use the
/// normalization coef_k = (1/N) sum_j phys_j exp(-i xi_k x_j), so the field
/// is the plain trigonometric sum over coef_k exp(i xi_k x). The stored
/// k = N/2 entry stands for the (real) mode k = -N/2.
///
/// Instances are immutable values.
class SpectralField {
 public:
  static SpectralField zero(const GridSpec& grid);
  static SpectralField from_physical(const GridSpec& grid, std::vector<double> phys);
  static SpectralField from_coefficients(const GridSpec& grid, std::vector<Complex> coefs);
  static SpectralField from_function(const GridSpec& grid,
                                     const std::function<double(double)>& fn);

  const GridSpec& grid() const { return grid_; }
  std::span<const double> phys() const { return phys_; }
  std::span<const Complex> coefs() const { return coefs_; }

  /// Coefficient for any signed index k in [-N/2, N/2-1].
  Complex coefficient(int k) const;

  double mean() const { return coefs_[0].real(); }
  double l2_norm() const;
  double max_abs() const;

  SpectralField operator-() const;
  friend SpectralField operator+(const SpectralField& a, const SpectralField& b);
  friend SpectralField operator-(const SpectralField& a, const SpectralField& b);
  friend SpectralField operator*(double s, const SpectralField& f);

 private:
  SpectralField(GridSpec grid, std::vector<double> phys, std::vector<Complex> coefs)
      : grid_(grid), phys_(std::move(phys)), coefs_(std::move(coefs)) {}

  GridSpec grid_;
  std::vector<double> phys_;
  std::vector<Complex> coefs_;
};

/// Forward transform in the field's coefficient convention (half spectrum).
std::vector<Complex> forward_transform(const GridSpec& grid, std::span<const double> phys);
/// Inverse of forward_transform.
std::vector<double> inverse_transform(const GridSpec& grid, std::span<const Complex> coefs);

/// L2 inner product over the torus.
double inner(const SpectralField& a, const SpectralField& b);

}  // namespace emhd1d
