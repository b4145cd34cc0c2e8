#pragma once

#include <functional>

#include "emhd1d/spectral_field.hpp"

namespace emhd1d {

/// Symbol of a diagonal Fourier operator, as a function of wavenumber xi.
/// Even symbols act on the k = -N/2 mode; odd ones (derivative, Hilbert)
/// annihilate it so that the output stays real.
struct Multiplier {
  std::function<Complex(double)> symbol;
  bool even = true;
};

SpectralField apply_multiplier(const SpectralField& f, const Multiplier& m);

/// Hilbert transform, symbol -i sgn(xi), zero mode sent to 0.
SpectralField hilbert(const SpectralField& f);

/// Lambda^alpha = (-d^2/dx^2)^{alpha/2}, symbol |xi|^alpha, zero mode sent to 0.
SpectralField frac_laplacian(const SpectralField& f, double alpha);

/// d/dx, symbol i xi.
SpectralField derivative(const SpectralField& f, int order = 1);

/// Riesz potential I_r, symbol |xi|^{-r} off the zero mode. Requires 0 < r < 1.
SpectralField riesz_potential(const SpectralField& f, double r);

/// Zeroes every coefficient with |k| above the grid's dealiasing cutoff.
SpectralField dealias(const SpectralField& f);

/// Zeroes every coefficient with |k| > kmax.
SpectralField truncate(const SpectralField& f, int kmax);

/// Pointwise product. `dealiased` applies the grid's truncation to the result.
SpectralField product(const SpectralField& a, const SpectralField& b, bool dealiased = true);

/// Trigonometric-series value at an arbitrary x (reduced modulo 2L).
double evaluate_at(const SpectralField& f, double x);

/// Same as evaluate_at but for a raw half spectrum on `grid`.
double evaluate_series(const GridSpec& grid, std::span<const Complex> coefs, double x);

}  // namespace emhd1d
