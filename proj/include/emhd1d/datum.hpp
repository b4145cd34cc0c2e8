#pragma once

#include <cstdint>
#include <filesystem>
#include <random>

#include "emhd1d/spectral_field.hpp"

namespace emhd1d {

/// exp(-x^4) sin x, the profile with B0'(0) = 1, B0''(0) = 0 and Lambda B0'(0) > 0.
double quartic_profile(double x);
double quartic_profile_dx(double x);
double quartic_profile_dxx(double x);

SpectralField quartic_sine_datum(const GridSpec& grid);

/// amplitude * exp(-(x/width)^2) * sin(wavenumber * x), mean removed.
SpectralField gaussian_packet(const GridSpec& grid, double amplitude, double width,
                              double wavenumber);

/// Random phases over the magnitude profile |xi|^{-(s_base + 1/2)} (1 + |xi|)^{-delta}
/// on the dealiased band, scaled so that ||B||_{H^{s_base}} = norm.
SpectralField random_rough(const GridSpec& grid, double s_base, double norm, std::uint64_t seed,
                           double delta = 0.01);

/// Zero-mean field with Gaussian coefficients of envelope (1 + k)^{-slope}, k <= kmax.
SpectralField random_band_limited(const GridSpec& grid, int kmax, double slope,
                                  std::mt19937_64& rng);

/// Samples from a file: raw little-endian float64 when the extension is .bin,
/// whitespace-separated text otherwise. Must hold exactly N values.
SpectralField datum_from_file(const GridSpec& grid, const std::filesystem::path& path);

SpectralField remove_mean(const SpectralField& f);

}  // namespace emhd1d
