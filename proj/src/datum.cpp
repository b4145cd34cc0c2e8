#include "emhd1d/datum.hpp"

#include <bit>
#include <cstring>
#include <iterator>
#include <fstream>
#include <stdexcept>

#include "emhd1d/lp_analysis.hpp"

namespace emhd1d {

double quartic_profile(double x) { return std::exp(-std::pow(x, 4)) * std::sin(x); }

double quartic_profile_dx(double x) {
  return std::exp(-std::pow(x, 4)) * (std::cos(x) - 4.0 * std::pow(x, 3) * std::sin(x));
}

double quartic_profile_dxx(double x) {
  const double s = std::sin(x);
  const double c = std::cos(x);
  return std::exp(-std::pow(x, 4)) *
         (-s - 12.0 * x * x * s + 16.0 * std::pow(x, 6) * s - 8.0 * std::pow(x, 3) * c);
}

SpectralField remove_mean(const SpectralField& f) {
  std::vector<Complex> c(f.coefs().begin(), f.coefs().end());
  c[0] = Complex{};
  return SpectralField::from_coefficients(f.grid(), std::move(c));
}

SpectralField quartic_sine_datum(const GridSpec& grid) {
  // The profile is odd, so the sampled field already has zero mean up to rounding.
  return remove_mean(SpectralField::from_function(grid, quartic_profile));
}

SpectralField gaussian_packet(const GridSpec& grid, double amplitude, double width,
                              double wavenumber) {
  if (!(width > 0.0)) throw std::invalid_argument("gaussian_packet: width must be positive");
  return remove_mean(SpectralField::from_function(grid, [=](double x) {
    const double r = x / width;
    return amplitude * std::exp(-r * r) * std::sin(wavenumber * x);
  }));
}

SpectralField random_rough(const GridSpec& grid, double s_base, double norm, std::uint64_t seed,
                           double delta) {
  std::mt19937_64 rng(seed);
  std::uniform_real_distribution<double> phase(0.0, 2.0 * std::numbers::pi);
  std::vector<Complex> c(grid.n_coefs());
  for (int k = 1; k <= grid.dealias_cutoff() && k < grid.n_modes() / 2; ++k) {
    const double xi = grid.wavenumber(k);
    const double mag = std::pow(xi, -(s_base + 0.5)) * std::pow(1.0 + xi, -delta);
    c[k] = std::polar(mag, phase(rng));
  }
  auto f = SpectralField::from_coefficients(grid, std::move(c));
  const double current = hs_norm(f, s_base);
  return (norm / current) * f;
}

SpectralField random_band_limited(const GridSpec& grid, int kmax, double slope,
                                  std::mt19937_64& rng) {
  std::normal_distribution<double> gauss(0.0, 1.0);
  std::vector<Complex> c(grid.n_coefs());
  kmax = std::min(kmax, grid.n_modes() / 2 - 1);
  for (int k = 1; k <= kmax; ++k) {
    const double env = std::pow(1.0 + k, -slope);
    const double re = gauss(rng);
    const double im = gauss(rng);
    c[k] = env * Complex(re, im);
  }
  return SpectralField::from_coefficients(grid, std::move(c));
}

SpectralField datum_from_file(const GridSpec& grid, const std::filesystem::path& path) {
  std::vector<double> values;
  if (path.extension() == ".bin") {
    std::ifstream in(path, std::ios::binary);
    if (!in) throw std::runtime_error("cannot open datum file " + path.string());
    std::vector<char> bytes((std::istreambuf_iterator<char>(in)), std::istreambuf_iterator<char>());
    if (bytes.size() % sizeof(double) != 0) {
      throw std::runtime_error("datum file size is not a multiple of 8 bytes");
    }
    values.resize(bytes.size() / sizeof(double));
    static_assert(std::endian::native == std::endian::little, "little-endian host required");
    std::memcpy(values.data(), bytes.data(), bytes.size());
  } else {
    std::ifstream in(path);
    if (!in) throw std::runtime_error("cannot open datum file " + path.string());
    double v = 0.0;
    while (in >> v) values.push_back(v);
  }
  if (static_cast<int>(values.size()) != grid.n_modes()) {
    throw std::runtime_error("datum file holds " + std::to_string(values.size()) +
                             " samples, grid expects " + std::to_string(grid.n_modes()));
  }
  return remove_mean(SpectralField::from_physical(grid, std::move(values)));
}

}  // namespace emhd1d
