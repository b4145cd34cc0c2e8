#include "emhd1d/operators.hpp"

#include <stdexcept>

namespace emhd1d {

SpectralField apply_multiplier(const SpectralField& f, const Multiplier& m) {
  const GridSpec& grid = f.grid();
  auto in = f.coefs();
  std::vector<Complex> out(in.size());
  const int nyquist = grid.n_modes() / 2;
  for (int k = 0; k < nyquist; ++k) out[k] = m.symbol(grid.wavenumber(k)) * in[k];
  // The stored Nyquist entry is the k = -N/2 mode.
  out[nyquist] = m.even ? m.symbol(grid.wavenumber(-nyquist)) * in[nyquist] : Complex{};
  return SpectralField::from_coefficients(grid, std::move(out));
}

SpectralField hilbert(const SpectralField& f) {
  return apply_multiplier(f, {[](double xi) {
                                if (xi > 0.0) return Complex(0.0, -1.0);
                                if (xi < 0.0) return Complex(0.0, 1.0);
                                return Complex{};
                              },
                              false});
}

SpectralField frac_laplacian(const SpectralField& f, double alpha) {
  if (!(alpha >= 0.0)) throw std::invalid_argument("frac_laplacian: alpha must be >= 0");
  return apply_multiplier(f, {[alpha](double xi) {
                                if (xi == 0.0) return Complex{};
                                return Complex(std::pow(std::abs(xi), alpha), 0.0);
                              },
                              true});
}

SpectralField derivative(const SpectralField& f, int order) {
  if (order < 0) throw std::invalid_argument("derivative: order must be >= 0");
  return apply_multiplier(f, {[order](double xi) { return std::pow(Complex(0.0, xi), order); },
                              order % 2 == 0});
}

SpectralField riesz_potential(const SpectralField& f, double r) {
  if (!(r > 0.0 && r < 1.0)) {
    throw std::invalid_argument("riesz_potential: r must lie in (0, 1)");
  }
  return apply_multiplier(f, {[r](double xi) {
                                if (xi == 0.0) return Complex{};
                                return Complex(std::pow(std::abs(xi), -r), 0.0);
                              },
                              true});
}

SpectralField truncate(const SpectralField& f, int kmax) {
  std::vector<Complex> c(f.coefs().begin(), f.coefs().end());
  for (int k = std::max(kmax + 1, 0); k < static_cast<int>(c.size()); ++k) c[k] = Complex{};
  return SpectralField::from_coefficients(f.grid(), std::move(c));
}

SpectralField dealias(const SpectralField& f) { return truncate(f, f.grid().dealias_cutoff()); }

SpectralField product(const SpectralField& a, const SpectralField& b, bool dealiased) {
  if (!(a.grid() == b.grid())) throw std::invalid_argument("product: grids differ");
  auto pa = a.phys();
  auto pb = b.phys();
  std::vector<double> out(pa.size());
  for (std::size_t j = 0; j < out.size(); ++j) out[j] = pa[j] * pb[j];
  auto f = SpectralField::from_physical(a.grid(), std::move(out));
  return dealiased ? dealias(f) : f;
}

double evaluate_series(const GridSpec& grid, std::span<const Complex> coefs, double x) {
  const double period = grid.length();
  // Reduce into [-L, L).
  x = x - period * std::floor((x + grid.half_length()) / period);
  const int nyquist = grid.n_modes() / 2;
  const double theta = std::numbers::pi * x / grid.half_length();
  const Complex z = std::polar(1.0, theta);
  double sum = coefs[0].real();
  Complex zk(1.0, 0.0);
  for (int k = 1; k < nyquist; ++k) {
    // Reseed the power recurrence periodically to bound rounding drift.
    zk = (k % 64 == 0) ? std::polar(1.0, theta * k) : zk * z;
    sum += 2.0 * (coefs[k] * zk).real();
  }
  sum += coefs[nyquist].real() * std::cos(theta * nyquist);
  return sum;
}

double evaluate_at(const SpectralField& f, double x) {
  return evaluate_series(f.grid(), f.coefs(), x);
}

}  // namespace emhd1d
