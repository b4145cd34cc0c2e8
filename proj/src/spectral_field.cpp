#include "emhd1d/spectral_field.hpp"

#include <fftw3.h>

#include <algorithm>
#include <memory>
#include <mutex>
#include <stdexcept>
#include <string>
#include <unordered_map>

namespace emhd1d {

GridSpec::GridSpec(double half_length, int n_modes, double dealias_fraction)
    : half_length_(half_length), n_modes_(n_modes), dealias_fraction_(dealias_fraction) {
  if (!(half_length > 0.0) || !std::isfinite(half_length)) {
    throw std::invalid_argument("grid half_length must be positive");
  }
  if (n_modes < 8 || n_modes % 2 != 0) {
    throw std::invalid_argument("grid n_modes must be even and >= 8, got " +
                                std::to_string(n_modes));
  }
  if (!(dealias_fraction > 0.0 && dealias_fraction <= 1.0)) {
    throw std::invalid_argument("dealias_fraction must lie in (0, 1]");
  }
}

int GridSpec::dealias_cutoff() const {
  // Small slack so that e.g. (2/3)*(N/2) with N divisible by 3 keeps its integer.
  return static_cast<int>(std::floor(dealias_fraction_ * (n_modes_ / 2) + 1e-9));
}

namespace {

// FFTW's planner is not thread-safe; execution on distinct buffers is.
std::mutex& planner_mutex() {
  static std::mutex m;
  return m;
}

struct Plan {
  explicit Plan(int n) : n(n) {
    real = static_cast<double*>(fftw_malloc(sizeof(double) * n));
    spec = static_cast<fftw_complex*>(fftw_malloc(sizeof(fftw_complex) * (n / 2 + 1)));
    std::lock_guard lock(planner_mutex());
    // ESTIMATE keeps the algorithm choice, and hence the bits, reproducible.
    r2c = fftw_plan_dft_r2c_1d(n, real, spec, FFTW_ESTIMATE);
    c2r = fftw_plan_dft_c2r_1d(n, spec, real, FFTW_ESTIMATE);
  }
  ~Plan() {
    std::lock_guard lock(planner_mutex());
    fftw_destroy_plan(r2c);
    fftw_destroy_plan(c2r);
    fftw_free(real);
    fftw_free(spec);
  }
  Plan(const Plan&) = delete;
  Plan& operator=(const Plan&) = delete;

  int n;
  double* real;
  fftw_complex* spec;
  fftw_plan r2c;
  fftw_plan c2r;
};

Plan& plan_for(int n) {
  thread_local std::unordered_map<int, std::unique_ptr<Plan>> cache;
  auto& slot = cache[n];
  if (!slot) slot = std::make_unique<Plan>(n);
  return *slot;
}

}  // namespace

std::vector<Complex> forward_transform(const GridSpec& grid, std::span<const double> phys) {
  const int n = grid.n_modes();
  if (static_cast<int>(phys.size()) != n) {
    throw std::invalid_argument("physical array size does not match grid");
  }
  Plan& plan = plan_for(n);
  std::copy(phys.begin(), phys.end(), plan.real);
  fftw_execute(plan.r2c);
  std::vector<Complex> coefs(grid.n_coefs());
  const double inv_n = 1.0 / n;
  for (int k = 0; k < grid.n_coefs(); ++k) {
    // x_0 = -L shifts every mode by a factor (-1)^k.
    const double sign = (k % 2 == 0) ? inv_n : -inv_n;
    coefs[k] = Complex(plan.spec[k][0], plan.spec[k][1]) * sign;
  }
  coefs.back() = Complex(coefs.back().real(), 0.0);
  return coefs;
}

std::vector<double> inverse_transform(const GridSpec& grid, std::span<const Complex> coefs) {
  const int n = grid.n_modes();
  if (static_cast<int>(coefs.size()) != grid.n_coefs()) {
    throw std::invalid_argument("coefficient array size does not match grid");
  }
  Plan& plan = plan_for(n);
  for (int k = 0; k < grid.n_coefs(); ++k) {
    const double sign = (k % 2 == 0) ? 1.0 : -1.0;
    plan.spec[k][0] = sign * coefs[k].real();
    plan.spec[k][1] = sign * coefs[k].imag();
  }
  plan.spec[0][1] = 0.0;
  plan.spec[n / 2][1] = 0.0;
  fftw_execute(plan.c2r);
  return std::vector<double>(plan.real, plan.real + n);
}

SpectralField SpectralField::zero(const GridSpec& grid) {
  return SpectralField(grid, std::vector<double>(grid.n_modes(), 0.0),
                       std::vector<Complex>(grid.n_coefs(), Complex{}));
}

SpectralField SpectralField::from_physical(const GridSpec& grid, std::vector<double> phys) {
  auto coefs = forward_transform(grid, phys);
  return SpectralField(grid, std::move(phys), std::move(coefs));
}

SpectralField SpectralField::from_coefficients(const GridSpec& grid, std::vector<Complex> coefs) {
  if (static_cast<int>(coefs.size()) != grid.n_coefs()) {
    throw std::invalid_argument("coefficient array size does not match grid");
  }
  coefs.front() = Complex(coefs.front().real(), 0.0);
  coefs.back() = Complex(coefs.back().real(), 0.0);
  auto phys = inverse_transform(grid, coefs);
  return SpectralField(grid, std::move(phys), std::move(coefs));
}

SpectralField SpectralField::from_function(const GridSpec& grid,
                                           const std::function<double(double)>& fn) {
  std::vector<double> phys(grid.n_modes());
  for (int j = 0; j < grid.n_modes(); ++j) phys[j] = fn(grid.x(j));
  return from_physical(grid, std::move(phys));
}

Complex SpectralField::coefficient(int k) const {
  const int n = grid_.n_modes();
  if (k < -n / 2 || k >= n / 2) throw std::out_of_range("Fourier index out of range");
  if (k >= 0) return coefs_[k];
  if (k == -n / 2) return coefs_[n / 2];
  return std::conj(coefs_[-k]);
}

double SpectralField::l2_norm() const {
  // Parseval: ||f||^2 = 2L * sum over the full spectrum of |coef_k|^2.
  double sum = std::norm(coefs_.front()) + std::norm(coefs_.back());
  for (std::size_t k = 1; k + 1 < coefs_.size(); ++k) sum += 2.0 * std::norm(coefs_[k]);
  return std::sqrt(grid_.length() * sum);
}

double SpectralField::max_abs() const {
  double m = 0.0;
  for (double v : phys_) m = std::max(m, std::abs(v));
  return m;
}

SpectralField SpectralField::operator-() const { return (-1.0) * (*this); }

namespace {
void require_same_grid(const SpectralField& a, const SpectralField& b) {
  if (!(a.grid() == b.grid())) throw std::invalid_argument("fields live on different grids");
}
}  // namespace

SpectralField operator+(const SpectralField& a, const SpectralField& b) {
  require_same_grid(a, b);
  std::vector<double> phys(a.phys_.size());
  std::vector<Complex> coefs(a.coefs_.size());
  for (std::size_t j = 0; j < phys.size(); ++j) phys[j] = a.phys_[j] + b.phys_[j];
  for (std::size_t k = 0; k < coefs.size(); ++k) coefs[k] = a.coefs_[k] + b.coefs_[k];
  return SpectralField(a.grid_, std::move(phys), std::move(coefs));
}

SpectralField operator-(const SpectralField& a, const SpectralField& b) {
  require_same_grid(a, b);
  std::vector<double> phys(a.phys_.size());
  std::vector<Complex> coefs(a.coefs_.size());
  for (std::size_t j = 0; j < phys.size(); ++j) phys[j] = a.phys_[j] - b.phys_[j];
  for (std::size_t k = 0; k < coefs.size(); ++k) coefs[k] = a.coefs_[k] - b.coefs_[k];
  return SpectralField(a.grid_, std::move(phys), std::move(coefs));
}

SpectralField operator*(double s, const SpectralField& f) {
  std::vector<double> phys(f.phys_.size());
  std::vector<Complex> coefs(f.coefs_.size());
  for (std::size_t j = 0; j < phys.size(); ++j) phys[j] = s * f.phys_[j];
  for (std::size_t k = 0; k < coefs.size(); ++k) coefs[k] = s * f.coefs_[k];
  return SpectralField(f.grid_, std::move(phys), std::move(coefs));
}

double inner(const SpectralField& a, const SpectralField& b) {
  require_same_grid(a, b);
  auto ca = a.coefs();
  auto cb = b.coefs();
  const std::size_t last = ca.size() - 1;
  double sum = (ca[0] * std::conj(cb[0])).real() + (ca[last] * std::conj(cb[last])).real();
  for (std::size_t k = 1; k < last; ++k) sum += 2.0 * (ca[k] * std::conj(cb[k])).real();
  return a.grid().length() * sum;
}

}  // namespace emhd1d
