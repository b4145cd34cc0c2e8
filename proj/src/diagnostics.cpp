#include "emhd1d/diagnostics.hpp"

#include <cmath>
#include <stdexcept>

#include "emhd1d/operators.hpp"

namespace emhd1d {

namespace {

// 2L sum over the full spectrum of w(xi) Re(f conj g).
template <typename Weight>
double weighted_inner(const SpectralField& f, const SpectralField& g, Weight&& w) {
  const GridSpec& grid = f.grid();
  auto a = f.coefs();
  auto b = g.coefs();
  const int nyq = grid.n_modes() / 2;
  double sum = w(0.0) * (a[0] * std::conj(b[0])).real() +
               w(grid.wavenumber(-nyq)) * (a[nyq] * std::conj(b[nyq])).real();
  for (int k = 1; k < nyq; ++k) sum += 2.0 * w(grid.wavenumber(k)) * (a[k] * std::conj(b[k])).real();
  return grid.length() * sum;
}

double dissipation_norm_sq(const SpectralField& b, double s, double alpha) {
  const double n = sobolev_norm(b, s + 0.5 * alpha);
  return n * n;
}

}  // namespace

NormTable norm_series(const TimeSeries& run, const std::vector<double>& s_list) {
  NormTable table;
  table.s_list = s_list;
  const auto& p = run.params;
  double l2_0 = 0.0;
  double work_integral = 0.0;
  double diss_integral = 0.0;
  double prev_work = 0.0;
  double prev_diss = 0.0;
  std::vector<double> prev_budget(s_list.size(), 0.0);
  std::vector<double> budget(s_list.size(), 0.0);

  for (std::size_t i = 0; i < run.snapshots.size(); ++i) {
    const auto& snap = run.snapshots[i];
    const auto& b = snap.field;
    NormRow row;
    row.t = snap.t;
    for (std::size_t j = 0; j < s_list.size(); ++j) {
      const double s = s_list[j];
      row.hs.push_back(hs_norm(b, s));
      row.dissipative.push_back(sobolev_norm(b, s + 0.5 * p.alpha));
      const double h = hs_norm(b, s + 0.5 * p.alpha);
      const double integrand = h * h;
      if (i > 0) budget[j] += 0.5 * (snap.t - run.snapshots[i - 1].t) * (integrand + prev_budget[j]);
      prev_budget[j] = integrand;
      row.dissipation_integral.push_back(budget[j]);
    }
    const double l2 = b.l2_norm();
    const double work = inner(b, nonlinear_term(b, p));
    const double diss = dissipation_norm_sq(b, 0.0, p.alpha);
    if (i == 0) {
      l2_0 = l2 * l2;
    } else {
      const double dt = snap.t - run.snapshots[i - 1].t;
      work_integral += 0.5 * dt * (work + prev_work);
      diss_integral += 0.5 * dt * (diss + prev_diss);
    }
    prev_work = work;
    prev_diss = diss;
    row.l2_budget_defect = l2 * l2 + 2.0 * p.mu * diss_integral - 2.0 * work_integral - l2_0;
    table.rows.push_back(std::move(row));
  }
  return table;
}

SmoothingFit smoothing_rate_fit(const TimeSeries& run, double s_base, double s_target,
                                double alpha, double t_min) {
  if (!(alpha > 0.0)) throw std::invalid_argument("smoothing_rate_fit: alpha must be positive");
  if (!(t_min > 0.0)) throw std::invalid_argument("smoothing_rate_fit: t_min must be positive");
  SmoothingFit fit;
  fit.expected = (s_target - s_base) / alpha;
  std::vector<double> xs, ys;
  const double t_max = 10.0 * t_min;
  for (const auto& snap : run.snapshots) {
    if (snap.t < t_min * (1.0 - 1e-12) || snap.t > t_max * (1.0 + 1e-12)) continue;
    const double norm = sobolev_norm(snap.field, s_target);
    if (!(norm > 0.0)) continue;
    xs.push_back(std::log(snap.t));
    ys.push_back(std::log(norm));
  }
  fit.points = static_cast<int>(xs.size());
  if (xs.size() < 2) throw std::runtime_error("smoothing_rate_fit: fewer than two snapshots in window");
  const double n = static_cast<double>(xs.size());
  double sx = 0, sy = 0, sxx = 0, sxy = 0;
  for (std::size_t i = 0; i < xs.size(); ++i) {
    sx += xs[i];
    sy += ys[i];
    sxx += xs[i] * xs[i];
    sxy += xs[i] * ys[i];
  }
  const double slope = (n * sxy - sx * sy) / (n * sxx - sx * sx);
  const double intercept = (sy - slope * sx) / n;
  for (std::size_t i = 0; i < xs.size(); ++i) {
    fit.residual = std::max(fit.residual, std::abs(ys[i] - (intercept + slope * xs[i])));
  }
  fit.exponent_est = -slope;
  return fit;
}

FluxDecomposition flux_decomposition(const LittlewoodPaley& lp, const SpectralField& b, double s) {
  FluxDecomposition out;
  const auto lambda_b = frac_laplacian(b, 1.0);
  const auto bx = derivative(b);
  const auto b_lambda_b = product(b, lambda_b);
  const auto lambda_b_bx = product(lambda_b, bx);
  for (int q = -1; q <= lp.q_max(); ++q) {
    const double w = std::pow(LittlewoodPaley::lambda(q), 2.0 * s);
    auto phi_sq = [q](double xi) {
      const double phi = LittlewoodPaley::shell_weight(q, xi);
      return phi * phi;
    };
    const double iq = w * weighted_inner(b_lambda_b, bx, phi_sq);
    const double kq = w * weighted_inner(lambda_b_bx, b, phi_sq);
    out.i_shells.push_back(iq);
    out.k_shells.push_back(kq);
    out.i_total += iq;
    out.k_total += kq;
  }
  return out;
}

double shell_dissipation(const LittlewoodPaley& lp, const SpectralField& b, double s,
                         double alpha) {
  double total = 0.0;
  for (int q = -1; q <= lp.q_max(); ++q) {
    const double w = std::pow(LittlewoodPaley::lambda(q), 2.0 * s);
    total += w * weighted_inner(b, b, [q, alpha](double xi) {
      const double phi = LittlewoodPaley::shell_weight(q, xi);
      return xi == 0.0 ? 0.0 : phi * phi * std::pow(std::abs(xi), alpha);
    });
  }
  return total;
}

double shell_energy_rate(const LittlewoodPaley& lp, const SpectralField& b, const ModelParams& p,
                         double s) {
  if (p.kind != ModelKind::Full) {
    throw std::invalid_argument("shell_energy_rate: the flux identity is for the full model");
  }
  double rate = -2.0 * p.mu * shell_dissipation(lp, b, s, p.alpha);
  if (p.nonlinear) {
    const auto flux = flux_decomposition(lp, b, s);
    rate -= 2.0 * (flux.i_total + 2.0 * flux.k_total);
  }
  return rate;
}

FluxBalance flux_balance_defect(const SpectralField& b0, const ModelParams& p, Scheme scheme,
                                double s, double dt, long n_steps) {
  LittlewoodPaley lp(b0.grid());
  const auto rates = linear_rates(b0.grid(), p);
  auto nl = [&p](const SpectralField& u, double, int) { return nonlinear_term(u, p); };
  FluxBalance out;
  SpectralField b = b0;
  double energy = shell_spectrum(lp, b, s).total;
  double rate = shell_energy_rate(lp, b, p, s);
  for (long n = 0; n < n_steps; ++n) {
    SpectralField next = exponential_step(b, n * dt, dt, rates, scheme, nl);
    const double energy_next = shell_spectrum(lp, next, s).total;
    const double rate_next = shell_energy_rate(lp, next, p, s);
    const double defect = std::abs((energy_next - energy) / dt - 0.5 * (rate + rate_next));
    out.max_defect = std::max(out.max_defect, defect);
    b = std::move(next);
    energy = energy_next;
    rate = rate_next;
    ++out.steps;
  }
  return out;
}

}  // namespace emhd1d
