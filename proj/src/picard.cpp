#include <algorithm>
#include <array>
#include <cmath>

#include "emhd1d/lp_analysis.hpp"
#include "emhd1d/operators.hpp"
#include "emhd1d/solver.hpp"

namespace emhd1d {

namespace {

using StageFields = std::array<SpectralField, 4>;

struct Iterate {
  std::vector<StageFields> stages;  // per step, the stage inputs of the integrator
  std::vector<SpectralField> states;  // at step times, including t = 0
};

}  // namespace

PicardResult picard_solve(const SpectralField& b0, const ModelParams& p, const StepperConfig& cfg,
                          int k_max, double tol, double s) {
  p.validate();
  cfg.validate();
  if (p.kind != ModelKind::Full) throw std::invalid_argument("picard_solve: full model only");
  if (!(p.mu > 0.0)) throw std::invalid_argument("picard_solve: requires mu > 0");
  if (k_max < 1) throw std::invalid_argument("picard_solve: k_max must be >= 1");

  const GridSpec& grid = b0.grid();
  const auto rates = linear_rates(grid, p);
  const long n_steps = static_cast<long>(std::ceil(cfg.t_end / cfg.dt_init - 1e-9));
  std::vector<double> times(n_steps + 1);
  for (long i = 0; i <= n_steps; ++i) times[i] = std::min(cfg.t_end, i * cfg.dt_init);

  PicardResult result;
  result.sobolev_index = s;
  Iterate previous;  // B^{-1} = 0: empty stage list
  for (int k = 0; k < k_max; ++k) {
    Iterate current;
    current.states.push_back(b0);
    SpectralField u = b0;
    for (long i = 0; i < n_steps; ++i) {
      const double t = times[i];
      const double dt = times[i + 1] - t;
      StageFields recorded{u, u, u, u};
      const StageFields* frozen = previous.stages.empty() ? nullptr : &previous.stages[i];
      auto nl = [&](const SpectralField& v, double, int stage) -> SpectralField {
        recorded[stage] = v;
        if (!p.nonlinear || frozen == nullptr) return SpectralField::zero(grid);
        const SpectralField& w = (*frozen)[stage];
        // -(w d_x J[v] - J[w] d_x v) with J = -Lambda: w Lambda v_x - Lambda w v_x
        return product(w, frac_laplacian(derivative(v), 1.0)) -
               product(frac_laplacian(w, 1.0), derivative(v));
      };
      u = exponential_step(u, t, dt, rates, cfg.scheme, nl);
      current.stages.push_back(recorded);
      current.states.push_back(u);
    }

    double gap = 0.0;
    for (std::size_t i = 0; i < current.states.size(); ++i) {
      const double d = previous.states.empty()
                           ? hs_norm(current.states[i], s)
                           : hs_norm(current.states[i] - previous.states[i], s);
      gap = std::max(gap, d);
    }
    result.iterates.push_back(current.states.back());
    result.gaps.push_back(gap);
    previous = std::move(current);
    if (k > 0 && gap < tol) {
      result.converged = true;
      break;
    }
  }
  return result;
}

}  // namespace emhd1d
