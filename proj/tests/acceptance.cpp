// Acceptance criteria, one PASS/FAIL line each. Exit status is nonzero when any fails.
#include <chrono>
#include <cstdio>
#include <numbers>
#include <string>
#include <tuple>

#include "emhd1d/blowup.hpp"
#include "emhd1d/datum.hpp"
#include "emhd1d/diagnostics.hpp"
#include "emhd1d/identities.hpp"
#include "emhd1d/lp_analysis.hpp"
#include "emhd1d/operators.hpp"
#include "emhd1d/solver.hpp"

using namespace emhd1d;
using std::numbers::pi;

namespace {

int failures = 0;

void report(bool ok, const std::string& id, const std::string& text) {
  std::printf("%s  [%s] %s\n", ok ? "PASS" : "FAIL", id.c_str(), text.c_str());
  std::fflush(stdout);
  if (!ok) ++failures;
}

template <typename... Args>
std::string fmt(const char* f, Args... args) {
  char buf[512];
  std::snprintf(buf, sizeof buf, f, args...);
  return buf;
}

double seconds_since(std::chrono::steady_clock::time_point t0) {
  return std::chrono::duration<double>(std::chrono::steady_clock::now() - t0).count();
}

StepperConfig fixed(double dt, double t_end) {
  StepperConfig c;
  c.dt_init = dt;
  c.t_end = t_end;
  c.adaptive = false;
  return c;
}

std::vector<double> log_times(double t0, double t1, int n) {
  std::vector<double> t;
  for (int i = 0; i < n; ++i) t.push_back(t0 * std::pow(t1 / t0, i / (n - 1.0)));
  return t;
}

void blowup_criteria() {
  const auto t0 = std::chrono::steady_clock::now();
  const BlowupAcceptance acc = blowup_acceptance(GridSpec(6.0, 4096), BlowupOptions{});
  const double elapsed = seconds_since(t0);
  auto check = [&](const std::string& name) {
    for (const auto& c : acc.checks) {
      if (c.name == name) return c;
    }
    return ToleranceCheck{name, 0.0, 0.0, false};
  };
  const auto slope = check("slope");
  const auto resid = check("fit_residual");
  const auto terr = check("blowup_time_relative_error");
  const auto w0 = check("w0_quadrature_relative_error");
  const bool fast = elapsed < 120.0;
  report(slope.passed && resid.passed && terr.passed && w0.passed && fast, "1",
         fmt("blowup time, N=4096 L=6: slope %.6f (|+1| <= 0.01), residual %.2e (<= 1e-3), "
             "|T_est - 1/w0| w0 = %.2e (<= 2e-2), w0 %.10f vs quadrature %.10f rel %.2e (<= 1e-4), "
             "%.1f s for N and N/2 (< 120 s)",
             slope.value, resid.value, terr.value, acc.fine.datum.w0, acc.fine.w0_pv, w0.value,
             elapsed));

  const auto bx = check("bx_defect");
  const auto bxx = check("bxx_defect");
  const auto rbx = check("bx_defect_refinement_ratio");
  const auto rbxx = check("bxx_defect_refinement_ratio");
  report(bx.passed && bxx.passed && rbx.passed && rbxx.passed, "2",
         fmt("trajectory invariants for t <= 0.8/w0: |B_x(X) - 1| %.2e, |B_xx(X)|/sup|B_xx| %.2e "
             "(both <= 1e-4); N/2 -> N shrink %.1fx and %.2gx (>= 4, or both at the 1e-10 "
             "rounding floor: %.1e, %.1e)",
             bx.value, bxx.value, rbx.value, rbxx.value, acc.coarse.invariants.bxx_defect,
             acc.fine.invariants.bxx_defect));
}

void identity_criterion() {
  const auto t0 = std::chrono::steady_clock::now();
  const IdentityReport r = operator_identity_suite(GridSpec(pi, 256), 100, 20240101);
  const double elapsed = seconds_since(t0);
  const char* names[] = {"hilbert_squared", "lambda_hilbert_dx", "riesz_inverse", "cotlar"};
  bool ok = elapsed < 10.0;
  std::string detail;
  for (const char* n : names) {
    const auto& c = r.check(n);
    ok = ok && c.max_error <= 1e-10;
    detail += fmt("%s %.1e, ", n, c.max_error);
  }
  ok = ok && r.passed();
  report(ok, "3", fmt("operator identities on 100 random fields, N=256: %s(each <= 1e-10); "
                      "all %zu suite checks %s; %.2f s (< 10 s)",
                      detail.c_str(), r.checks.size(), r.passed() ? "pass" : "fail", elapsed));
}

void scaling_criterion() {
  const GridSpec g(8.0, 256);
  const auto b0 = dealias(gaussian_packet(g, 0.1, 0.8, 1.5));
  double worst = 0.0;
  std::string detail;
  for (double alpha : {1.0, 2.0}) {
    StepperConfig c;
    c.t_end = 0.5;
    c.dt_init = 0.01;
    const auto r = scaling_symmetry_check(b0, ModelParams{ModelKind::Full, 1.0, alpha, true}, c, 2.0);
    worst = std::max(worst, r.max_mismatch);
    detail += fmt("alpha=%g: %.2e; ", alpha, r.max_mismatch);
  }
  report(worst <= 1e-6, "4",
         fmt("scaling symmetry, lambda=2, full model, 4 matched times to t=0.5: %s(<= 1e-6)",
             detail.c_str()));
}

void flux_criterion() {
  const GridSpec g(pi, 128);
  const auto b0 = dealias(gaussian_packet(g, 0.5, 0.7, 2.0));
  const ModelParams p{ModelKind::Full, 1.0, 2.0, true};
  const auto a = flux_balance_defect(b0, p, Scheme::IFRK4, 1.0, 2e-3, 25);
  const auto b = flux_balance_defect(b0, p, Scheme::IFRK4, 1.0, 1e-3, 50);
  const double ratio = a.max_defect / b.max_defect;
  report(ratio >= 3.5 && ratio <= 4.5, "5",
         fmt("shell-energy balance, s=1: defect %.3e at dt=2e-3, %.3e at dt=1e-3, ratio %.3f "
             "(in [3.5, 4.5])",
             a.max_defect, b.max_defect, ratio));
}

void smoothing_criterion() {
  const GridSpec g(4 * pi, 16384);
  const double t_min = 1e-3;
  bool ok = true;
  std::string detail;
  for (auto [alpha, sb, st] : {std::tuple{2.0, 0.5, 1.5}, std::tuple{1.5, 1.0, 1.75}}) {
    EvolveOptions o;
    o.output_times = log_times(t_min, 10 * t_min, 11);
    // Linear semigroup on a pure power tail: exact law.
    const auto lin0 = random_rough(g, sb, 0.05, 1, 0.0);
    const auto lin = evolve(lin0, ModelParams{ModelKind::Full, 1.0, alpha, false}, fixed(1e-2, 1e-2), o);
    const auto fl = smoothing_rate_fit(lin, sb, st, alpha, t_min);
    // Nonlinear run from the rough datum with delta = 0.01.
    const auto nl0 = random_rough(g, sb, 0.05, 1, 0.01);
    StepperConfig c;
    c.dt_init = 1e-4;
    c.t_end = 10 * t_min;
    const auto nl = evolve(nl0, ModelParams{ModelKind::Full, 1.0, alpha, true}, c, o);
    const auto fn = smoothing_rate_fit(nl, sb, st, alpha, t_min);
    const bool this_ok = nl.cause == Termination::Completed &&
                         std::abs(fl.exponent_est - fl.expected) <= 1e-3 &&
                         std::abs(fn.exponent_est - fn.expected) <= 0.2;
    ok = ok && this_ok;
    detail += fmt("(alpha %g, %g -> %g) expected %.4f, linear %.6f, nonlinear %.4f; ", alpha, sb,
                  st, fl.expected, fl.exponent_est, fn.exponent_est);
  }
  report(ok, "6",
         fmt("smoothing exponents on [1e-3, 1e-2]: %s(linear within 1e-3, nonlinear within 0.2)",
             detail.c_str()));
}

void picard_criterion() {
  const GridSpec g(pi, 128);
  auto b0 = dealias(gaussian_packet(g, 1.0, 0.8, 1.5));
  b0 = (0.1 / hs_norm(b0, 2.0)) * b0;
  const ModelParams p{ModelKind::Full, 1.0, 2.0, true};
  const double dt = 1e-3;
  const auto res = picard_solve(b0, p, fixed(dt, 0.1), 30, 1e-13, 1.0);
  const auto ref = evolve(b0, p, fixed(dt / 4, 0.1)).snapshots.back().field;
  const double final_gap = (res.iterates.back() - ref).l2_norm();
  double worst_ratio = 0.0;
  for (std::size_t k = 2; k < res.gaps.size(); ++k) {
    worst_ratio = std::max(worst_ratio, res.gaps[k] / res.gaps[k - 1]);
  }
  const bool geometric = res.gaps.size() >= 3 && worst_ratio < 0.5;
  report(res.converged && geometric && final_gap <= 1e-6, "7",
         fmt("Picard, ||B0||_H2 = 0.1, alpha=2, mu=1, t=0.1: %zu iterates, worst gap ratio %.3f "
             "(< 0.5), final iterate vs evolve at dt/4: %.2e (<= 1e-6)",
             res.gaps.size(), worst_ratio, final_gap));
}

}  // namespace

int main() {
  blowup_criteria();
  identity_criterion();
  scaling_criterion();
  flux_criterion();
  smoothing_criterion();
  picard_criterion();
  std::printf("NOTE  [8] existence-time constants and the endpoint space are not checked numerically; "
              "criteria 5-7 stand in for them, and the Bernstein and commutator harnesses report "
              "bounded ratios only (see `emhd1d lp`)\n");
  std::printf("%d criteria failed\n", failures);
  return failures == 0 ? 0 : 1;
}
