#include "emhd1d/commands.hpp"

#include <algorithm>
#include <atomic>
#include <cstdio>
#include <cstdlib>
#include <fstream>
#include <sstream>
#include <thread>

#include "emhd1d/blowup.hpp"
#include "emhd1d/diagnostics.hpp"
#include "emhd1d/identities.hpp"
#include "emhd1d/lp_analysis.hpp"
#include "emhd1d/output.hpp"

namespace emhd1d {

namespace {

Json manifest(const std::string& command, const RunConfig& cfg) {
  Json j;
  j["command"] = command;
  Json c = Json::object();
  for (const auto& [k, v] : cfg.to_map()) c[k] = v;
  j["config"] = c;
  j["versions"] = version_info();
  return j;
}

void print_check(std::ostream& log, const std::string& name, double value, double tol, bool ok) {
  char buf[160];
  std::snprintf(buf, sizeof buf, "%-34s %-4s value=%.6g tol=%.3g", name.c_str(), ok ? "PASS" : "FAIL",
                value, tol);
  log << buf << '\n';
}

int dispatch(const std::string& command, const RunConfig& cfg, std::ostream& log) {
  if (command == "run") return cmd_run(cfg, log);
  if (command == "blowup") return cmd_blowup(cfg, log);
  if (command == "symmetry") return cmd_symmetry(cfg, log);
  if (command == "lp") return cmd_lp(cfg, log);
  if (command == "selftest") return cmd_selftest(cfg, log);
  throw ConfigError("unknown command '" + command + "'");
}

}  // namespace

std::map<std::string, std::string> command_defaults(const std::string& command) {
  if (command == "blowup") {
    return {{"grid.L", "6"}, {"grid.N", "4096"}, {"model.kind", "transport"},
            {"model.mu", "1"}, {"model.alpha", "1"}, {"datum.kind", "quartic_sine"}};
  }
  return {};
}

std::vector<std::vector<std::string>> read_sweep(const std::filesystem::path& path) {
  std::ifstream in(path);
  if (!in) throw ConfigError("cannot open sweep file " + path.string());
  std::vector<std::vector<std::string>> jobs;
  std::string line;
  while (std::getline(in, line)) {
    if (const auto hash = line.find('#'); hash != std::string::npos) line.erase(hash);
    std::istringstream words(line);
    std::vector<std::string> job;
    for (std::string w; words >> w;) job.push_back(w);
    if (!job.empty()) jobs.push_back(std::move(job));
  }
  if (jobs.empty()) throw ConfigError("sweep file " + path.string() + " has no jobs");
  return jobs;
}

unsigned sweep_threads(std::size_t jobs) {
  unsigned n = std::max(1u, std::thread::hardware_concurrency());
  if (const char* env = std::getenv("EMHD1D_THREADS"); env && *env) {
    char* end = nullptr;
    const long v = std::strtol(env, &end, 10);
    if (*end != '\0' || v < 1) throw ConfigError("EMHD1D_THREADS must be a positive integer");
    n = static_cast<unsigned>(v);
  }
  return static_cast<unsigned>(std::min<std::size_t>(n, std::max<std::size_t>(jobs, 1)));
}

int cmd_run(const RunConfig& cfg, std::ostream& log) {
  const SpectralField b0 = make_datum(cfg);
  EvolveOptions opts;
  opts.snapshot_cadence = cfg.snapshot_cadence;
  const TimeSeries run = evolve(b0, cfg.model, cfg.stepper, opts);
  const auto s_list = cfg.sobolev_indices();
  const NormTable table = norm_series(run, s_list);

  const auto& dir = cfg.output_directory;
  write_series_csv(dir / "series.csv", table, cfg.model.alpha);
  write_records_csv(dir / "records.csv", run.records);
  write_snapshots(dir, run);
  Json m = manifest("run", cfg);
  m["termination"] = to_string(run.cause);
  m["t_final"] = run.t_final;
  m["steps"] = static_cast<long>(run.records.size()) - 1;
  m["l2_initial"] = run.records.front().l2;
  m["l2_final"] = run.records.back().l2;
  m["outputs"] = {"series.csv", "records.csv", "snapshots.bin", "snapshots.json"};
  write_json(dir / "manifest.json", m);

  log << "run: " << to_string(run.cause) << " at t=" << run.t_final << " after "
      << run.records.size() - 1 << " steps; L2 " << run.records.front().l2 << " -> "
      << run.records.back().l2 << '\n';
  return run.cause == Termination::Completed ? kPass : kNumericalAbort;
}

int cmd_blowup(const RunConfig& cfg_in, std::ostream& log) {
  RunConfig cfg = cfg_in;
  cfg.model = ModelParams{ModelKind::Transport, 1.0, 1.0, true};
  cfg.datum.kind = DatumKind::QuarticSine;
  BlowupOptions opts;
  opts.stepper = cfg.stepper;
  opts.stop_factor = cfg.blowup_stop_factor;
  opts.to_collapse = cfg.blowup_to_collapse;

  const BlowupAcceptance acc = blowup_acceptance(cfg.grid(), opts);
  const auto& f = acc.fine;
  const auto& dir = cfg.output_directory;
  write_trajectory_csv(dir / "trajectory.csv", f.states);

  Json report;
  report["x0"] = f.datum.x0;
  report["w0"] = f.datum.w0;
  report["w0_quadrature"] = f.w0_pv;
  report["predicted_blowup_time"] = f.predicted_t;
  report["fit"] = to_json(f.fit);
  report["slope"] = f.fit.slope;
  report["invariants"] = to_json(f.invariants);
  report["stop_reason"] = f.stop_reason;
  report["steps"] = f.steps;
  report["left_resolved_region"] = f.left_resolved_region;
  report["coarse"] = {{"N", acc.coarse.datum.b0.grid().n_modes()},
                      {"invariants", to_json(acc.coarse.invariants)},
                      {"fit", to_json(acc.coarse.fit)},
                      {"stop_reason", acc.coarse.stop_reason}};
  Json checks = Json::array();
  for (const auto& c : acc.checks) {
    checks.push_back({{"name", c.name}, {"value", c.value}, {"tolerance", c.tolerance},
                      {"passed", c.passed}});
    print_check(log, c.name, c.value, c.tolerance, c.passed);
  }
  report["checks"] = checks;
  report["passed"] = acc.passed();
  write_json(dir / "blowup_report.json", report);

  Json m = manifest("blowup", cfg);
  m["stop_reason"] = f.stop_reason;
  m["outputs"] = {"blowup_report.json", "trajectory.csv"};
  write_json(dir / "manifest.json", m);
  log << "blowup: w0=" << f.datum.w0 << " T=1/w0=" << f.predicted_t << " T_est=" << f.fit.t_est
      << " (" << f.stop_reason << ")\n";
  return acc.passed() ? kPass : kToleranceFailure;
}

int cmd_symmetry(const RunConfig& cfg, std::ostream& log) {
  constexpr double kTolerance = 1e-6;
  const SpectralField b0 = make_datum(cfg);
  const ScalingReport r = scaling_symmetry_check(b0, cfg.model, cfg.stepper, cfg.symmetry_lambda);
  const bool completed =
      r.cause == Termination::Completed && r.scaled_cause == Termination::Completed;
  const bool ok = completed && r.max_mismatch <= kTolerance;
  Json report = to_json(r);
  report["alpha"] = cfg.model.alpha;
  report["tolerance"] = kTolerance;
  report["passed"] = ok;
  const auto& dir = cfg.output_directory;
  write_json(dir / "symmetry_report.json", report);
  Json m = manifest("symmetry", cfg);
  m["outputs"] = {"symmetry_report.json"};
  write_json(dir / "manifest.json", m);
  print_check(log, "scaling_mismatch", r.max_mismatch, kTolerance, ok);
  if (!completed) return kNumericalAbort;
  return ok ? kPass : kToleranceFailure;
}

int cmd_lp(const RunConfig& cfg, std::ostream& log) {
  const GridSpec grid = cfg.grid();
  const std::uint64_t seed = cfg.datum.seed;
  const BernsteinReport bern = bernstein_check(grid, cfg.lp_trials, seed);
  const CommutatorReport comm = commutator_check(grid, cfg.lp_trials, seed);
  Json equivalence = Json::array();
  for (double s : {0.0, 0.5, 1.5}) {
    equivalence.push_back(to_json(norm_equivalence(grid, s, cfg.lp_trials, seed)));
  }
  Json report;
  report["N"] = grid.n_modes();
  report["bernstein"] = to_json(bern);
  report["commutator"] = to_json(comm);
  report["norm_equivalence"] = equivalence;
  report["passed"] = bern.passed() && comm.passed();
  const auto& dir = cfg.output_directory;
  write_json(dir / "lp_report.json", report);
  Json m = manifest("lp", cfg);
  m["outputs"] = {"lp_report.json"};
  write_json(dir / "manifest.json", m);
  print_check(log, "bernstein_derivative_constant", bern.derivative_constant, bern.bound,
              bern.derivative_constant <= bern.bound);
  print_check(log, "bernstein_sup_constant", bern.sup_constant, bern.bound,
              bern.sup_constant <= bern.bound);
  print_check(log, "commutator_shell_ratio", comm.shell_l2_ratio, comm.bound,
              comm.shell_l2_ratio <= comm.bound);
  print_check(log, "commutator_fractional_ratio", comm.fractional_max_ratio, comm.bound,
              comm.fractional_max_ratio <= comm.bound);
  return report["passed"].get<bool>() ? kPass : kToleranceFailure;
}

int cmd_selftest(const RunConfig& cfg, std::ostream& log) {
  const GridSpec grid(cfg.half_length, 256, cfg.dealias_fraction);
  const IdentityReport r = operator_identity_suite(grid, 100, cfg.datum.seed);
  for (const auto& c : r.checks) print_check(log, c.name, c.max_error, c.tolerance, c.passed());
  Json report = to_json(r);
  report["N"] = grid.n_modes();
  write_json(cfg.output_directory / "selftest_report.json", report);
  return r.passed() ? kPass : kToleranceFailure;
}

int run_command(const CommandOptions& opts, std::ostream& log) {
  try {
    std::map<std::string, std::string> kv = command_defaults(opts.command);
    if (opts.config) {
      for (auto& [k, v] : read_config_map(*opts.config)) kv[k] = v;
    } else if (opts.command != "selftest") {
      throw ConfigError("--config is required for '" + opts.command + "'");
    }
    if (opts.seed) kv["datum.seed"] = std::to_string(*opts.seed);
    if (opts.out) kv["outputs.directory"] = opts.out->string();
    if (opts.lambda) kv["symmetry.lambda"] = format_double(*opts.lambda);

    if (!opts.sweep) return dispatch(opts.command, RunConfig::from_map(kv), log);

    const auto jobs = read_sweep(*opts.sweep);
    const std::filesystem::path base = RunConfig::from_map(kv).output_directory;
    std::vector<RunConfig> configs;
    for (std::size_t i = 0; i < jobs.size(); ++i) {
      auto job_kv = kv;
      for (const auto& o : jobs[i]) apply_override(job_kv, o);
      char name[32];
      std::snprintf(name, sizeof name, "job_%03zu", i);
      job_kv["outputs.directory"] = (base / name).string();
      configs.push_back(RunConfig::from_map(job_kv));
    }
    std::vector<int> codes(jobs.size(), kPass);
    std::vector<std::string> logs(jobs.size());
    std::atomic<std::size_t> next{0};
    auto worker = [&] {
      for (std::size_t i; (i = next++) < configs.size();) {
        std::ostringstream job_log;
        try {
          codes[i] = dispatch(opts.command, configs[i], job_log);
        } catch (const ConfigError& e) {
          job_log << "config error: " << e.what() << '\n';
          codes[i] = kConfigError;
        } catch (const std::exception& e) {
          job_log << "numerical error: " << e.what() << '\n';
          codes[i] = kNumericalAbort;
        }
        logs[i] = job_log.str();
      }
    };
    std::vector<std::thread> pool;
    const unsigned n_threads = sweep_threads(configs.size());
    for (unsigned t = 0; t < n_threads; ++t) pool.emplace_back(worker);
    for (auto& t : pool) t.join();

    Json summary = Json::array();
    for (std::size_t i = 0; i < configs.size(); ++i) {
      log << "[" << configs[i].output_directory.filename().string() << "] " << logs[i];
      Json overrides = Json::array();
      for (const auto& o : jobs[i]) overrides.push_back(o);
      summary.push_back({{"directory", configs[i].output_directory.filename().string()},
                         {"overrides", overrides},
                         {"exit_code", codes[i]}});
    }
    write_json(base / "sweep_summary.json", Json{{"command", opts.command}, {"jobs", summary}});
    return *std::max_element(codes.begin(), codes.end());
  } catch (const ConfigError& e) {
    log << "config error: " << e.what() << '\n';
    return kConfigError;
  } catch (const CflCollapse& e) {
    log << "numerical abort: " << e.what() << '\n';
    return kNumericalAbort;
  } catch (const std::exception& e) {
    log << "numerical abort: " << e.what() << '\n';
    return kNumericalAbort;
  }
}

}  // namespace emhd1d
