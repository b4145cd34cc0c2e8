#include "emhd1d/output.hpp"

#include <fftw3.h>

#include <bit>
#include <cmath>
#include <cstdio>
#include <fstream>
#include <stdexcept>

#include "emhd1d/config.hpp"

#ifndef EMHD1D_VERSION
#define EMHD1D_VERSION "0.0.0"
#endif

namespace emhd1d {

namespace {

std::ofstream open_out(const std::filesystem::path& path, std::ios::openmode mode = std::ios::out) {
  if (path.has_parent_path()) std::filesystem::create_directories(path.parent_path());
  std::ofstream out(path, mode);
  if (!out) throw std::runtime_error("cannot write " + path.string());
  return out;
}

std::string label(double v) {
  char buf[32];
  std::snprintf(buf, sizeof buf, "%g", v);
  return buf;
}

// nlohmann emits null for non-finite values; keep them readable instead.
Json num(double v) {
  if (std::isfinite(v)) return v;
  return std::isnan(v) ? "nan" : (v > 0 ? "inf" : "-inf");
}

}  // namespace

void write_series_csv(const std::filesystem::path& path, const NormTable& table, double alpha) {
  auto out = open_out(path);
  out << "t";
  for (double s : table.s_list) {
    out << ",H^" << label(s) << ",Hdot^" << label(s + 0.5 * alpha) << ",dissipation_int_H^"
        << label(s + 0.5 * alpha);
  }
  out << ",l2_budget_defect\n";
  for (const auto& row : table.rows) {
    out << format_double(row.t);
    for (std::size_t j = 0; j < table.s_list.size(); ++j) {
      out << ',' << format_double(row.hs[j]) << ',' << format_double(row.dissipative[j]) << ','
          << format_double(row.dissipation_integral[j]);
    }
    out << ',' << format_double(row.l2_budget_defect) << '\n';
  }
}

void write_records_csv(const std::filesystem::path& path, const std::vector<StepRecord>& records) {
  auto out = open_out(path);
  out << "step,t,dt,mean,l2,sup,sup_lambda_b,sup_lambda_bx\n";
  for (const auto& r : records) {
    out << r.step << ',' << format_double(r.t) << ',' << format_double(r.dt) << ','
        << format_double(r.mean) << ',' << format_double(r.l2) << ',' << format_double(r.sup)
        << ',' << format_double(r.lambda_b_sup) << ',' << format_double(r.lambda_bx_sup) << '\n';
  }
}

void write_snapshots(const std::filesystem::path& dir, const TimeSeries& run,
                     const std::string& stem) {
  static_assert(std::endian::native == std::endian::little, "little-endian host required");
  auto bin = open_out(dir / (stem + ".bin"), std::ios::out | std::ios::binary);
  Json times = Json::array();
  for (const auto& snap : run.snapshots) {
    const auto phys = snap.field.phys();
    bin.write(reinterpret_cast<const char*>(phys.data()),
              static_cast<std::streamsize>(phys.size() * sizeof(double)));
    times.push_back(snap.t);
  }
  Json side;
  side["format"] = "float64 little-endian, row-major, one row of N grid samples per time";
  side["file"] = stem + ".bin";
  side["grid"] = {{"L", run.grid.half_length()},
                  {"N", run.grid.n_modes()},
                  {"dealias", run.grid.dealias_fraction()},
                  {"x0", run.grid.x(0)},
                  {"dx", run.grid.dx()}};
  side["count"] = run.snapshots.size();
  side["times"] = times;
  write_json(dir / (stem + ".json"), side);
}

SnapshotFile read_snapshots(const std::filesystem::path& dir, const std::string& stem) {
  std::ifstream js(dir / (stem + ".json"));
  if (!js) throw std::runtime_error("cannot read " + (dir / (stem + ".json")).string());
  const Json side = Json::parse(js);
  SnapshotFile out{GridSpec(side["grid"]["L"].get<double>(), side["grid"]["N"].get<int>(),
                            side["grid"]["dealias"].get<double>()),
                   side["times"].get<std::vector<double>>(),
                   {}};
  std::ifstream bin(dir / side["file"].get<std::string>(), std::ios::binary);
  if (!bin) throw std::runtime_error("cannot read snapshot data");
  const auto n = static_cast<std::size_t>(out.grid.n_modes());
  for (std::size_t i = 0; i < out.times.size(); ++i) {
    std::vector<double> row(n);
    bin.read(reinterpret_cast<char*>(row.data()), static_cast<std::streamsize>(n * sizeof(double)));
    if (!bin) throw std::runtime_error("snapshot data is shorter than its index");
    out.rows.push_back(std::move(row));
  }
  return out;
}

void write_trajectory_csv(const std::filesystem::path& path,
                          const std::vector<TrajectoryState>& states) {
  auto out = open_out(path);
  out << "t,X,bx,bxx,w,inv_w\n";
  for (const auto& s : states) {
    out << format_double(s.t) << ',' << format_double(s.x) << ',' << format_double(s.bx) << ','
        << format_double(s.bxx) << ',' << format_double(s.w) << ',' << format_double(1.0 / s.w)
        << '\n';
  }
}

void write_json(const std::filesystem::path& path, const Json& j) {
  auto out = open_out(path);
  out << j.dump(2) << '\n';
}

Json to_json(const BlowupFit& fit) {
  Json j;
  j["valid"] = fit.valid;
  if (!fit.error.empty()) j["error"] = fit.error;
  j["slope"] = num(fit.slope);
  j["intercept"] = num(fit.intercept);
  j["t_est"] = num(fit.t_est);
  j["residual"] = num(fit.residual);
  j["points"] = fit.points;
  return j;
}

Json to_json(const RiccatiReport& r) {
  return Json{{"t_max", num(r.t_max)},
              {"bx_defect", num(r.bx_defect)},
              {"bxx_defect", num(r.bxx_defect)},
              {"riccati_defect", num(r.riccati_defect)},
              {"riccati_relative", num(r.riccati_relative)},
              {"points", r.points}};
}

Json to_json(const BernsteinReport& r) {
  return Json{{"trials", r.trials},
              {"derivative_constant", num(r.derivative_constant)},
              {"sup_constant", num(r.sup_constant)},
              {"bound", r.bound},
              {"passed", r.passed()}};
}

Json to_json(const CommutatorReport& r) {
  return Json{{"trials", r.trials},
              {"epsilon", r.epsilon},
              {"shell_max_ratio", num(r.shell_max_ratio)},
              {"shell_l2_ratio", num(r.shell_l2_ratio)},
              {"fractional_max_ratio", num(r.fractional_max_ratio)},
              {"bound", r.bound},
              {"passed", r.passed()}};
}

Json to_json(const NormEquivalence& r) {
  return Json{{"s", r.s}, {"N", r.n_modes}, {"c", num(r.lower)}, {"C", num(r.upper)}};
}

Json to_json(const ScalingReport& r) {
  Json times = Json::array();
  Json mism = Json::array();
  for (double t : r.times) times.push_back(t);
  for (double m : r.mismatch) mism.push_back(num(m));
  return Json{{"lambda", r.lambda},
              {"times", times},
              {"mismatch", mism},
              {"max_mismatch", num(r.max_mismatch)},
              {"termination", to_string(r.cause)},
              {"scaled_termination", to_string(r.scaled_cause)}};
}

Json to_json(const IdentityReport& r) {
  Json checks = Json::array();
  for (const auto& c : r.checks) {
    checks.push_back(Json{{"name", c.name},
                          {"max_error", num(c.max_error)},
                          {"tolerance", c.tolerance},
                          {"passed", c.passed()}});
  }
  return Json{{"trials", r.trials}, {"checks", checks}, {"passed", r.passed()}};
}

Json version_info() {
  return Json{{"emhd1d", EMHD1D_VERSION}, {"fftw", std::string(fftw_version)}, {"compiler", std::string(__VERSION__)}};
}

}  // namespace emhd1d
