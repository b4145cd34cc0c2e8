#pragma once

#include <filesystem>
#include <vector>

#include <json.hpp>

#include "emhd1d/blowup.hpp"
#include "emhd1d/diagnostics.hpp"
#include "emhd1d/identities.hpp"
#include "emhd1d/lp_analysis.hpp"
#include "emhd1d/solver.hpp"

namespace emhd1d {

using Json = nlohmann::ordered_json;

/// t, then H^s, Hdot^{s+alpha/2} and the dissipation integral for every s,
/// then the L2 budget defect.
void write_series_csv(const std::filesystem::path& path, const NormTable& table, double alpha);

/// One row per accepted step: step, t, dt, mean, l2, sup, sup|Lambda B|, sup|Lambda B_x|.
void write_records_csv(const std::filesystem::path& path, const std::vector<StepRecord>& records);

/// Writes <stem>.bin (little-endian float64, one row of N samples per
/// snapshot) and <stem>.json (grid and time index).
void write_snapshots(const std::filesystem::path& dir, const TimeSeries& run,
                     const std::string& stem = "snapshots");

struct SnapshotFile {
  GridSpec grid;
  std::vector<double> times;
  std::vector<std::vector<double>> rows;
};
SnapshotFile read_snapshots(const std::filesystem::path& dir, const std::string& stem = "snapshots");

/// t, X, B_x(X), B_xx(X), w, 1/w
void write_trajectory_csv(const std::filesystem::path& path,
                          const std::vector<TrajectoryState>& states);

void write_json(const std::filesystem::path& path, const Json& j);

Json to_json(const BlowupFit& fit);
Json to_json(const RiccatiReport& r);
Json to_json(const BernsteinReport& r);
Json to_json(const CommutatorReport& r);
Json to_json(const NormEquivalence& r);
Json to_json(const ScalingReport& r);
Json to_json(const IdentityReport& r);

/// Library, FFTW and compiler versions for manifests.
Json version_info();

}  // namespace emhd1d
