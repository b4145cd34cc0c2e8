#pragma once

#include <cstdint>
#include <filesystem>
#include <map>
#include <stdexcept>
#include <string>
#include <vector>

#include "emhd1d/solver.hpp"
#include "emhd1d/spectral_field.hpp"

namespace emhd1d {

/// Any problem with a configuration file or override (exit code 2).
class ConfigError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

enum class DatumKind { QuarticSine, GaussianPacket, RandomRough, FromFile };

struct DatumSpec {
  DatumKind kind = DatumKind::GaussianPacket;
  double amplitude = 0.1;
  double width = 1.0;
  double wavenumber = 1.0;
  double s_base = 0.5;
  double norm = 0.05;
  double delta = 0.01;
  std::uint64_t seed = 1;
  std::filesystem::path path;
};

struct RunConfig {
  double half_length = 6.0;
  int n_modes = 256;
  double dealias_fraction = 2.0 / 3.0;
  ModelParams model;
  StepperConfig stepper;
  DatumSpec datum;
  double snapshot_cadence = 0.0;
  std::filesystem::path output_directory = "out";
  std::vector<double> s_list;  ///< empty means the default index 3 - alpha
  double symmetry_lambda = 2.0;
  int lp_trials = 100;
  double blowup_stop_factor = 50.0;
  bool blowup_to_collapse = false;

  GridSpec grid() const { return GridSpec(half_length, n_modes, dealias_fraction); }
  std::vector<double> sobolev_indices() const;

  /// Canonical flat key-value form; parse(to_map()) reproduces the config.
  std::map<std::string, std::string> to_map() const;
  static RunConfig from_map(const std::map<std::string, std::string>& kv);
};

/// Flat "section.key = value" lines; '#' starts a comment.
std::map<std::string, std::string> parse_key_values(const std::string& text);

/// Applies "key=value" to a key-value map.
void apply_override(std::map<std::string, std::string>& kv, const std::string& assignment);

/// Reads a config file, or the "config" object of a manifest.json. Relative
/// datum paths resolve against the file's directory.
std::map<std::string, std::string> read_config_map(const std::filesystem::path& path);

RunConfig load_config(const std::filesystem::path& path);

SpectralField make_datum(const RunConfig& cfg);

std::string format_double(double v);

}  // namespace emhd1d
