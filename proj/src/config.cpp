#include "emhd1d/config.hpp"

#include <json.hpp>

#include <charconv>
#include <cstdio>
#include <fstream>
#include <set>
#include <sstream>

#include "emhd1d/datum.hpp"

namespace emhd1d {

namespace {

std::string trim(const std::string& s) {
  const auto first = s.find_first_not_of(" \t\r\n");
  if (first == std::string::npos) return {};
  const auto last = s.find_last_not_of(" \t\r\n");
  return s.substr(first, last - first + 1);
}

const std::set<std::string>& known_keys() {
  static const std::set<std::string> keys = {
      "grid.L", "grid.N", "grid.dealias",
      "model.kind", "model.mu", "model.alpha", "model.nonlinear",
      "stepper.scheme", "stepper.dt_init", "stepper.cfl_safety", "stepper.t_end",
      "stepper.max_steps", "stepper.blowup_threshold", "stepper.adaptive",
      "datum.kind", "datum.amplitude", "datum.width", "datum.wavenumber", "datum.s_base",
      "datum.norm", "datum.delta", "datum.seed", "datum.path",
      "outputs.snapshot_cadence", "outputs.directory",
      "diagnostics.s_list",
      "symmetry.lambda", "lp.trials", "blowup.stop_factor", "blowup.to_collapse"};
  return keys;
}

double to_double(const std::string& key, const std::string& v) {
  try {
    std::size_t pos = 0;
    const double d = std::stod(v, &pos);
    if (pos != v.size()) throw std::invalid_argument("trailing characters");
    return d;
  } catch (const std::exception&) {
    throw ConfigError("config key " + key + ": expected a number, got '" + v + "'");
  }
}

long long to_int(const std::string& key, const std::string& v) {
  long long out = 0;
  const auto res = std::from_chars(v.data(), v.data() + v.size(), out);
  if (res.ec != std::errc{} || res.ptr != v.data() + v.size()) {
    throw ConfigError("config key " + key + ": expected an integer, got '" + v + "'");
  }
  return out;
}

std::uint64_t to_u64(const std::string& key, const std::string& v) {
  std::uint64_t out = 0;
  const auto res = std::from_chars(v.data(), v.data() + v.size(), out);
  if (res.ec != std::errc{} || res.ptr != v.data() + v.size()) {
    throw ConfigError("config key " + key + ": expected an unsigned integer, got '" + v + "'");
  }
  return out;
}

bool to_bool(const std::string& key, const std::string& v) {
  if (v == "true" || v == "1" || v == "yes") return true;
  if (v == "false" || v == "0" || v == "no") return false;
  throw ConfigError("config key " + key + ": expected true/false, got '" + v + "'");
}

std::string datum_kind_name(DatumKind k) {
  switch (k) {
    case DatumKind::QuarticSine: return "quartic_sine";
    case DatumKind::GaussianPacket: return "gaussian_packet";
    case DatumKind::RandomRough: return "random_rough";
    case DatumKind::FromFile: return "from_file";
  }
  return "gaussian_packet";
}

DatumKind parse_datum_kind(const std::string& v) {
  if (v == "quartic_sine") return DatumKind::QuarticSine;
  if (v == "gaussian_packet") return DatumKind::GaussianPacket;
  if (v == "random_rough") return DatumKind::RandomRough;
  if (v == "from_file") return DatumKind::FromFile;
  throw ConfigError("datum.kind: unknown datum '" + v + "'");
}

}  // namespace

std::string format_double(double v) {
  char buf[32];
  std::snprintf(buf, sizeof buf, "%.17g", v);
  return buf;
}

std::map<std::string, std::string> parse_key_values(const std::string& text) {
  std::map<std::string, std::string> kv;
  std::istringstream in(text);
  std::string line;
  int lineno = 0;
  while (std::getline(in, line)) {
    ++lineno;
    if (const auto hash = line.find('#'); hash != std::string::npos) line.erase(hash);
    line = trim(line);
    if (line.empty()) continue;
    const auto eq = line.find('=');
    if (eq == std::string::npos) {
      throw ConfigError("config line " + std::to_string(lineno) + ": expected key = value");
    }
    const std::string key = trim(line.substr(0, eq));
    if (!known_keys().contains(key)) {
      throw ConfigError("config line " + std::to_string(lineno) + ": unknown key '" + key + "'");
    }
    kv[key] = trim(line.substr(eq + 1));
  }
  return kv;
}

void apply_override(std::map<std::string, std::string>& kv, const std::string& assignment) {
  auto parsed = parse_key_values(assignment);
  for (auto& [k, v] : parsed) kv[k] = v;
}

std::map<std::string, std::string> read_config_map(const std::filesystem::path& path) {
  std::ifstream in(path);
  if (!in) throw ConfigError("cannot open config file " + path.string());
  std::stringstream buf;
  buf << in.rdbuf();
  const std::string text = buf.str();
  std::map<std::string, std::string> kv;
  if (const auto first = text.find_first_not_of(" \t\r\n");
      first != std::string::npos && text[first] == '{') {
    nlohmann::json j;
    try {
      j = nlohmann::json::parse(text);
    } catch (const nlohmann::json::exception& e) {
      throw ConfigError("manifest " + path.string() + ": " + e.what());
    }
    if (!j.contains("config") || !j["config"].is_object()) {
      throw ConfigError("manifest " + path.string() + " has no config object");
    }
    for (auto& [k, v] : j["config"].items()) {
      if (!known_keys().contains(k)) throw ConfigError("manifest: unknown key '" + k + "'");
      kv[k] = v.get<std::string>();
    }
  } else {
    kv = parse_key_values(text);
  }
  if (auto it = kv.find("datum.path"); it != kv.end() && !it->second.empty()) {
    std::filesystem::path p(it->second);
    if (p.is_relative()) it->second = (path.parent_path() / p).lexically_normal().string();
  }
  return kv;
}

RunConfig RunConfig::from_map(const std::map<std::string, std::string>& kv) {
  RunConfig c;
  auto get = [&](const std::string& key) -> const std::string* {
    auto it = kv.find(key);
    return it == kv.end() ? nullptr : &it->second;
  };
  for (const auto& [k, v] : kv) {
    if (!known_keys().contains(k)) throw ConfigError("unknown key '" + k + "'");
  }
  if (auto v = get("grid.L")) c.half_length = to_double("grid.L", *v);
  if (auto v = get("grid.N")) c.n_modes = static_cast<int>(to_int("grid.N", *v));
  if (auto v = get("grid.dealias")) c.dealias_fraction = to_double("grid.dealias", *v);
  if (auto v = get("model.kind")) {
    try {
      c.model.kind = parse_model_kind(*v);
    } catch (const std::invalid_argument& e) {
      throw ConfigError(std::string("model.kind: ") + e.what());
    }
  }
  if (auto v = get("model.mu")) c.model.mu = to_double("model.mu", *v);
  if (auto v = get("model.alpha")) c.model.alpha = to_double("model.alpha", *v);
  if (auto v = get("model.nonlinear")) c.model.nonlinear = to_bool("model.nonlinear", *v);
  if (auto v = get("stepper.scheme")) {
    try {
      c.stepper.scheme = parse_scheme(*v);
    } catch (const std::invalid_argument& e) {
      throw ConfigError(std::string("stepper.scheme: ") + e.what());
    }
  }
  if (auto v = get("stepper.dt_init")) c.stepper.dt_init = to_double("stepper.dt_init", *v);
  if (auto v = get("stepper.cfl_safety")) c.stepper.cfl_safety = to_double("stepper.cfl_safety", *v);
  if (auto v = get("stepper.t_end")) c.stepper.t_end = to_double("stepper.t_end", *v);
  if (auto v = get("stepper.max_steps")) c.stepper.max_steps = to_int("stepper.max_steps", *v);
  if (auto v = get("stepper.blowup_threshold")) {
    c.stepper.blowup_threshold = to_double("stepper.blowup_threshold", *v);
  }
  if (auto v = get("stepper.adaptive")) c.stepper.adaptive = to_bool("stepper.adaptive", *v);
  if (auto v = get("datum.kind")) c.datum.kind = parse_datum_kind(*v);
  if (auto v = get("datum.amplitude")) c.datum.amplitude = to_double("datum.amplitude", *v);
  if (auto v = get("datum.width")) c.datum.width = to_double("datum.width", *v);
  if (auto v = get("datum.wavenumber")) c.datum.wavenumber = to_double("datum.wavenumber", *v);
  if (auto v = get("datum.s_base")) c.datum.s_base = to_double("datum.s_base", *v);
  if (auto v = get("datum.norm")) c.datum.norm = to_double("datum.norm", *v);
  if (auto v = get("datum.delta")) c.datum.delta = to_double("datum.delta", *v);
  if (auto v = get("datum.seed")) c.datum.seed = to_u64("datum.seed", *v);
  if (auto v = get("datum.path")) c.datum.path = *v;
  if (auto v = get("outputs.snapshot_cadence")) {
    c.snapshot_cadence = to_double("outputs.snapshot_cadence", *v);
  }
  if (auto v = get("outputs.directory")) c.output_directory = *v;
  if (auto v = get("diagnostics.s_list")) {
    std::stringstream ss(*v);
    std::string item;
    while (std::getline(ss, item, ',')) {
      item = trim(item);
      if (!item.empty()) c.s_list.push_back(to_double("diagnostics.s_list", item));
    }
  }
  if (auto v = get("symmetry.lambda")) c.symmetry_lambda = to_double("symmetry.lambda", *v);
  if (auto v = get("lp.trials")) c.lp_trials = static_cast<int>(to_int("lp.trials", *v));
  if (auto v = get("blowup.stop_factor")) c.blowup_stop_factor = to_double("blowup.stop_factor", *v);
  if (auto v = get("blowup.to_collapse")) c.blowup_to_collapse = to_bool("blowup.to_collapse", *v);

  try {
    (void)c.grid();
    c.model.validate();
    c.stepper.validate();
  } catch (const std::invalid_argument& e) {
    throw ConfigError(e.what());
  }
  if (c.snapshot_cadence < 0.0) throw ConfigError("outputs.snapshot_cadence must be >= 0");
  if (!(c.symmetry_lambda > 0.0)) throw ConfigError("symmetry.lambda must be positive");
  if (c.lp_trials <= 0) throw ConfigError("lp.trials must be positive");
  if (c.datum.kind == DatumKind::FromFile) {
    if (c.datum.path.empty()) throw ConfigError("datum.kind = from_file requires datum.path");
    if (!std::filesystem::exists(c.datum.path)) {
      throw ConfigError("datum.path does not exist: " + c.datum.path.string());
    }
  }
  return c;
}

std::map<std::string, std::string> RunConfig::to_map() const {
  std::map<std::string, std::string> kv;
  kv["grid.L"] = format_double(half_length);
  kv["grid.N"] = std::to_string(n_modes);
  kv["grid.dealias"] = format_double(dealias_fraction);
  kv["model.kind"] = to_string(model.kind);
  kv["model.mu"] = format_double(model.mu);
  kv["model.alpha"] = format_double(model.alpha);
  kv["model.nonlinear"] = model.nonlinear ? "true" : "false";
  kv["stepper.scheme"] = to_string(stepper.scheme);
  kv["stepper.dt_init"] = format_double(stepper.dt_init);
  kv["stepper.cfl_safety"] = format_double(stepper.cfl_safety);
  kv["stepper.t_end"] = format_double(stepper.t_end);
  kv["stepper.max_steps"] = std::to_string(stepper.max_steps);
  kv["stepper.blowup_threshold"] = format_double(stepper.blowup_threshold);
  kv["stepper.adaptive"] = stepper.adaptive ? "true" : "false";
  kv["datum.kind"] = datum_kind_name(datum.kind);
  kv["datum.amplitude"] = format_double(datum.amplitude);
  kv["datum.width"] = format_double(datum.width);
  kv["datum.wavenumber"] = format_double(datum.wavenumber);
  kv["datum.s_base"] = format_double(datum.s_base);
  kv["datum.norm"] = format_double(datum.norm);
  kv["datum.delta"] = format_double(datum.delta);
  kv["datum.seed"] = std::to_string(datum.seed);
  if (!datum.path.empty()) kv["datum.path"] = std::filesystem::absolute(datum.path).string();
  kv["outputs.snapshot_cadence"] = format_double(snapshot_cadence);
  kv["outputs.directory"] = output_directory.string();
  std::string s;
  for (std::size_t i = 0; i < s_list.size(); ++i) {
    if (i) s += ", ";
    s += format_double(s_list[i]);
  }
  if (!s.empty()) kv["diagnostics.s_list"] = s;
  kv["symmetry.lambda"] = format_double(symmetry_lambda);
  kv["lp.trials"] = std::to_string(lp_trials);
  kv["blowup.stop_factor"] = format_double(blowup_stop_factor);
  kv["blowup.to_collapse"] = blowup_to_collapse ? "true" : "false";
  return kv;
}

std::vector<double> RunConfig::sobolev_indices() const {
  if (!s_list.empty()) return s_list;
  return {default_sobolev_index(model.alpha)};
}

RunConfig load_config(const std::filesystem::path& path) {
  return RunConfig::from_map(read_config_map(path));
}

SpectralField make_datum(const RunConfig& cfg) {
  const GridSpec grid = cfg.grid();
  const auto& d = cfg.datum;
  try {
    switch (d.kind) {
      case DatumKind::QuarticSine: return quartic_sine_datum(grid);
      case DatumKind::GaussianPacket: return gaussian_packet(grid, d.amplitude, d.width, d.wavenumber);
      case DatumKind::RandomRough: return random_rough(grid, d.s_base, d.norm, d.seed, d.delta);
      case DatumKind::FromFile: return datum_from_file(grid, d.path);
    }
  } catch (const std::runtime_error& e) {
    throw ConfigError(e.what());
  } catch (const std::invalid_argument& e) {
    throw ConfigError(e.what());
  }
  throw ConfigError("unsupported datum kind");
}

}  // namespace emhd1d
