#pragma once

// Experiment configuration: one JSON document with a versioned "schema"
// field. Unknown keys are rejected at every level, and physics parameters
// (sinusoids, L, N_c, noise model) have no defaults.

#include <cstddef>
#include <cstdint>
#include <filesystem>
#include <fstream>
#include <initializer_list>
#include <optional>
#include <string>
#include <vector>

#include "json.hpp"

#include "pgdetect/core_model.hpp"
#include "pgdetect/error.hpp"
#include "pgdetect/sim.hpp"
#include "pgdetect/test_kind.hpp"

namespace pgdetect {

inline constexpr const char* kConfigSchema = "pgdetect/1";

enum class InputMode { Synthetic, External };

struct NoiseSpec {
  std::string name; // "stellar_ar6", "ar" or "white"
  ARModel model;
};

struct CalibrationSpec {
  std::size_t trials = 0;
  NoiseSpec noise;
};

struct ExperimentConfig {
  InputMode mode = InputMode::Synthetic;
  std::size_t n = 0;
  double dt = 0.0;
  std::optional<NoiseSpec> noise;
  std::vector<std::size_t> training_sizes;
  std::vector<std::filesystem::path> training_files;
  std::optional<std::filesystem::path> observation_file;
  std::optional<SinusoidSet> sines;
  std::vector<TestKind> tests;
  std::optional<double> pfa;
  std::vector<double> pfa_grid;
  std::vector<double> validate_pfa_targets;
  std::vector<double> validate_gammas;
  std::optional<std::size_t> trials;
  std::optional<std::uint64_t> seed;
  std::size_t histogram_bins = 50;
  bool detrend = false;
  std::optional<CalibrationSpec> calibration;
  std::filesystem::path out_dir = "out";
  unsigned threads = 1;

  [[nodiscard]] FourierGrid grid() const { return {n, dt}; }
};

namespace detail {

using nlohmann::json;

inline void only_keys(const json& obj, const std::string& where,
                      std::initializer_list<const char*> allowed) {
  if (!obj.is_object()) throw ConfigError(where + ": expected an object");
  for (const auto& [key, value] : obj.items()) {
    bool ok = false;
    for (const char* a : allowed) ok = ok || key == a;
    if (!ok) throw ConfigError(where + ": unknown key '" + key + "'");
  }
}

inline const json& required(const json& obj, const std::string& where, const char* key) {
  if (!obj.contains(key)) throw ConfigError(where + ": missing required key '" + key + "'");
  return obj.at(key);
}

inline double as_number(const json& v, const std::string& where) {
  if (!v.is_number()) throw ConfigError(where + ": expected a number");
  return v.get<double>();
}

inline std::size_t as_count(const json& v, const std::string& where) {
  if (!v.is_number_integer() || v.get<long long>() < 0) {
    throw ConfigError(where + ": expected a non-negative integer");
  }
  return v.get<std::size_t>();
}

inline std::vector<double> as_numbers(const json& v, const std::string& where) {
  if (!v.is_array()) throw ConfigError(where + ": expected an array");
  std::vector<double> out;
  for (std::size_t i = 0; i < v.size(); ++i) {
    out.push_back(as_number(v[i], where + "[" + std::to_string(i) + "]"));
  }
  return out;
}

inline NoiseSpec parse_noise(const json& j, const std::string& where) {
  const auto& model = required(j, where, "model");
  if (!model.is_string()) throw ConfigError(where + ".model: expected a string");
  const auto name = model.get<std::string>();
  NoiseSpec spec{name, {}};
  if (name == "stellar_ar6") {
    only_keys(j, where, {"model", "scale"});
    spec.model = default_stellar_ar6();
    if (j.contains("scale")) spec.model = spec.model.scaled(as_number(j["scale"], where + ".scale"));
  } else if (name == "white") {
    only_keys(j, where, {"model", "sigma"});
    spec.model = ARModel{{}, as_number(required(j, where, "sigma"), where + ".sigma")};
  } else if (name == "ar") {
    only_keys(j, where, {"model", "coeffs", "sigma"});
    spec.model = ARModel{as_numbers(required(j, where, "coeffs"), where + ".coeffs"),
                         as_number(required(j, where, "sigma"), where + ".sigma")};
  } else {
    throw ConfigError(where + ".model: unknown noise model '" + name + "'");
  }
  try {
    spec.model.validate();
  } catch (const InvalidInput& e) {
    throw ConfigError(where + ": " + e.what());
  }
  return spec;
}

inline std::filesystem::path resolve(const std::filesystem::path& base, const json& v,
                                     const std::string& where) {
  if (!v.is_string()) throw ConfigError(where + ": expected a path string");
  std::filesystem::path p = v.get<std::string>();
  return p.is_absolute() ? p : base / p;
}

} // namespace detail

/// Parses and validates a configuration document. Relative paths resolve
/// against `base_dir`.
inline ExperimentConfig parse_config(const nlohmann::json& j,
                                     const std::filesystem::path& base_dir = ".") {
  using detail::as_count;
  using detail::as_number;
  using detail::as_numbers;
  using detail::required;
  detail::only_keys(j, "config",
                    {"schema", "mode", "grid", "noise", "training", "observation", "signal",
                     "tests", "pfa", "pfa_grid", "validate", "mc", "histogram", "detrend",
                     "calibration", "output"});
  const auto& schema = required(j, "config", "schema");
  if (!schema.is_string() || schema.get<std::string>() != kConfigSchema) {
    throw ConfigError(std::string("config.schema: expected \"") + kConfigSchema + "\"");
  }

  ExperimentConfig c;
  const auto& mode = required(j, "config", "mode");
  if (mode == "synthetic") {
    c.mode = InputMode::Synthetic;
  } else if (mode == "external") {
    c.mode = InputMode::External;
  } else {
    throw ConfigError("config.mode: expected \"synthetic\" or \"external\"");
  }

  if (j.contains("grid")) {
    const auto& g = j["grid"];
    detail::only_keys(g, "grid", {"n", "dt"});
    c.n = as_count(required(g, "grid", "n"), "grid.n");
    c.dt = as_number(required(g, "grid", "dt"), "grid.dt");
    try {
      (void)c.grid();
    } catch (const InvalidInput& e) {
      throw ConfigError(std::string("grid: ") + e.what());
    }
  }

  if (j.contains("noise")) c.noise = detail::parse_noise(j["noise"], "noise");

  if (j.contains("training")) {
    const auto& t = j["training"];
    if (c.mode == InputMode::Synthetic) {
      detail::only_keys(t, "training", {"L"});
      const auto& l = required(t, "training", "L");
      if (!l.is_array() || l.empty()) throw ConfigError("training.L: expected a non-empty array");
      for (std::size_t i = 0; i < l.size(); ++i) {
        const auto v = as_count(l[i], "training.L[" + std::to_string(i) + "]");
        if (v < 1) throw ConfigError("training.L: L must be >= 1");
        c.training_sizes.push_back(v);
      }
    } else {
      detail::only_keys(t, "training", {"files"});
      const auto& f = required(t, "training", "files");
      if (!f.is_array() || f.empty()) {
        throw ConfigError("training.files: expected a non-empty array");
      }
      for (std::size_t i = 0; i < f.size(); ++i) {
        c.training_files.push_back(
            detail::resolve(base_dir, f[i], "training.files[" + std::to_string(i) + "]"));
      }
    }
  }

  if (j.contains("observation")) {
    if (c.mode != InputMode::External) {
      throw ConfigError("observation: only valid in external mode");
    }
    detail::only_keys(j["observation"], "observation", {"file"});
    c.observation_file =
        detail::resolve(base_dir, required(j["observation"], "observation", "file"),
                        "observation.file");
  }

  if (j.contains("signal")) {
    const auto& s = j["signal"];
    detail::only_keys(s, "signal", {"sines"});
    const auto& arr = required(s, "signal", "sines");
    if (!arr.is_array()) throw ConfigError("signal.sines: expected an array");
    std::vector<Sinusoid> comps;
    for (std::size_t i = 0; i < arr.size(); ++i) {
      const std::string w = "signal.sines[" + std::to_string(i) + "]";
      detail::only_keys(arr[i], w, {"amplitude", "frequency_hz", "phase"});
      comps.push_back({as_number(required(arr[i], w, "amplitude"), w + ".amplitude"),
                       as_number(required(arr[i], w, "frequency_hz"), w + ".frequency_hz"),
                       as_number(required(arr[i], w, "phase"), w + ".phase")});
    }
    try {
      c.sines = SinusoidSet(std::move(comps));
      if (c.dt > 0.0) c.sines->check_below_nyquist(c.dt);
    } catch (const InvalidInput& e) {
      throw ConfigError(std::string("signal: ") + e.what());
    }
  }

  if (j.contains("tests")) {
    const auto& arr = j["tests"];
    if (!arr.is_array() || arr.empty()) throw ConfigError("tests: expected a non-empty array");
    for (std::size_t i = 0; i < arr.size(); ++i) {
      const std::string w = "tests[" + std::to_string(i) + "]";
      const auto& kind = required(arr[i], w, "kind");
      if (!kind.is_string()) throw ConfigError(w + ".kind: expected a string");
      TestKind t;
      try {
        t.family = TestKind::parse_family(kind.get<std::string>());
      } catch (const InvalidInput& e) {
        throw ConfigError(w + ": " + e.what());
      }
      if (t.uses_n_c()) {
        detail::only_keys(arr[i], w, {"kind", "n_c"});
        t.n_c = as_count(required(arr[i], w, "n_c"), w + ".n_c");
        if (t.n_c < 1) throw ConfigError(w + ".n_c: must be >= 1");
      } else {
        detail::only_keys(arr[i], w, {"kind"});
      }
      if (c.n > 0) {
        try {
          t.validate(c.grid().size());
        } catch (const InvalidInput& e) {
          throw ConfigError(w + ": " + e.what());
        }
      }
      c.tests.push_back(t);
    }
  }

  auto check_prob = [](double p, const std::string& w) {
    if (!(p > 0.0 && p < 1.0)) throw ConfigError(w + ": must lie in (0, 1)");
  };
  if (j.contains("pfa")) {
    c.pfa = as_number(j["pfa"], "pfa");
    check_prob(*c.pfa, "pfa");
  }
  if (j.contains("pfa_grid")) {
    c.pfa_grid = as_numbers(j["pfa_grid"], "pfa_grid");
    for (std::size_t i = 0; i < c.pfa_grid.size(); ++i) {
      check_prob(c.pfa_grid[i], "pfa_grid");
      if (i > 0 && !(c.pfa_grid[i] > c.pfa_grid[i - 1])) {
        throw ConfigError("pfa_grid: must be strictly increasing");
      }
    }
  }
  if (j.contains("validate")) {
    const auto& v = j["validate"];
    detail::only_keys(v, "validate", {"pfa_targets", "gammas"});
    if (v.contains("pfa_targets") == v.contains("gammas")) {
      throw ConfigError("validate: give exactly one of 'pfa_targets' or 'gammas'");
    }
    if (v.contains("pfa_targets")) {
      c.validate_pfa_targets = as_numbers(v["pfa_targets"], "validate.pfa_targets");
      for (double p : c.validate_pfa_targets) check_prob(p, "validate.pfa_targets");
    } else {
      c.validate_gammas = as_numbers(v["gammas"], "validate.gammas");
      for (double g : c.validate_gammas) {
        if (!(g >= 0.0)) throw ConfigError("validate.gammas: must be >= 0");
      }
    }
  }
  if (j.contains("mc")) {
    const auto& m = j["mc"];
    detail::only_keys(m, "mc", {"trials", "seed"});
    c.trials = as_count(required(m, "mc", "trials"), "mc.trials");
    if (*c.trials < 1) throw ConfigError("mc.trials: must be >= 1");
    const auto& s = required(m, "mc", "seed");
    if (!s.is_number_unsigned() && !(s.is_number_integer() && s.get<long long>() >= 0)) {
      throw ConfigError("mc.seed: expected an unsigned 64-bit integer");
    }
    c.seed = s.get<std::uint64_t>();
  }
  if (j.contains("histogram")) {
    detail::only_keys(j["histogram"], "histogram", {"bins"});
    c.histogram_bins = as_count(required(j["histogram"], "histogram", "bins"), "histogram.bins");
    if (c.histogram_bins < 1) throw ConfigError("histogram.bins: must be >= 1");
  }
  if (j.contains("detrend")) {
    if (!j["detrend"].is_boolean()) throw ConfigError("detrend: expected a boolean");
    c.detrend = j["detrend"].get<bool>();
  }
  if (j.contains("calibration")) {
    const auto& k = j["calibration"];
    detail::only_keys(k, "calibration", {"trials", "noise"});
    CalibrationSpec spec;
    spec.trials = as_count(required(k, "calibration", "trials"), "calibration.trials");
    spec.noise = detail::parse_noise(required(k, "calibration", "noise"), "calibration.noise");
    c.calibration = spec;
  }
  if (j.contains("output")) {
    detail::only_keys(j["output"], "output", {"dir"});
    c.out_dir = detail::resolve(base_dir, required(j["output"], "output", "dir"), "output.dir");
  }
  return c;
}

inline ExperimentConfig load_config(const std::filesystem::path& path) {
  std::ifstream in(path);
  if (!in) throw ConfigError("cannot open config " + path.string());
  nlohmann::json j;
  try {
    in >> j;
  } catch (const nlohmann::json::exception& e) {
    throw ConfigError(path.string() + ": " + e.what());
  }
  return parse_config(j, path.parent_path());
}

} // namespace pgdetect
