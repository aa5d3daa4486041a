// Copyright 2026 The ri-et Authors
//
// Licensed under the Apache License, Version 2.0 (the "License");
// you may not use this file except in compliance with the License.
// You may obtain a copy of the License at
//
//     http://www.apache.org/licenses/LICENSE-2.0
//
// Unless required by applicable law or agreed to in writing, software
// distributed under the License is distributed on an "AS IS" BASIS,
// WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
// See the License for the specific language governing permissions and
// limitations under the License.

#include "riet/config.hpp"

#include <cmath>
#include <fstream>
#include <set>
#include <sstream>

#include <json.hpp>

#include "riet/errors.hpp"

namespace riet::cli {
namespace {

using nlohmann::json;

const std::set<std::string, std::less<>> kKnownKeys = {
    "preset",    "kind",          "delta_e",      "v",          "lambda",
    "kbt",       "gamma_cfg",     "n_levels",     "dba_site_energies", "dba_positions",
    "time_unit", "method",        "tau",          "t_max",      "dt",
    "trotter_n", "trotter_split", "record_stride", "rhp_engine", "sweep",
    "output_dir"};

Method method_from_string(std::string_view s) {
  if (s == "lindblad") return Method::Lindblad;
  if (s == "ri") return Method::RI;
  if (s == "ri_trotter") return Method::RITrotter;
  if (s == "stateprep") return Method::StatePrep;
  if (s == "rhp") return Method::RHP;
  throw ConfigError("method: unknown value '" + std::string(s) +
                    "' (expected lindblad, ri, ri_trotter, stateprep or rhp)");
}

SweepParameter sweep_parameter_from_string(std::string_view s) {
  if (s == "delta_e") return SweepParameter::DeltaE;
  if (s == "tau") return SweepParameter::Tau;
  if (s == "trotter_n") return SweepParameter::TrotterN;
  throw ConfigError("sweep.parameter: unknown value '" + std::string(s) + "'");
}

template <typename T>
T get(const json& j, const char* key) {
  try {
    return j.at(key).get<T>();
  } catch (const json::exception&) {
    throw ConfigError(std::string(key) + ": wrong type");
  }
}

std::array<double, 4> get4(const json& j, const char* key) {
  const auto v = get<std::vector<double>>(j, key);
  if (v.size() != 4) throw ConfigError(std::string(key) + ": expected 4 values");
  return {v[0], v[1], v[2], v[3]};
}

}  // namespace

std::string_view to_string(Method m) {
  switch (m) {
    case Method::Lindblad: return "lindblad";
    case Method::RI: return "ri";
    case Method::RITrotter: return "ri_trotter";
    case Method::StatePrep: return "stateprep";
    case Method::RHP: return "rhp";
  }
  return "?";
}

std::string_view to_string(SweepParameter p) {
  switch (p) {
    case SweepParameter::DeltaE: return "delta_e";
    case SweepParameter::Tau: return "tau";
    case SweepParameter::TrotterN: return "trotter_n";
  }
  return "?";
}

void RunConfig::validate() const {
  try {
    model.validate();
  } catch (const ArgumentError& e) {
    throw ConfigError(e.what());
  }
  if (!(tau > 0.0) || !std::isfinite(tau)) throw ConfigError("tau: must be > 0");
  if (!(t_max > 0.0) || !std::isfinite(t_max)) throw ConfigError("t_max: must be > 0");
  if (!(dt > 0.0) || !std::isfinite(dt)) throw ConfigError("dt: must be > 0");
  if (trotter_n < 1) throw ConfigError("trotter_n: must be >= 1");
  if (record_stride < 0) throw ConfigError("record_stride: must be >= 0");
  if (rhp_engine != "lindblad" && rhp_engine != "ri") {
    throw ConfigError("rhp_engine: expected lindblad or ri");
  }
  const double step = method == Method::Lindblad || (method == Method::RHP && rhp_engine == "lindblad")
                          ? dt
                          : tau;
  if (t_max < step) throw ConfigError("t_max: shorter than one step");
  if (method == Method::RITrotter && model.kind != ModelKind::DA) {
    throw ConfigError("method: ri_trotter requires kind DA");
  }
  if (method == Method::RHP && model.kind != ModelKind::DA) {
    throw ConfigError("method: rhp requires kind DA");
  }
  if (sweep) {
    if (sweep->values.empty()) throw ConfigError("sweep.values: must not be empty");
    for (double v : sweep->values) {
      if (!std::isfinite(v)) throw ConfigError("sweep.values: must be finite");
      if (sweep->parameter == SweepParameter::Tau && !(v > 0.0)) {
        throw ConfigError("sweep.values: tau values must be > 0");
      }
      if (sweep->parameter == SweepParameter::TrotterN && (v < 1.0 || v != std::floor(v))) {
        throw ConfigError("sweep.values: trotter_n values must be integers >= 1");
      }
    }
    if (sweep->parameter == SweepParameter::DeltaE && model.kind != ModelKind::DA) {
      throw ConfigError("sweep.parameter: delta_e sweeps require kind DA");
    }
    if (sweep->parameter == SweepParameter::TrotterN && method != Method::RITrotter) {
      throw ConfigError("sweep.parameter: trotter_n sweeps require method ri_trotter");
    }
  }
}

int RunConfig::resolved_record_stride() const {
  if (record_stride > 0) return record_stride;
  const bool lindblad = method == Method::Lindblad || (method == Method::RHP && rhp_engine == "lindblad");
  const long steps = std::lround(t_max / (lindblad ? dt : tau));
  return static_cast<int>(std::max<long>(1, steps / 1000));
}

RunConfig parse_config(std::string_view text) {
  json j;
  try {
    j = json::parse(text);
  } catch (const json::parse_error& e) {
    throw ConfigError(std::string("parse error: ") + e.what());
  }
  if (!j.is_object()) throw ConfigError("config: top level must be an object");
  for (const auto& [key, value] : j.items()) {
    if (!kKnownKeys.contains(key)) throw ConfigError(key + ": unknown key");
  }

  RunConfig cfg;
  if (j.contains("preset")) {
    try {
      cfg.preset = preset_from_string(get<std::string>(j, "preset"));
    } catch (const ArgumentError& e) {
      throw ConfigError(std::string("preset: ") + e.what());
    }
    cfg.model = preset_params(*cfg.preset);
  }
  if (j.contains("kind")) {
    const auto kind = get<std::string>(j, "kind");
    if (kind == "DA") {
      cfg.model.kind = ModelKind::DA;
    } else if (kind == "DBA") {
      cfg.model.kind = ModelKind::DBA;
    } else {
      throw ConfigError("kind: expected DA or DBA");
    }
  }
  if (j.contains("delta_e")) cfg.model.delta_e = get<double>(j, "delta_e");
  if (j.contains("v")) cfg.model.v = get<double>(j, "v");
  if (j.contains("lambda")) cfg.model.lambda = get<double>(j, "lambda");
  if (j.contains("kbt")) cfg.model.kbt = get<double>(j, "kbt");
  if (j.contains("gamma_cfg")) cfg.model.gamma_cfg = get<double>(j, "gamma_cfg");
  if (j.contains("n_levels")) cfg.model.n_levels = get<int>(j, "n_levels");
  if (j.contains("dba_site_energies")) cfg.model.dba_site_energies = get4(j, "dba_site_energies");
  if (j.contains("dba_positions")) cfg.model.dba_positions = get4(j, "dba_positions");
  if (j.contains("time_unit")) {
    try {
      cfg.model.time_unit = time_unit_from_string(get<std::string>(j, "time_unit"));
    } catch (const ArgumentError& e) {
      throw ConfigError(std::string("time_unit: ") + e.what());
    }
  }
  if (cfg.model.kind == ModelKind::DBA) {
    if (!cfg.model.dba_site_energies) cfg.model.dba_site_energies = preset_params(Preset::Dba).dba_site_energies;
    if (!cfg.model.dba_positions) cfg.model.dba_positions = preset_params(Preset::Dba).dba_positions;
  }

  if (!j.contains("method")) throw ConfigError("method: required");
  const auto method = get<std::string>(j, "method");
  if (method.empty()) throw ConfigError("method: must not be empty");
  cfg.method = method_from_string(method);

  if (j.contains("tau")) {
    cfg.tau = get<double>(j, "tau");
  } else if (cfg.preset) {
    cfg.tau = preset_converged_tau(*cfg.preset);
  }
  if (j.contains("t_max")) cfg.t_max = get<double>(j, "t_max");
  if (j.contains("dt")) cfg.dt = get<double>(j, "dt");
  if (j.contains("trotter_n")) cfg.trotter_n = get<int>(j, "trotter_n");
  if (j.contains("trotter_split")) {
    try {
      cfg.trotter_split = trotter_split_from_string(get<std::string>(j, "trotter_split"));
    } catch (const ArgumentError& e) {
      throw ConfigError(std::string("trotter_split: ") + e.what());
    }
  }
  if (j.contains("record_stride")) cfg.record_stride = get<int>(j, "record_stride");
  if (j.contains("rhp_engine")) cfg.rhp_engine = get<std::string>(j, "rhp_engine");
  if (j.contains("output_dir")) cfg.output_dir = get<std::string>(j, "output_dir");
  if (j.contains("sweep")) {
    const json& s = j.at("sweep");
    if (!s.is_object()) throw ConfigError("sweep: must be an object");
    for (const auto& [key, value] : s.items()) {
      if (key != "parameter" && key != "values") throw ConfigError("sweep." + key + ": unknown key");
    }
    if (!s.contains("parameter")) throw ConfigError("sweep.parameter: required");
    if (!s.contains("values")) throw ConfigError("sweep.values: required");
    Sweep sw;
    sw.parameter = sweep_parameter_from_string(get<std::string>(s, "parameter"));
    try {
      sw.values = s.at("values").get<std::vector<double>>();
    } catch (const json::exception&) {
      throw ConfigError("sweep.values: expected a list of numbers");
    }
    cfg.sweep = std::move(sw);
  }
  cfg.validate();
  return cfg;
}

RunConfig load_config(const std::filesystem::path& path) {
  std::ifstream in(path);
  if (!in) throw ConfigError("cannot open config file '" + path.string() + "'");
  std::ostringstream ss;
  ss << in.rdbuf();
  return parse_config(ss.str());
}

}  // namespace riet::cli
