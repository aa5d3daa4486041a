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

#include "riet/runner.hpp"

#include <algorithm>
#include <atomic>
#include <charconv>
#include <chrono>
#include <cmath>
#include <cstdlib>
#include <thread>

#include <json.hpp>

#include "riet/errors.hpp"

namespace riet::cli {
namespace {

using Clock = std::chrono::steady_clock;

double seconds_since(Clock::time_point start) {
  return std::chrono::duration<double>(Clock::now() - start).count();
}

bool uses_lindblad(const RunConfig& cfg) {
  return cfg.method == Method::Lindblad || (cfg.method == Method::RHP && cfg.rhp_engine == "lindblad");
}

RIConfig ri_config(const RunConfig& cfg) {
  RIConfig c;
  c.tau = cfg.tau;
  c.steps = std::lround(cfg.t_max / cfg.tau);
  c.trotter_n = cfg.method == Method::RITrotter ? cfg.trotter_n : 0;
  c.trotter_split = cfg.trotter_split;
  c.record_stride = cfg.resolved_record_stride();
  return c;
}

nlohmann::json fit_json(const RateFit& f) {
  return {{"k", f.k},
          {"p0", f.p0},
          {"r_squared", f.r_squared},
          {"residual_norm", f.residual_norm},
          {"converged", f.converged}};
}

}  // namespace

RunResult run_single(const RunConfig& cfg) {
  const auto start = Clock::now();
  const SystemOperators ops = build_system(cfg.model);
  RunResult result;
  switch (cfg.method) {
    case Method::Lindblad: {
      const LindbladOptions opts{cfg.t_max, cfg.dt, cfg.resolved_record_stride()};
      result.trajectory = integrate_lindblad(build_initial_state(ops, cfg.model), ops, opts);
      break;
    }
    case Method::RI:
    case Method::RITrotter:
      result.trajectory = evolve_ri(build_initial_state(ops, cfg.model), ops, ri_config(cfg), false);
      break;
    case Method::StatePrep:
      result.trajectory = run_state_preparation(ops, ri_config(cfg), cfg.model);
      break;
    case Method::RHP: {
      RHPEngine engine;
      const bool lindblad = cfg.rhp_engine == "lindblad";
      engine.kind = lindblad ? RHPEngine::Kind::Lindblad : RHPEngine::Kind::RI;
      engine.step = lindblad ? cfg.dt : cfg.tau;
      engine.record_stride = cfg.resolved_record_stride();
      RHPResult rhp = rhp_measure(ops, cfg.model, engine, cfg.t_max);
      result.trajectory = std::move(rhp.trajectory);
      rhp.trajectory = Trajectory();
      result.rhp = std::move(rhp);
      break;
    }
  }
  result.fit = fit_transfer_rate(result.trajectory);
  result.wall_seconds = seconds_since(start);
  return result;
}

RunConfig sweep_point(const RunConfig& cfg, double value) {
  RunConfig point = cfg;
  point.sweep.reset();
  if (cfg.sweep) {
    switch (cfg.sweep->parameter) {
      case SweepParameter::DeltaE: point.model.delta_e = value; break;
      case SweepParameter::Tau: point.tau = value; break;
      case SweepParameter::TrotterN: point.trotter_n = static_cast<int>(value); break;
    }
  }
  return point;
}

std::vector<SweepRow> run_sweep(const RunConfig& cfg, int threads) {
  if (!cfg.sweep) throw ConfigError("sweep: required for a sweep run");
  const std::vector<double>& values = cfg.sweep->values;
  std::vector<SweepRow> rows(values.size());
  for (std::size_t i = 0; i < values.size(); ++i) {
    const RunConfig point = sweep_point(cfg, values[i]);
    SweepRow& row = rows[i];
    row.delta_e = point.model.delta_e.value_or(std::nan(""));
    row.tau = uses_lindblad(point) ? 0.0 : point.tau;
    row.trotter_n = point.method == Method::RITrotter ? point.trotter_n : 0;
  }

  std::atomic<std::size_t> next{0};
  auto worker = [&] {
    for (std::size_t i = next++; i < values.size(); i = next++) {
      SweepRow& row = rows[i];
      try {
        const RunResult r = run_single(sweep_point(cfg, values[i]));
        row.fit = r.fit;
        if (r.rhp) {
          row.rhp_measure = r.rhp->measure;
          row.rhp_delta_e = r.rhp->delta_e_entanglement;
        }
      } catch (const std::exception& e) {
        row.fit = RateFit{};
        row.error = e.what();
      }
    }
  };
  const int n = std::clamp<int>(threads, 1, static_cast<int>(values.size()));
  std::vector<std::thread> pool;
  for (int t = 1; t < n; ++t) pool.emplace_back(worker);
  worker();
  for (auto& th : pool) th.join();
  return rows;
}

std::string format_double(double x) {
  if (std::isnan(x)) return "nan";
  if (std::isinf(x)) return x > 0 ? "inf" : "-inf";
  char buf[64];
  const auto res = std::to_chars(buf, buf + sizeof(buf), x);
  return std::string(buf, res.ptr);
}

void write_trajectory_csv(std::ostream& out, const Trajectory& traj) {
  out << "t";
  for (const auto& name : traj.names()) out << ',' << name;
  out << '\n';
  std::vector<const std::vector<double>*> cols;
  for (const auto& name : traj.names()) cols.push_back(&traj.column(name));
  for (std::size_t i = 0; i < traj.size(); ++i) {
    out << format_double(traj.times()[i]);
    for (const auto* c : cols) out << ',' << format_double((*c)[i]);
    out << '\n';
  }
}

void write_sweep_csv(std::ostream& out, const std::vector<SweepRow>& rows) {
  out << "delta_e,tau,trotter_n,k,p0,r_squared,converged\n";
  for (const SweepRow& r : rows) {
    out << format_double(r.delta_e) << ',' << format_double(r.tau) << ',' << r.trotter_n << ','
        << format_double(r.fit.k) << ',' << format_double(r.fit.p0) << ','
        << format_double(r.fit.r_squared) << ',' << (r.fit.converged ? "true" : "false") << '\n';
  }
}

void write_rhp_sweep_csv(std::ostream& out, const std::vector<SweepRow>& rows) {
  out << "delta_e,tau,measure,measure_summary,delta_e_entanglement\n";
  for (const SweepRow& r : rows) {
    const double m = r.rhp_measure.value_or(std::nan(""));
    const double summary = std::isnan(m) ? m : (m < kRhpZeroThreshold ? 0.0 : m);
    out << format_double(r.delta_e) << ',' << format_double(r.tau) << ',' << format_double(m) << ','
        << format_double(summary) << ',' << format_double(r.rhp_delta_e.value_or(std::nan("")))
        << '\n';
  }
}

std::string manifest_json(const RunConfig& cfg, double wall_seconds, const RunResult* single,
                          const std::vector<SweepRow>* sweep, int threads) {
  using nlohmann::json;
  const ModelParams& m = cfg.model;
  json model = {{"kind", std::string(to_string(m.kind))},
                {"v", m.v},
                {"kbt", m.kbt},
                {"gamma_cfg", m.gamma_cfg},
                {"n_levels", m.n_levels},
                {"time_unit", std::string(to_string(m.time_unit))}};
  if (m.delta_e) model["delta_e"] = *m.delta_e;
  if (m.lambda) model["lambda"] = *m.lambda;
  if (m.dba_site_energies) model["dba_site_energies"] = *m.dba_site_energies;
  if (m.dba_positions) model["dba_positions"] = *m.dba_positions;

  json units = {{"time_unit", std::string(to_string(m.time_unit))},
                {"time_scale", m.time_scale()},
                {"gamma_internal", m.gamma_internal()},
                {"gamma_conversion", m.time_unit == TimeUnit::Period
                                         ? "gamma_internal = gamma_cfg / (2 pi)"
                                         : "gamma_internal = gamma_cfg"},
                {"nbar", thermal_occupation(m.kbt)}};

  json engine = {{"method", std::string(to_string(cfg.method))},
                 {"t_max", cfg.t_max},
                 {"record_stride", cfg.resolved_record_stride()}};
  if (uses_lindblad(cfg)) {
    engine["dt"] = cfg.dt;
    engine["integrator"] = "rk4";
  } else {
    engine["tau"] = cfg.tau;
    engine["steps"] = std::lround(cfg.t_max / cfg.tau);
  }
  if (cfg.method == Method::RITrotter) {
    engine["trotter_n"] = cfg.trotter_n;
    engine["trotter_split"] = std::string(to_string(cfg.trotter_split));
  }
  if (cfg.method == Method::RHP) engine["rhp_engine"] = cfg.rhp_engine;

  json doc = {{"model", model}, {"units", units}, {"engine", engine}, {"wall_seconds", wall_seconds},
              {"threads", threads}, {"deterministic", true}};
  if (cfg.preset) doc["preset"] = std::string(to_string(*cfg.preset));
  if (single) {
    doc["fit"] = fit_json(single->fit);
    if (single->rhp) {
      doc["rhp"] = {{"measure", single->rhp->measure},
                    {"measure_summary", single->rhp->summary_measure()},
                    {"delta_e_entanglement", single->rhp->delta_e_entanglement}};
    }
  }
  if (sweep) {
    json rows = json::array();
    for (const SweepRow& r : *sweep) {
      json row = fit_json(r.fit);
      if (!r.error.empty()) row["error"] = r.error;
      rows.push_back(row);
    }
    doc["sweep"] = {{"parameter", std::string(to_string(cfg.sweep->parameter))},
                    {"values", cfg.sweep->values},
                    {"rows", rows}};
  }
  return doc.dump(2) + "\n";
}

int resolve_threads(std::optional<int> flag) {
  if (flag) {
    if (*flag < 1) throw ConfigError("--threads: must be >= 1");
    return *flag;
  }
  if (const char* env = std::getenv("RI_ET_THREADS")) {
    int n = 0;
    const std::string_view s(env);
    const auto res = std::from_chars(s.data(), s.data() + s.size(), n);
    if (res.ec != std::errc() || res.ptr != s.data() + s.size() || n < 1) {
      throw ConfigError("RI_ET_THREADS: must be a positive integer");
    }
    return n;
  }
  return std::max(1u, std::thread::hardware_concurrency());
}

}  // namespace riet::cli
