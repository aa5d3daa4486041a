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

// ri-et: command line front end.

#include <cstdio>
#include <filesystem>
#include <fstream>
#include <iostream>
#include <optional>
#include <string>

#include <CLI11.hpp>

#include "riet/config.hpp"
#include "riet/runner.hpp"

namespace {

namespace fs = std::filesystem;
using namespace riet;
using namespace riet::cli;

void write_file(const fs::path& path, const std::string& contents) {
  std::ofstream out(path, std::ios::binary);
  if (!out) throw std::runtime_error("cannot write '" + path.string() + "'");
  out << contents;
}

template <typename Fn>
void write_with(const fs::path& path, Fn&& fn) {
  std::ofstream out(path, std::ios::binary);
  if (!out) throw std::runtime_error("cannot write '" + path.string() + "'");
  fn(out);
}

RunConfig prepare(const std::string& config_path, const std::string& output_dir) {
  RunConfig cfg = load_config(config_path);
  if (!output_dir.empty()) cfg.output_dir = output_dir;
  fs::create_directories(cfg.output_dir);
  return cfg;
}

int cmd_run(const RunConfig& cfg, int threads) {
  if (cfg.sweep) {
    std::cerr << "error: config declares a sweep; use `ri-et sweep`\n";
    return 2;
  }
  RunResult result;
  try {
    result = run_single(cfg);
  } catch (const std::exception& e) {
    std::cerr << "error: " << e.what() << '\n';
    return 1;
  }
  write_with(cfg.output_dir / "trajectory.csv",
             [&](std::ostream& out) { write_trajectory_csv(out, result.trajectory); });
  write_file(cfg.output_dir / "manifest.json",
             manifest_json(cfg, result.wall_seconds, &result, nullptr, threads));
  std::printf("k = %s (r^2 = %.4f%s)\n", format_double(result.fit.k).c_str(),
              result.fit.r_squared, result.fit.converged ? "" : ", not converged");
  if (result.rhp) {
    std::printf("I(E) = %s\n", format_double(result.rhp->summary_measure()).c_str());
  }
  std::printf("wrote %s\n", cfg.output_dir.string().c_str());
  return 0;
}

int cmd_sweep(const RunConfig& cfg, int threads) {
  if (!cfg.sweep) {
    std::cerr << "error: sweep: required for `ri-et sweep`\n";
    return 2;
  }
  const auto start = std::chrono::steady_clock::now();
  const std::vector<SweepRow> rows = run_sweep(cfg, threads);
  const double wall = std::chrono::duration<double>(std::chrono::steady_clock::now() - start).count();
  write_with(cfg.output_dir / "sweep.csv", [&](std::ostream& out) { write_sweep_csv(out, rows); });
  if (cfg.method == Method::RHP) {
    write_with(cfg.output_dir / "rhp_sweep.csv",
               [&](std::ostream& out) { write_rhp_sweep_csv(out, rows); });
  }
  write_file(cfg.output_dir / "manifest.json", manifest_json(cfg, wall, nullptr, &rows, threads));
  int failures = 0;
  for (std::size_t i = 0; i < rows.size(); ++i) {
    if (rows[i].error.empty()) continue;
    ++failures;
    std::cerr << "error: sweep value " << format_double(cfg.sweep->values[i]) << ": "
              << rows[i].error << '\n';
  }
  std::printf("%zu sweep points, %d failed; wrote %s\n", rows.size(), failures,
              cfg.output_dir.string().c_str());
  return failures == 0 ? 0 : 1;
}

void cmd_presets() {
  std::printf("%-18s %6s %8s %6s %10s %8s %8s\n", "preset", "V", "lambda", "kbt", "gamma_cfg",
              "n_levels", "delta_e");
  for (Preset p : all_presets()) {
    const ModelParams m = preset_params(p);
    if (m.kind == ModelKind::DA) {
      std::printf("%-18s %6g %8g %6g %10.4g %8d %8g\n", std::string(to_string(p)).c_str(), m.v,
                  *m.lambda, m.kbt, m.gamma_cfg, m.n_levels, *m.delta_e);
    } else {
      std::printf("%-18s %6g %8s %6g %10.4g %8d %8s\n", std::string(to_string(p)).c_str(), m.v, "-",
                  m.kbt, m.gamma_cfg, m.n_levels, "-");
      const auto& e = *m.dba_site_energies;
      const auto& q = *m.dba_positions;
      std::printf("  sites D B1 B2 A: energies %g %g %g %g, positions %g %g %g %g\n", e[0], e[1],
                  e[2], e[3], q[0], q[1], q[2], q[3]);
    }
  }
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"Repeated-interaction electron transfer simulator"};
  app.require_subcommand(1);

  std::string config_path;
  std::string output_dir;
  std::optional<int> threads;
  bool seedless = false;

  auto add_common = [&](CLI::App* sub) {
    sub->add_option("config", config_path, "JSON run configuration")->required()->check(CLI::ExistingFile);
    sub->add_option("--output-dir", output_dir, "Directory for CSV and manifest output");
    sub->add_option("--threads", threads, "Sweep worker count (default: RI_ET_THREADS or all cores)");
    sub->add_flag("--seedless", seedless, "Reserved; all engines are deterministic");
  };
  CLI::App* run = app.add_subcommand("run", "Run one simulation");
  add_common(run);
  CLI::App* sweep = app.add_subcommand("sweep", "Run a parameter sweep");
  add_common(sweep);
  app.add_subcommand("presets", "Print the built-in parameter sets");

  CLI11_PARSE(app, argc, argv);

  try {
    if (app.got_subcommand("presets")) {
      cmd_presets();
      return 0;
    }
    const int n = resolve_threads(threads);
    const RunConfig cfg = prepare(config_path, output_dir);
    return app.got_subcommand("run") ? cmd_run(cfg, n) : cmd_sweep(cfg, n);
  } catch (const ConfigError& e) {
    std::cerr << "config error: " << e.what() << '\n';
    return 2;
  } catch (const std::exception& e) {
    std::cerr << "error: " << e.what() << '\n';
    return 1;
  }
}
