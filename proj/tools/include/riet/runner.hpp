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

// Orchestration of single runs and sweeps, and their on-disk outputs.

#pragma once

#include <filesystem>
#include <optional>
#include <ostream>
#include <string>
#include <vector>

#include "riet/analysis.hpp"
#include "riet/config.hpp"

namespace riet::cli {

struct RunResult {
  Trajectory trajectory;
  RateFit fit;
  std::optional<RHPResult> rhp;
  double wall_seconds = 0.0;
};

/// Runs the configured method once (ignores any sweep).
RunResult run_single(const RunConfig& cfg);

struct SweepRow {
  double delta_e = 0.0;
  double tau = 0.0;
  int trotter_n = 0;
  RateFit fit;
  std::optional<double> rhp_measure;
  std::optional<double> rhp_delta_e;
  std::string error;  // empty on success
};

/// Config for one sweep point.
RunConfig sweep_point(const RunConfig& cfg, double value);

/// Evaluates every sweep value on a pool of `threads` workers. Rows come back
/// in sweep order. Engine failures are captured per row.
std::vector<SweepRow> run_sweep(const RunConfig& cfg, int threads);

/// Shortest round-trip decimal.
std::string format_double(double x);

void write_trajectory_csv(std::ostream& out, const Trajectory& traj);
void write_sweep_csv(std::ostream& out, const std::vector<SweepRow>& rows);
void write_rhp_sweep_csv(std::ostream& out, const std::vector<SweepRow>& rows);

/// manifest.json contents.
std::string manifest_json(const RunConfig& cfg, double wall_seconds, const RunResult* single,
                          const std::vector<SweepRow>* sweep, int threads);

/// Thread count from the flag, then RI_ET_THREADS, then the hardware.
int resolve_threads(std::optional<int> flag);

}  // namespace riet::cli
