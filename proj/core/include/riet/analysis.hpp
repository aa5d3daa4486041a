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

// Post-processing: transfer-rate fits, the RHP non-Markovianity measure and
// the oscillator truncation study.

#pragma once

#include <optional>
#include <span>
#include <utility>
#include <vector>

#include "riet/dynamics.hpp"
#include "riet/model.hpp"

namespace riet {

struct RateFit {
  double k = 0.0;  // 1 / (user time unit)
  double p0 = 0.0;
  double r_squared = 0.0;
  double residual_norm = 0.0;
  bool converged = false;
};

/// Levenberg-Marquardt fit of P0 exp(-k t) to the donor population.
/// Never throws on bad data; returns converged = false instead.
RateFit fit_transfer_rate(const Trajectory& traj);
RateFit fit_exponential(std::span<const double> t, std::span<const double> y);

/// Sum |c_{i+1} - c_i| - (c_0 - c_end). Zero for nonincreasing traces.
double rhp_total_variation(std::span<const double> concurrence);

/// Measures below this are reported as zero in summaries.
inline constexpr double kRhpZeroThreshold = 1e-4;

struct RHPResult {
  double measure = 0.0;
  Trajectory concurrence_trace;  // columns: concurrence
  double delta_e_entanglement = 0.0;  // c_0 - c_end
  Trajectory trajectory;  // extended-system observables plus concurrence

  double summary_measure() const { return measure < kRhpZeroThreshold ? 0.0 : measure; }
};

struct RHPSystem {
  SystemOperators ops;  // electronic (x) oscillator (x) rhp ancilla
  DensityMatrix rho0;
};

/// Adds a non-interacting qubit after the oscillator and prepares
/// (|D,0> + |A,1>)/sqrt2 (x) rho_rc. rho_rc defaults to the thermal state of
/// a^dag a.
RHPSystem build_rhp_system(const SystemOperators& ops, const ModelParams& params,
                           const std::optional<Matrix>& rho_rc = std::nullopt);

struct RHPEngine {
  enum class Kind { Lindblad, RI } kind = Kind::Lindblad;
  double step = 1e-3;     // dt for Lindblad, tau for RI
  int record_stride = 100;
  int trotter_n = 0;      // RI only
  TrotterSplit trotter_split = TrotterSplit::Shift;
};

RHPResult rhp_measure(const SystemOperators& ops, const ModelParams& params,
                      const RHPEngine& engine, double t_max,
                      const std::optional<Matrix>& rho_rc = std::nullopt);

/// Concurrence between the electronic qubit and the RHP ancilla.
Observable rhp_concurrence_observable(const Dims& dims);

struct TruncationRow {
  int n_levels;
  double k;
  double mean_q0;
};

/// Lindblad rate and initial <q> for each oscillator size.
std::vector<TruncationRow> truncation_study(const ModelParams& params, std::span<const int> levels,
                                            double delta_e, const LindbladOptions& opts = {});

}  // namespace riet
