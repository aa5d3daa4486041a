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

// Physical model: donor-acceptor (DA) and donor-bridge-acceptor (DBA)
// electron transfer with a damped reaction-coordinate oscillator.
//
// Internally hbar = omega = 1. Energies are in units of hbar*omega. User-facing
// times (interaction duration, simulation window, step sizes) and the damping
// rate are given in a configurable time unit; see TimeUnit.

#pragma once

#include <array>
#include <optional>
#include <string>
#include <string_view>
#include <vector>

#include "riet/linops.hpp"

namespace riet {

enum class ModelKind { DA, DBA };

/// Unit of user-facing times. `Period` is 2*pi/omega; `InverseOmega` is 1/omega.
/// The damping rate is always expressed in the reciprocal unit, so that
/// gamma_internal = gamma_cfg / time_scale and t_internal = t * time_scale.
enum class TimeUnit { Period, InverseOmega };

double time_scale(TimeUnit unit);
std::string_view to_string(TimeUnit unit);
TimeUnit time_unit_from_string(std::string_view name);

std::string_view to_string(ModelKind kind);

struct ModelParams {
  ModelKind kind = ModelKind::DA;
  std::optional<double> delta_e;  // DA only
  double v = 0.1;
  std::optional<double> lambda;  // DA only
  double kbt = 1.0;
  double gamma_cfg = 0.01;
  int n_levels = 16;
  std::optional<std::array<double, 4>> dba_site_energies;  // DBA only, order D, B1, B2, A
  std::optional<std::array<double, 4>> dba_positions;      // DBA only
  TimeUnit time_unit = TimeUnit::InverseOmega;

  /// Throws ArgumentError naming the offending field.
  void validate() const;

  double time_scale() const { return riet::time_scale(time_unit); }
  double gamma_internal() const { return gamma_cfg / time_scale(); }
  int electronic_dim() const { return kind == ModelKind::DA ? 2 : 4; }
};

enum class Preset { WeaklyCoupled, StronglyDamped, StronglyCoupled, HighTemperature, Dba };

std::string_view to_string(Preset preset);
Preset preset_from_string(std::string_view name);
std::vector<Preset> all_presets();

/// Parameter set for a preset. DA presets carry their peak-rate energy gap
/// as the default delta_e.
ModelParams preset_params(Preset preset);
/// Energy gap with the largest transfer rate for each DA preset.
double preset_peak_delta_e(Preset preset);
/// Interaction duration at which the repeated-interaction dynamics converge.
double preset_converged_tau(Preset preset);

/// A Hamiltonian term `coefficient * op` with op normalized (unit prefactor).
struct ScaledTerm {
  std::string label;
  double coefficient;
  Operator op;
  bool hermitian = true;  // false for the nilpotent interaction halves
};

struct SystemOperators {
  ModelKind kind = ModelKind::DA;
  Operator h_et;      // electronic (x) oscillator
  Operator h0_et;     // state-preparation Hamiltonian (donor coupling removed)
  Operator jump;      // L
  Operator jump_dag;  // L^dagger
  Operator h_int;     // system (x) ancilla
  double nbar = 0.0;
  double gamma = 0.0;  // internal units
  double kbt = 1.0;
  double time_scale = 1.0;
  int n_levels = 0;
  std::vector<Operator> site_projectors;
  std::vector<std::string> site_names;
  /// DA only: the four terms of H_DA in canonical order
  /// (dE/2 sz, V sx, a^dag a, sqrt(lambda) sz q), each tensored with the
  /// identity on every factor after the electronic and oscillator ones.
  std::vector<ScaledTerm> h_terms;

  Dims system_dims() const { return h_et.dims(); }
};

struct OscillatorOps {
  Operator a;
  Operator adag;
  Operator q;
  Operator p;
};

/// Truncated ladder operators with q = (a^dag + a)/2 and p = i(a^dag - a)/2.
OscillatorOps oscillator_ops(int n_levels);

/// Bose-Einstein occupation 1/(exp(1/kbt) - 1) with kbt in hbar*omega.
double thermal_occupation(double kbt);

/// |0><1| on the ancilla qubit. The jump operator L is paired with this
/// transition so that the (nbar+1)-weighted |1> population of the ancilla
/// produces the gamma*(1+nbar) D[L] term of the master equation.
Operator ancilla_lowering();
/// |1><0| on the ancilla qubit, paired with L^dagger.
Operator ancilla_raising();

/// sqrt(gamma*(2 nbar + 1)) (L (x) |0><1| + L^dag (x) |1><0|).
Operator interaction_hamiltonian(const Operator& jump, double gamma, double nbar);

SystemOperators build_da(const ModelParams& params);
SystemOperators build_dba(const ModelParams& params);
/// Dispatches on params.kind.
SystemOperators build_system(const ModelParams& params);

/// diag(nbar, nbar+1)/(2 nbar + 1) in the (|0>_a, |1>_a) basis.
DensityMatrix build_ancilla_state(double nbar);

/// Electron on the donor, oscillator in the thermal state of the donor
/// block of h_et.
DensityMatrix build_initial_state(const SystemOperators& ops, const ModelParams& params);
DensityMatrix build_initial_state(const SystemOperators& ops);

/// Thermal state exp(-h/kbt)/Z of a Hermitian matrix.
Matrix thermal_state(const Matrix& h, double kbt);

/// Expectation of the oscillator position q in a system-space state.
double mean_position(const DensityMatrix& rho, int n_levels);

}  // namespace riet
