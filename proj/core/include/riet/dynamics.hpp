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

// Time evolution engines.
//
//  * integrate_lindblad: fixed-step RK4 on the master equation (reference).
//  * evolve_ri: repeated interactions with a freshly reset ancilla, using the
//    exact joint unitary or its 2nd-order Trotter factorization.
//  * run_state_preparation: repeated interactions with the donor coupling
//    switched off, starting from the oscillator ground state.
//
// All times passed in or recorded are in the model's user time unit.

#pragma once

#include <functional>
#include <span>
#include <string>
#include <string_view>
#include <vector>

#include <Eigen/Sparse>

#include "riet/linops.hpp"
#include "riet/model.hpp"

namespace riet {

/// Named scalar functional of a system-space density matrix.
struct Observable {
  std::string name;
  std::function<double(const Matrix&)> eval;
};

/// P_<site> for every site, then trace and purity.
std::vector<Observable> standard_observables(const SystemOperators& ops);

class Trajectory {
 public:
  Trajectory() = default;
  Trajectory(std::vector<std::string> names, int record_stride);

  /// Synthetic trajectory from explicit columns (all the same length as times).
  static Trajectory from_columns(std::vector<double> times,
                                 std::vector<std::pair<std::string, std::vector<double>>> columns,
                                 int record_stride = 1);

  void append(double t, std::span<const double> values);

  const std::vector<double>& times() const noexcept { return times_; }
  const std::vector<std::string>& names() const noexcept { return names_; }
  const std::vector<double>& column(std::string_view name) const;
  bool has_column(std::string_view name) const;
  std::size_t size() const noexcept { return times_.size(); }
  int record_stride() const noexcept { return record_stride_; }

 private:
  std::vector<double> times_;
  std::vector<std::string> names_;
  std::vector<std::vector<double>> columns_;
  int record_stride_ = 1;
};

// ----------------------------------------------------------------- Lindblad

struct LindbladOptions {
  double t_max = 1000.0;
  double dt = 1e-3;
  int record_stride = 100;
};

/// Lindblad generator with the Hamiltonian and jump operators held in
/// compressed sparse form. All products are sparse x dense.
class LindbladGenerator {
 public:
  using RowMatrix = Eigen::Matrix<Complex, Eigen::Dynamic, Eigen::Dynamic, Eigen::RowMajor>;
  using Sparse = Eigen::SparseMatrix<Complex, Eigen::RowMajor>;

  LindbladGenerator(const Operator& h, const Operator& jump, double gamma, double nbar);
  explicit LindbladGenerator(const SystemOperators& ops);

  Eigen::Index dim() const noexcept { return dim_; }

  /// out = L(rho) for Hermitian rho.
  void apply_hermitian(const RowMatrix& rho, RowMatrix& out) const;
  /// out = L(rho) for any rho.
  void apply(const RowMatrix& rho, RowMatrix& out) const;

 private:
  Eigen::Index dim_;
  Sparse h_eff_;  // H - (i/2)(c_down L^dag L + c_up L L^dag)
  Sparse jump_;
  Sparse jump_dag_;
  double c_down_;  // gamma (1 + nbar)
  double c_up_;    // gamma nbar
  mutable RowMatrix t1_, t2_;
};

/// -i[H, rho] + gamma(1+nbar) D[L] rho + gamma nbar D[L^dag] rho
Operator lindblad_rhs(const DensityMatrix& rho, const SystemOperators& ops);

Trajectory integrate_lindblad(const DensityMatrix& rho0, const SystemOperators& ops,
                              const LindbladOptions& opts,
                              std::span<const Observable> extra = {});

// ------------------------------------------------------ repeated interaction

/// How H_int / sqrt(tau) is split into two Trotter factors.
///  * Pauli:  c (L + L^dag)/2 (x) sx  and  c i(L - L^dag)/2 (x) sy. Both
///    Hermitian, so every factor is unitary.
///  * Ladder: c L (x) |0><1|  and  c L^dag (x) |1><0|. Nilpotent, exponentiated
///    as I - i t X. The product is not unitary and the trace drifts.
///  * Shift:  c (a (x) |0><1| + h.c.)  and  c (L - a) (x) sx, the oscillator
///    and displacement parts of L. Both Hermitian.
enum class TrotterSplit { Pauli, Ladder, Shift };

std::string_view to_string(TrotterSplit split);
TrotterSplit trotter_split_from_string(std::string_view name);

struct RIConfig {
  double tau = 0.1;       // interaction duration, user time unit
  long steps = 10000;     // number of interactions
  int trotter_n = 0;      // 0 = exact joint unitary
  TrotterSplit trotter_split = TrotterSplit::Shift;
  int record_stride = 1;  // record every this many interactions

  void validate() const;
};

/// exp(-i tau_int (H (x) I_a + H_int / sqrt(tau_int))) with tau_int = tau *
/// time_scale. Uses h0_et instead of h_et when state_prep is set.
Operator build_ri_unitary(const SystemOperators& ops, double tau, bool state_prep);

/// Tr_a{ U (rho (x) eta) U^dag }, re-Hermitized.
DensityMatrix ri_step(const DensityMatrix& rho, const Operator& u, const DensityMatrix& eta);

/// The single-interaction map written as Kraus operators
/// K_jk = sqrt(p_k) <j|_a U |e_k>_a, where eta = sum_k p_k |e_k><e_k|.
class RepeatedInteractionChannel {
 public:
  RepeatedInteractionChannel(const Matrix& u, const Matrix& eta);

  Eigen::Index dim() const noexcept { return dim_; }
  const std::vector<Matrix>& kraus() const noexcept { return kraus_; }

  /// rho <- sum K rho K^dag. `scratch` is resized as needed.
  void apply(Matrix& rho, Matrix& scratch, Matrix& acc) const;

 private:
  Eigen::Index dim_;
  std::vector<Matrix> kraus_;
};

/// 2nd-order Trotter approximation of build_ri_unitary for the DA model with
/// n symmetric steps. The six factors are the four H_DA terms and the two
/// interaction terms (see TrotterSplit), sorted by descending |coefficient|
/// with ties kept in canonical order. With c = sqrt(gamma(2 nbar + 1)/tau_int).
Operator build_trotter_unitary(const SystemOperators& ops, double tau, int n,
                               bool state_prep = false,
                               TrotterSplit split = TrotterSplit::Shift);

/// Terms and order used by build_trotter_unitary, for inspection.
std::vector<ScaledTerm> trotter_factor_order(const SystemOperators& ops, double tau,
                                             bool state_prep = false,
                                             TrotterSplit split = TrotterSplit::Shift);

/// Apply the repeated-interaction map cfg.steps times. Exact mode throws
/// IntegrationDivergedError if the trace drifts by more than 1e-6. When
/// state_prep is set a `fidelity` column against the thermal donor state is
/// recorded as well.
Trajectory evolve_ri(const DensityMatrix& rho0, const SystemOperators& ops, const RIConfig& cfg,
                     bool state_prep, std::span<const Observable> extra = {});

/// |D><D| (x) |0><0| evolved with the state-preparation interaction.
Trajectory run_state_preparation(const SystemOperators& ops, const RIConfig& cfg,
                                 const ModelParams& params);

/// Starting state of run_state_preparation.
DensityMatrix state_preparation_start(const SystemOperators& ops);

}  // namespace riet
