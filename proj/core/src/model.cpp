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

#include "riet/model.hpp"

#include <cmath>
#include <numbers>

#include <Eigen/Eigenvalues>

#include "riet/errors.hpp"

namespace riet {
namespace {

constexpr std::array<const char*, 4> kDbaSites{"D", "B1", "B2", "A"};

Operator electronic_projector(int dim, int site) {
  Matrix m = Matrix::Zero(dim, dim);
  m(site, site) = 1.0;
  return Operator(m);
}

Operator pauli_z() {
  Matrix m = Matrix::Zero(2, 2);
  m(0, 0) = 1.0;
  m(1, 1) = -1.0;
  return Operator(m);
}

Operator pauli_x() {
  Matrix m = Matrix::Zero(2, 2);
  m(0, 1) = 1.0;
  m(1, 0) = 1.0;
  return Operator(m);
}

void finish(SystemOperators& ops, const ModelParams& params) {
  ops.jump_dag = ops.jump.adjoint();
  ops.nbar = thermal_occupation(params.kbt);
  ops.gamma = params.gamma_internal();
  ops.kbt = params.kbt;
  ops.time_scale = params.time_scale();
  ops.n_levels = params.n_levels;
  ops.h_int = interaction_hamiltonian(ops.jump, ops.gamma, ops.nbar);
  const int ne = params.electronic_dim();
  const Operator id_osc = Operator::identity({params.n_levels});
  for (int s = 0; s < ne; ++s) {
    ops.site_projectors.push_back(kron(electronic_projector(ne, s), id_osc));
  }
}

}  // namespace

double time_scale(TimeUnit unit) {
  return unit == TimeUnit::Period ? 2.0 * std::numbers::pi : 1.0;
}

std::string_view to_string(TimeUnit unit) {
  return unit == TimeUnit::Period ? "period" : "inverse_omega";
}

TimeUnit time_unit_from_string(std::string_view name) {
  if (name == "period") return TimeUnit::Period;
  if (name == "inverse_omega") return TimeUnit::InverseOmega;
  throw ArgumentError("unknown time unit '" + std::string(name) + "'");
}

std::string_view to_string(ModelKind kind) { return kind == ModelKind::DA ? "DA" : "DBA"; }

void ModelParams::validate() const {
  if (n_levels < 2) throw ArgumentError("n_levels: must be >= 2");
  if (!(kbt > 0.0)) throw ArgumentError("kbt: must be > 0");
  if (!(gamma_cfg >= 0.0)) throw ArgumentError("gamma_cfg: must be >= 0");
  if (!std::isfinite(v)) throw ArgumentError("v: must be finite");
  if (delta_e && !std::isfinite(*delta_e)) throw ArgumentError("delta_e: must be finite");
  if (kind == ModelKind::DA) {
    if (!delta_e) throw ArgumentError("delta_e: required for a DA model");
    if (!lambda) throw ArgumentError("lambda: required for a DA model");
    if (!(*lambda >= 0.0)) throw ArgumentError("lambda: must be >= 0");
    if (dba_site_energies) throw ArgumentError("dba_site_energies: only valid for a DBA model");
    if (dba_positions) throw ArgumentError("dba_positions: only valid for a DBA model");
  } else {
    if (!dba_site_energies) throw ArgumentError("dba_site_energies: required for a DBA model");
    if (!dba_positions) throw ArgumentError("dba_positions: required for a DBA model");
    if (delta_e) throw ArgumentError("delta_e: only valid for a DA model");
    if (lambda) throw ArgumentError("lambda: only valid for a DA model");
  }
}

// ----------------------------------------------------------------- presets

std::string_view to_string(Preset preset) {
  switch (preset) {
    case Preset::WeaklyCoupled: return "weakly_coupled";
    case Preset::StronglyDamped: return "strongly_damped";
    case Preset::StronglyCoupled: return "strongly_coupled";
    case Preset::HighTemperature: return "high_temperature";
    case Preset::Dba: return "dba";
  }
  return "?";
}

Preset preset_from_string(std::string_view name) {
  for (Preset p : all_presets()) {
    if (to_string(p) == name) return p;
  }
  throw ArgumentError("unknown preset '" + std::string(name) + "'");
}

std::vector<Preset> all_presets() {
  return {Preset::WeaklyCoupled, Preset::StronglyDamped, Preset::StronglyCoupled,
          Preset::HighTemperature, Preset::Dba};
}

ModelParams preset_params(Preset preset) {
  ModelParams p;
  p.v = 0.1;
  p.kbt = 1.0;
  p.gamma_cfg = 0.01;
  p.n_levels = 16;
  switch (preset) {
    case Preset::WeaklyCoupled:
      p.lambda = 1.0;
      break;
    case Preset::StronglyDamped:
      p.lambda = 1.0;
      p.gamma_cfg = 1.0 / (2.0 * std::numbers::pi);
      break;
    case Preset::StronglyCoupled:
      p.lambda = 1.0;
      p.v = 1.0;
      break;
    case Preset::HighTemperature:
      p.lambda = 20.0;
      p.kbt = 2.0;
      p.gamma_cfg = 0.1;
      p.n_levels = 32;
      break;
    case Preset::Dba:
      p.kind = ModelKind::DBA;
      p.dba_site_energies = std::array<double, 4>{5.0, 4.0, 3.0, 0.0};
      p.dba_positions = std::array<double, 4>{0.0, 1.0, 2.0, 3.0};
      return p;
  }
  p.delta_e = preset_peak_delta_e(preset);
  return p;
}

double preset_peak_delta_e(Preset preset) {
  switch (preset) {
    case Preset::WeaklyCoupled: return 3.0;
    case Preset::StronglyDamped: return 2.0;
    case Preset::StronglyCoupled: return 4.4;
    case Preset::HighTemperature: return 20.0;
    case Preset::Dba: break;
  }
  throw ArgumentError("preset has no energy-gap parameter");
}

double preset_converged_tau(Preset preset) {
  return preset == Preset::HighTemperature ? 0.01 : 0.1;
}

// ------------------------------------------------------------- operators

OscillatorOps oscillator_ops(int n_levels) {
  if (n_levels < 2) throw ArgumentError("oscillator_ops: n_levels must be >= 2");
  Matrix a = Matrix::Zero(n_levels, n_levels);
  for (int n = 1; n < n_levels; ++n) a(n - 1, n) = std::sqrt(static_cast<double>(n));
  Matrix adag = a.adjoint();
  Matrix q = 0.5 * (adag + a);
  Matrix p = 0.5 * kI * (adag - a);
  return {Operator(a), Operator(adag), Operator(q), Operator(p)};
}

double thermal_occupation(double kbt) {
  if (!(kbt > 0.0)) throw ArgumentError("thermal_occupation: kbt must be > 0");
  // expm1 keeps precision for large kbt; for tiny kbt the result underflows to 0.
  return 1.0 / std::expm1(1.0 / kbt);
}

Operator ancilla_lowering() {
  Matrix m = Matrix::Zero(2, 2);
  m(0, 1) = 1.0;
  return Operator(m);
}

Operator ancilla_raising() {
  Matrix m = Matrix::Zero(2, 2);
  m(1, 0) = 1.0;
  return Operator(m);
}

Operator interaction_hamiltonian(const Operator& jump, double gamma, double nbar) {
  const double c = std::sqrt(gamma * (2.0 * nbar + 1.0));
  Operator h = kron(jump, ancilla_lowering()) + kron(jump.adjoint(), ancilla_raising());
  h *= Complex(c);
  return h;
}

SystemOperators build_da(const ModelParams& params) {
  if (params.kind != ModelKind::DA) throw ArgumentError("build_da: model kind is not DA");
  params.validate();
  const int n = params.n_levels;
  const double de = *params.delta_e;
  const double sl = std::sqrt(*params.lambda);
  const OscillatorOps osc = oscillator_ops(n);
  const Operator id_e = Operator::identity({2});
  const Operator id_n = Operator::identity({n});
  const Operator sz = pauli_z();
  const Operator sx = pauli_x();

  SystemOperators ops;
  ops.kind = ModelKind::DA;
  ops.h_terms = {
      {"delta_e/2 sz", 0.5 * de, kron(sz, id_n)},
      {"v sx", params.v, kron(sx, id_n)},
      {"adag a", 1.0, kron(id_e, osc.adag * osc.a)},
      {"sqrt(lambda) sz q", sl, kron(sz, osc.q)},
  };
  ops.h_et = Operator::zero({2, n});
  for (const ScaledTerm& t : ops.h_terms) ops.h_et += t.op * t.coefficient;
  ops.h0_et = ops.h_et - ops.h_terms[1].op * params.v;
  // L = a - delta with delta = -(sqrt(lambda)/2) sz.
  ops.jump = kron(id_e, osc.a) + kron(sz, id_n) * (0.5 * sl);
  ops.site_names = {"D", "A"};
  finish(ops, params);
  return ops;
}

SystemOperators build_dba(const ModelParams& params) {
  if (params.kind != ModelKind::DBA) throw ArgumentError("build_dba: model kind is not DBA");
  params.validate();
  const int n = params.n_levels;
  const auto& eps = *params.dba_site_energies;
  const auto& pos = *params.dba_positions;
  const OscillatorOps osc = oscillator_ops(n);
  const Operator id_n = Operator::identity({n});
  const Operator id_e = Operator::identity({4});

  SystemOperators ops;
  ops.kind = ModelKind::DBA;
  ops.h_et = kron(id_e, osc.p * osc.p);
  Matrix shift = Matrix::Zero(4, 4);
  for (int s = 0; s < 4; ++s) {
    const Operator dq = osc.q - id_n * pos[s];
    ops.h_et += kron(electronic_projector(4, s), id_n * eps[s] + dq * dq);
    shift(s, s) = pos[s];
  }
  Matrix hop = Matrix::Zero(4, 4);
  for (int s = 0; s + 1 < 4; ++s) {
    hop(s, s + 1) = params.v;
    hop(s + 1, s) = params.v;
  }
  ops.h_et += kron(Operator(hop), id_n);
  Matrix donor_hop = Matrix::Zero(4, 4);
  donor_hop(0, 1) = params.v;
  donor_hop(1, 0) = params.v;
  ops.h0_et = ops.h_et - kron(Operator(donor_hop), id_n);
  ops.jump = kron(id_e, osc.a) - kron(Operator(shift), id_n);
  ops.site_names.assign(kDbaSites.begin(), kDbaSites.end());
  finish(ops, params);
  return ops;
}

SystemOperators build_system(const ModelParams& params) {
  return params.kind == ModelKind::DA ? build_da(params) : build_dba(params);
}

DensityMatrix build_ancilla_state(double nbar) {
  if (!(nbar >= 0.0)) throw ArgumentError("build_ancilla_state: nbar must be >= 0");
  Matrix m = Matrix::Zero(2, 2);
  m(0, 0) = nbar / (2.0 * nbar + 1.0);
  m(1, 1) = (nbar + 1.0) / (2.0 * nbar + 1.0);
  return DensityMatrix(Operator(m));
}

Matrix thermal_state(const Matrix& h, double kbt) {
  const EigenDecomposition ed = herm_eig(h);
  const double e0 = ed.eigenvalues(0);
  RealVector w = ((ed.eigenvalues.array() - e0) * (-1.0 / kbt)).exp();
  w /= w.sum();
  Matrix out = ed.eigenvectors * w.cast<Complex>().asDiagonal() * ed.eigenvectors.adjoint();
  hermitize(out);
  return out;
}

DensityMatrix build_initial_state(const SystemOperators& ops) {
  const int n = ops.n_levels;
  const Eigen::Index ne = ops.h_et.dim() / n;
  const Matrix donor_block = ops.h_et.matrix().topLeftCorner(n, n);
  Matrix rho = Matrix::Zero(ne * n, ne * n);
  rho.topLeftCorner(n, n) = thermal_state(donor_block, ops.kbt);
  return DensityMatrix(Operator(std::move(rho), ops.h_et.dims()));
}

DensityMatrix build_initial_state(const SystemOperators& ops, const ModelParams& params) {
  if (params.n_levels != ops.n_levels || params.kbt != ops.kbt) {
    throw ArgumentError("build_initial_state: params do not match the operators");
  }
  return build_initial_state(ops);
}

double mean_position(const DensityMatrix& rho, int n_levels) {
  const Operator q = oscillator_ops(n_levels).q;
  const Eigen::Index ne = rho.dim() / n_levels;
  const Matrix q_full = kron(Matrix::Identity(ne, ne), q.matrix());
  return (rho.matrix() * q_full).trace().real();
}

}  // namespace riet
