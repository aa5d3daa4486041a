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

#include "riet/dynamics.hpp"

#include <algorithm>
#include <cmath>
#include <numeric>

#include <Eigen/Eigenvalues>

#include "riet/errors.hpp"

namespace riet {
namespace {

constexpr double kTraceDriftTol = 1e-6;

LindbladGenerator::Sparse to_sparse(const Matrix& m) {
  const double cutoff = 1e-15 * std::max(1.0, m.cwiseAbs().maxCoeff());
  LindbladGenerator::Sparse s = m.sparseView(1.0, cutoff);
  s.makeCompressed();
  return s;
}

std::vector<Observable> observables_with(const SystemOperators& ops,
                                         std::span<const Observable> extra) {
  std::vector<Observable> obs = standard_observables(ops);
  obs.insert(obs.end(), extra.begin(), extra.end());
  return obs;
}

std::vector<std::string> names_of(const std::vector<Observable>& obs) {
  std::vector<std::string> names;
  names.reserve(obs.size());
  for (const auto& o : obs) names.push_back(o.name);
  return names;
}

void record(Trajectory& traj, double t, const std::vector<Observable>& obs, const Matrix& rho,
            std::vector<double>& row) {
  row.resize(obs.size());
  for (std::size_t i = 0; i < obs.size(); ++i) row[i] = obs[i].eval(rho);
  traj.append(t, row);
}

Matrix power(Matrix base, long exponent) {
  Matrix result = Matrix::Identity(base.rows(), base.cols());
  while (exponent > 0) {
    if (exponent & 1) result = result * base;
    exponent >>= 1;
    if (exponent > 0) base = base * base;
  }
  return result;
}

}  // namespace

// --------------------------------------------------------------- observables

std::vector<Observable> standard_observables(const SystemOperators& ops) {
  std::vector<Observable> obs;
  for (std::size_t s = 0; s < ops.site_projectors.size(); ++s) {
    Eigen::VectorXd diag = ops.site_projectors[s].matrix().diagonal().real();
    obs.push_back({"P_" + ops.site_names[s], [diag](const Matrix& rho) {
                     return (diag.array() * rho.diagonal().real().array()).sum();
                   }});
  }
  obs.push_back({"trace", [](const Matrix& rho) { return rho.trace().real(); }});
  obs.push_back({"purity", [](const Matrix& rho) { return (rho * rho).trace().real(); }});
  return obs;
}

// ---------------------------------------------------------------- Trajectory

Trajectory::Trajectory(std::vector<std::string> names, int record_stride)
    : names_(std::move(names)), columns_(names_.size()), record_stride_(record_stride) {}

Trajectory Trajectory::from_columns(std::vector<double> times,
                                    std::vector<std::pair<std::string, std::vector<double>>> columns,
                                    int record_stride) {
  Trajectory traj;
  traj.record_stride_ = record_stride;
  for (auto& [name, values] : columns) {
    if (values.size() != times.size()) {
      throw ArgumentError("trajectory column '" + name + "' length differs from time grid");
    }
    traj.names_.push_back(name);
    traj.columns_.push_back(std::move(values));
  }
  traj.times_ = std::move(times);
  return traj;
}

void Trajectory::append(double t, std::span<const double> values) {
  if (values.size() != columns_.size()) throw ArgumentError("trajectory row has wrong width");
  if (!times_.empty() && !(t > times_.back())) {
    throw ArgumentError("trajectory times must be strictly increasing");
  }
  times_.push_back(t);
  for (std::size_t i = 0; i < values.size(); ++i) columns_[i].push_back(values[i]);
}

const std::vector<double>& Trajectory::column(std::string_view name) const {
  for (std::size_t i = 0; i < names_.size(); ++i) {
    if (names_[i] == name) return columns_[i];
  }
  throw ArgumentError("trajectory has no column '" + std::string(name) + "'");
}

bool Trajectory::has_column(std::string_view name) const {
  return std::find(names_.begin(), names_.end(), name) != names_.end();
}

// ----------------------------------------------------------------- Lindblad

LindbladGenerator::LindbladGenerator(const Operator& h, const Operator& jump, double gamma,
                                     double nbar)
    : dim_(h.dim()), c_down_(gamma * (1.0 + nbar)), c_up_(gamma * nbar) {
  if (jump.dim() != dim_) throw ArgumentError("LindbladGenerator: jump/Hamiltonian size mismatch");
  const Matrix& l = jump.matrix();
  const Matrix ld = l.adjoint();
  const Matrix k = c_down_ * (ld * l) + c_up_ * (l * ld);
  h_eff_ = to_sparse(h.matrix() - 0.5 * kI * k);
  jump_ = to_sparse(l);
  jump_dag_ = to_sparse(ld);
  t1_.resize(dim_, dim_);
  t2_.resize(dim_, dim_);
}

LindbladGenerator::LindbladGenerator(const SystemOperators& ops)
    : LindbladGenerator(ops.h_et, ops.jump, ops.gamma, ops.nbar) {}

void LindbladGenerator::apply_hermitian(const RowMatrix& rho, RowMatrix& out) const {
  // -i(H_eff rho - rho H_eff^dag) = -i(A - A^dag) with A = H_eff rho.
  out.noalias() = h_eff_ * rho;
  t1_ = out.adjoint();
  out = kI * (t1_ - out);
  // L rho L^dag = L (L rho)^dag for Hermitian rho.
  if (c_down_ != 0.0) {
    t1_.noalias() = jump_ * rho;
    t2_ = t1_.adjoint();
    t1_.noalias() = jump_ * t2_;
    out += c_down_ * t1_;
  }
  if (c_up_ != 0.0) {
    t1_.noalias() = jump_dag_ * rho;
    t2_ = t1_.adjoint();
    t1_.noalias() = jump_dag_ * t2_;
    out += c_up_ * t1_;
  }
}

void LindbladGenerator::apply(const RowMatrix& rho, RowMatrix& out) const {
  const RowMatrix rho_dag = rho.adjoint();
  // rho H_eff^dag = (H_eff rho^dag)^dag
  t1_.noalias() = h_eff_ * rho_dag;
  t2_ = t1_.adjoint();
  out.noalias() = h_eff_ * rho;
  out = kI * (t2_ - out);
  // L rho L^dag = L (L rho^dag)^dag
  if (c_down_ != 0.0) {
    t1_.noalias() = jump_ * rho_dag;
    t2_ = t1_.adjoint();
    t1_.noalias() = jump_ * t2_;
    out += c_down_ * t1_;
  }
  if (c_up_ != 0.0) {
    t1_.noalias() = jump_dag_ * rho_dag;
    t2_ = t1_.adjoint();
    t1_.noalias() = jump_dag_ * t2_;
    out += c_up_ * t1_;
  }
}

Operator lindblad_rhs(const DensityMatrix& rho, const SystemOperators& ops) {
  if (rho.dim() != ops.h_et.dim()) throw ArgumentError("lindblad_rhs: dimension mismatch");
  const LindbladGenerator gen(ops);
  LindbladGenerator::RowMatrix in = rho.matrix();
  LindbladGenerator::RowMatrix out(in.rows(), in.cols());
  gen.apply(in, out);
  return Operator(Matrix(out), rho.dims());
}

Trajectory integrate_lindblad(const DensityMatrix& rho0, const SystemOperators& ops,
                              const LindbladOptions& opts, std::span<const Observable> extra) {
  if (!(opts.dt > 0.0)) throw ArgumentError("integrate_lindblad: dt must be > 0");
  if (!(opts.t_max >= opts.dt)) throw ArgumentError("integrate_lindblad: t_max must be >= dt");
  if (opts.record_stride < 1) throw ArgumentError("integrate_lindblad: record_stride must be >= 1");
  if (rho0.dim() != ops.h_et.dim()) throw ArgumentError("integrate_lindblad: dimension mismatch");

  using RowMatrix = LindbladGenerator::RowMatrix;
  const LindbladGenerator gen(ops);
  const long steps = std::lround(opts.t_max / opts.dt);
  const double h = opts.dt * ops.time_scale;
  const Eigen::Index d = rho0.dim();

  const std::vector<Observable> obs = observables_with(ops, extra);
  Trajectory traj(names_of(obs), opts.record_stride);
  std::vector<double> row;

  RowMatrix rho = rho0.matrix();
  RowMatrix k1(d, d), k2(d, d), k3(d, d), k4(d, d), stage(d, d), adj(d, d);
  const double trace0 = rho.trace().real();
  record(traj, 0.0, obs, Matrix(rho), row);

  for (long step = 1; step <= steps; ++step) {
    gen.apply_hermitian(rho, k1);
    stage = rho + (0.5 * h) * k1;
    gen.apply_hermitian(stage, k2);
    stage = rho + (0.5 * h) * k2;
    gen.apply_hermitian(stage, k3);
    stage = rho + h * k3;
    gen.apply_hermitian(stage, k4);
    rho += (h / 6.0) * (k1 + 2.0 * k2 + 2.0 * k3 + k4);

    adj = rho.adjoint();
    rho = 0.5 * (rho + adj);
    const double tr = rho.trace().real();
    if (!std::isfinite(tr) || std::abs(tr - trace0) > kTraceDriftTol) {
      throw IntegrationDivergedError("Lindblad integration lost trace", step);
    }
    if (step % opts.record_stride == 0) {
      record(traj, static_cast<double>(step) * opts.dt, obs, Matrix(rho), row);
    }
  }
  return traj;
}

// ------------------------------------------------------ repeated interaction

std::string_view to_string(TrotterSplit split) {
  switch (split) {
    case TrotterSplit::Pauli: return "pauli";
    case TrotterSplit::Ladder: return "ladder";
    case TrotterSplit::Shift: return "shift";
  }
  return "?";
}

TrotterSplit trotter_split_from_string(std::string_view name) {
  if (name == "pauli") return TrotterSplit::Pauli;
  if (name == "ladder") return TrotterSplit::Ladder;
  if (name == "shift") return TrotterSplit::Shift;
  throw ArgumentError("unknown Trotter split '" + std::string(name) + "'");
}

void RIConfig::validate() const {
  if (!(tau > 0.0)) throw ArgumentError("RIConfig: tau must be > 0");
  if (steps < 1) throw ArgumentError("RIConfig: steps must be >= 1");
  if (trotter_n < 0) throw ArgumentError("RIConfig: trotter_n must be >= 0");
  if (record_stride < 1) throw ArgumentError("RIConfig: record_stride must be >= 1");
}

Operator build_ri_unitary(const SystemOperators& ops, double tau, bool state_prep) {
  if (!(tau > 0.0)) throw ArgumentError("build_ri_unitary: tau must be > 0");
  const double tau_int = tau * ops.time_scale;
  const Operator& h_sel = state_prep ? ops.h0_et : ops.h_et;
  const Operator joint = kron(h_sel, Operator::identity({2})) + ops.h_int * (1.0 / std::sqrt(tau_int));
  return expm_i_herm(joint, tau_int);
}

DensityMatrix ri_step(const DensityMatrix& rho, const Operator& u, const DensityMatrix& eta) {
  if (u.dim() != rho.dim() * eta.dim()) throw ArgumentError("ri_step: dimension mismatch");
  const Matrix joint = kron(rho.matrix(), eta.matrix());
  const Operator evolved(u.matrix() * joint * u.matrix().adjoint(), u.dims());
  std::vector<int> keep(rho.dims().size());
  std::iota(keep.begin(), keep.end(), 0);
  Matrix reduced = partial_trace(evolved, keep).matrix();
  hermitize(reduced);
  return DensityMatrix::unchecked(Operator(std::move(reduced), rho.dims()));
}

RepeatedInteractionChannel::RepeatedInteractionChannel(const Matrix& u, const Matrix& eta) {
  const Eigen::Index da = eta.rows();
  if (da < 1 || u.rows() % da != 0) {
    throw ArgumentError("RepeatedInteractionChannel: dimension mismatch");
  }
  dim_ = u.rows() / da;
  const EigenDecomposition ed = herm_eig(eta);
  for (Eigen::Index k = 0; k < da; ++k) {
    const double p = ed.eigenvalues(k);
    if (p <= 1e-15) continue;
    const Eigen::VectorXcd e = ed.eigenvectors.col(k);
    for (Eigen::Index j = 0; j < da; ++j) {
      Matrix kr = Matrix::Zero(dim_, dim_);
      for (Eigen::Index c = 0; c < dim_; ++c) {
        for (Eigen::Index r = 0; r < dim_; ++r) {
          Complex acc = 0.0;
          for (Eigen::Index m = 0; m < da; ++m) acc += u(r * da + j, c * da + m) * e(m);
          kr(r, c) = acc;
        }
      }
      kraus_.push_back(std::sqrt(p) * kr);
    }
  }
}

void RepeatedInteractionChannel::apply(Matrix& rho, Matrix& scratch, Matrix& acc) const {
  acc.setZero(dim_, dim_);
  for (const Matrix& k : kraus_) {
    scratch.noalias() = k * rho;
    acc.noalias() += scratch * k.adjoint();
  }
  rho.swap(acc);
}

std::vector<ScaledTerm> trotter_factor_order(const SystemOperators& ops, double tau,
                                             bool state_prep, TrotterSplit split) {
  if (ops.kind != ModelKind::DA || ops.h_terms.size() != 4) {
    throw UnsupportedModelError("Trotter factorization is only implemented for the DA model");
  }
  if (!(tau > 0.0)) throw ArgumentError("build_trotter_unitary: tau must be > 0");
  const double tau_int = tau * ops.time_scale;
  const Operator id_a = Operator::identity({2});
  std::vector<ScaledTerm> terms;
  for (std::size_t i = 0; i < ops.h_terms.size(); ++i) {
    if (state_prep && i == 1) continue;  // no donor coupling
    const ScaledTerm& t = ops.h_terms[i];
    terms.push_back({t.label, t.coefficient, kron(t.op, id_a), true});
  }
  const double c = std::sqrt(ops.gamma * (2.0 * ops.nbar + 1.0) / tau_int);
  if (split == TrotterSplit::Pauli) {
    Matrix sx = Matrix::Zero(2, 2);
    sx(0, 1) = 1.0;
    sx(1, 0) = 1.0;
    Matrix sy = Matrix::Zero(2, 2);
    sy(0, 1) = -kI;
    sy(1, 0) = kI;
    const Operator q = (ops.jump + ops.jump_dag) * 0.5;
    const Operator p = (ops.jump - ops.jump_dag) * Complex(0.0, 0.5);
    terms.push_back({"c (L + L^dag)/2 sx", c, kron(q, Operator(sx)), true});
    terms.push_back({"c i(L - L^dag)/2 sy", c, kron(p, Operator(sy)), true});
  } else if (split == TrotterSplit::Shift) {
    const int ne = static_cast<int>(ops.h_et.dim()) / ops.n_levels;
    const Operator a = kron(Operator::identity({ne}), oscillator_ops(ops.n_levels).a);
    const Operator shift = ops.jump - a;  // diagonal, Hermitian
    const double s = shift.matrix().cwiseAbs().maxCoeff();
    Matrix sx = Matrix::Zero(2, 2);
    sx(0, 1) = 1.0;
    sx(1, 0) = 1.0;
    terms.push_back({"c (a a_lower + a^dag a_raise)", c,
                     kron(a, ancilla_lowering()) + kron(a.adjoint(), ancilla_raising()), true});
    terms.push_back({"c shift sx", c * s, kron(s > 0.0 ? shift * (1.0 / s) : shift, Operator(sx)),
                     true});
  } else {
    terms.push_back({"c L a_lower", c, kron(ops.jump, ancilla_lowering()), false});
    terms.push_back({"c L^dag a_raise", c, kron(ops.jump_dag, ancilla_raising()), false});
  }
  std::stable_sort(terms.begin(), terms.end(), [](const ScaledTerm& a, const ScaledTerm& b) {
    return std::abs(a.coefficient) > std::abs(b.coefficient);
  });
  return terms;
}

Operator build_trotter_unitary(const SystemOperators& ops, double tau, int n, bool state_prep,
                               TrotterSplit split) {
  if (n < 1) throw ArgumentError("build_trotter_unitary: n must be >= 1");
  const std::vector<ScaledTerm> terms = trotter_factor_order(ops, tau, state_prep, split);
  const double half = tau * ops.time_scale / (2.0 * n);
  std::vector<Matrix> factors;
  for (const ScaledTerm& t : terms) {
    factors.push_back(t.hermitian
                          ? expm_i_herm(t.op.matrix(), half * t.coefficient)
                          : expm_nilpotent2(t.op, Complex(0.0, -half * t.coefficient)).matrix());
  }
  // F_1 F_2 ... F_K F_K ... F_1
  const Eigen::Index d = factors.front().rows();
  Matrix sweep = Matrix::Identity(d, d);
  for (const Matrix& f : factors) sweep = sweep * f;
  for (auto it = factors.rbegin(); it != factors.rend(); ++it) sweep = sweep * (*it);
  return Operator(power(std::move(sweep), n), terms.front().op.dims());
}

Trajectory evolve_ri(const DensityMatrix& rho0, const SystemOperators& ops, const RIConfig& cfg,
                     bool state_prep, std::span<const Observable> extra) {
  cfg.validate();
  if (rho0.dim() != ops.h_et.dim()) throw ArgumentError("evolve_ri: dimension mismatch");
  const bool exact = cfg.trotter_n == 0;
  const Operator u = exact ? build_ri_unitary(ops, cfg.tau, state_prep)
                           : build_trotter_unitary(ops, cfg.tau, cfg.trotter_n, state_prep, cfg.trotter_split);
  const RepeatedInteractionChannel channel(u.matrix(), build_ancilla_state(ops.nbar).matrix());

  std::vector<Observable> obs = observables_with(ops, extra);
  if (state_prep) {
    const Matrix target = build_initial_state(ops).matrix();
    obs.push_back({"fidelity", [target](const Matrix& rho) { return fidelity(rho, target); }});
  }
  Trajectory traj(names_of(obs), cfg.record_stride);
  std::vector<double> row;

  Matrix rho = rho0.matrix();
  Matrix scratch(rho.rows(), rho.cols());
  Matrix acc(rho.rows(), rho.cols());
  const double trace0 = rho.trace().real();
  record(traj, 0.0, obs, rho, row);
  for (long step = 1; step <= cfg.steps; ++step) {
    channel.apply(rho, scratch, acc);
    hermitize(rho);
    if (exact) {
      const double tr = rho.trace().real();
      if (!std::isfinite(tr) || std::abs(tr - trace0) > kTraceDriftTol) {
        throw IntegrationDivergedError("repeated interaction lost trace", step);
      }
    }
    if (step % cfg.record_stride == 0) {
      record(traj, static_cast<double>(step) * cfg.tau, obs, rho, row);
    }
  }
  return traj;
}

DensityMatrix state_preparation_start(const SystemOperators& ops) {
  const Eigen::Index d = ops.h_et.dim();
  Matrix rho = Matrix::Zero(d, d);
  rho(0, 0) = 1.0;  // |D> (x) |0>
  return DensityMatrix(Operator(std::move(rho), ops.h_et.dims()));
}

Trajectory run_state_preparation(const SystemOperators& ops, const RIConfig& cfg,
                                 const ModelParams& params) {
  if (params.n_levels != ops.n_levels) {
    throw ArgumentError("run_state_preparation: params do not match the operators");
  }
  return evolve_ri(state_preparation_start(ops), ops, cfg, /*state_prep=*/true);
}

}  // namespace riet
