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

#include "riet/analysis.hpp"

#include <algorithm>
#include <cmath>
#include <limits>

#include "riet/errors.hpp"

namespace riet {
namespace {

constexpr int kMaxIterations = 200;
constexpr double kRelTol = 1e-10;

struct LogLinear {
  double k = 0.0;
  bool ok = false;
};

LogLinear log_linear_rate(std::span<const double> t, std::span<const double> y, double floor) {
  double n = 0, st = 0, sy = 0, stt = 0, sty = 0;
  for (std::size_t i = 0; i < t.size(); ++i) {
    if (!(y[i] > floor)) continue;
    const double ly = std::log(y[i]);
    n += 1;
    st += t[i];
    sy += ly;
    stt += t[i] * t[i];
    sty += t[i] * ly;
  }
  const double den = n * stt - st * st;
  if (n < 2 || !(std::abs(den) > 0.0)) return {};
  return {-(n * sty - st * sy) / den, true};
}

double sum_sq_residual(std::span<const double> t, std::span<const double> y, double p0, double k) {
  double s = 0.0;
  for (std::size_t i = 0; i < t.size(); ++i) {
    const double r = y[i] - p0 * std::exp(-k * t[i]);
    s += r * r;
  }
  return s;
}

}  // namespace

RateFit fit_exponential(std::span<const double> t, std::span<const double> y) {
  RateFit fit;
  if (t.size() != y.size() || t.size() < 10) return fit;
  for (std::size_t i = 0; i < t.size(); ++i) {
    if (!std::isfinite(t[i]) || !std::isfinite(y[i])) return fit;
  }

  double p0 = y[0];
  LogLinear init = log_linear_rate(t, y, 0.05);
  if (!init.ok) init = log_linear_rate(t, y, 1e-6);
  double k = init.ok ? init.k : 0.0;
  const bool decaying_guess = init.ok && k > 0.0;

  double cost = sum_sq_residual(t, y, p0, k);
  double mu = 1e-3;
  bool converged = false;
  for (int it = 0; it < kMaxIterations && std::isfinite(cost); ++it) {
    // Normal equations J^T J d = -J^T r for r = y - p0 exp(-k t).
    double a11 = 0, a12 = 0, a22 = 0, g1 = 0, g2 = 0;
    for (std::size_t i = 0; i < t.size(); ++i) {
      const double e = std::exp(-k * t[i]);
      const double r = y[i] - p0 * e;
      const double j1 = -e;
      const double j2 = p0 * t[i] * e;
      a11 += j1 * j1;
      a12 += j1 * j2;
      a22 += j2 * j2;
      g1 += j1 * r;
      g2 += j2 * r;
    }
    bool accepted = false;
    double dp = 0.0, dk = 0.0;
    while (mu < 1e20) {
      const double b11 = a11 * (1.0 + mu), b22 = a22 * (1.0 + mu);
      const double det = b11 * b22 - a12 * a12;
      if (!(det > 0.0)) {
        mu *= 10.0;
        continue;
      }
      dp = -(b22 * g1 - a12 * g2) / det;
      dk = -(b11 * g2 - a12 * g1) / det;
      const double trial = sum_sq_residual(t, y, p0 + dp, k + dk);
      if (trial <= cost) {
        p0 += dp;
        k += dk;
        cost = trial;
        mu = std::max(mu / 10.0, 1e-15);
        accepted = true;
        break;
      }
      mu *= 10.0;
    }
    const double rel = std::max(std::abs(dp) / std::max(std::abs(p0), 1e-300),
                                std::abs(dk) / std::max(std::abs(k), 1e-300));
    if (!accepted || rel < kRelTol) {
      converged = accepted || cost == 0.0 || mu >= 1e20;
      break;
    }
  }

  double mean = 0.0;
  for (double v : y) mean += v;
  mean /= static_cast<double>(y.size());
  double ss_tot = 0.0;
  for (double v : y) ss_tot += (v - mean) * (v - mean);

  fit.k = k;
  fit.p0 = p0;
  fit.residual_norm = std::sqrt(cost);
  fit.r_squared = ss_tot > 0.0 ? 1.0 - cost / ss_tot : (cost == 0.0 ? 1.0 : 0.0);
  fit.converged = converged && std::isfinite(k) && std::isfinite(p0);
  if (!std::isfinite(fit.k)) fit.k = 0.0;
  if (!decaying_guess && (fit.k <= 0.0 || fit.r_squared < 0.1)) fit.converged = false;
  if (fit.k <= 0.0 && fit.r_squared < 0.1) fit.converged = false;
  if (fit.converged && fit.r_squared < 0.0) fit.converged = false;
  return fit;
}

RateFit fit_transfer_rate(const Trajectory& traj) {
  if (!traj.has_column("P_D")) return {};
  return fit_exponential(traj.times(), traj.column("P_D"));
}

double rhp_total_variation(std::span<const double> c) {
  if (c.size() < 2) return 0.0;
  double tv = 0.0;
  for (std::size_t i = 0; i + 1 < c.size(); ++i) tv += std::abs(c[i + 1] - c[i]);
  return tv - (c.front() - c.back());
}

RHPSystem build_rhp_system(const SystemOperators& ops, const ModelParams& params,
                           const std::optional<Matrix>& rho_rc) {
  if (ops.kind != ModelKind::DA) {
    throw UnsupportedModelError("the RHP measure is only implemented for the DA model");
  }
  if (params.n_levels != ops.n_levels) {
    throw ArgumentError("build_rhp_system: params do not match the operators");
  }
  const int n = ops.n_levels;
  const Operator id_r = Operator::identity({2});

  SystemOperators ext;
  ext.kind = ops.kind;
  ext.h_et = kron(ops.h_et, id_r);
  ext.h0_et = kron(ops.h0_et, id_r);
  ext.jump = kron(ops.jump, id_r);
  ext.jump_dag = kron(ops.jump_dag, id_r);
  ext.nbar = ops.nbar;
  ext.gamma = ops.gamma;
  ext.kbt = ops.kbt;
  ext.time_scale = ops.time_scale;
  ext.n_levels = n;
  ext.h_int = interaction_hamiltonian(ext.jump, ext.gamma, ext.nbar);
  ext.site_names = ops.site_names;
  for (const Operator& p : ops.site_projectors) ext.site_projectors.push_back(kron(p, id_r));
  for (const ScaledTerm& t : ops.h_terms) {
    ext.h_terms.push_back({t.label, t.coefficient, kron(t.op, id_r), t.hermitian});
  }

  Matrix osc;
  if (rho_rc) {
    if (rho_rc->rows() != n || rho_rc->cols() != n) {
      throw ArgumentError("build_rhp_system: rho_rc has the wrong size");
    }
    osc = *rho_rc;
    DensityMatrix check{Operator(osc)};  // validates
  } else {
    const OscillatorOps o = oscillator_ops(n);
    osc = thermal_state((o.adag * o.a).matrix(), ops.kbt);
  }

  // 1/2 sum_ij |i><j|_e (x) rho_rc (x) |i><j|_r
  Matrix rho = Matrix::Zero(4 * n, 4 * n);
  for (int i = 0; i < 2; ++i) {
    for (int j = 0; j < 2; ++j) {
      Matrix e = Matrix::Zero(2, 2);
      e(i, j) = 1.0;
      Matrix r = Matrix::Zero(2, 2);
      r(i, j) = 1.0;
      rho += 0.5 * kron(kron(e, osc), r);
    }
  }
  return {std::move(ext), DensityMatrix(Operator(std::move(rho), {2, n, 2}))};
}

Observable rhp_concurrence_observable(const Dims& dims) {
  return {"concurrence", [dims](const Matrix& rho) {
            static constexpr int keep[] = {0, 2};
            const Operator reduced = partial_trace(Operator(rho, dims), keep);
            return concurrence(reduced.matrix());
          }};
}

RHPResult rhp_measure(const SystemOperators& ops, const ModelParams& params,
                      const RHPEngine& engine, double t_max, const std::optional<Matrix>& rho_rc) {
  if (!(engine.step > 0.0)) throw ArgumentError("rhp_measure: step must be > 0");
  if (!(t_max >= engine.step)) throw ArgumentError("rhp_measure: t_max must be >= step");
  const RHPSystem sys = build_rhp_system(ops, params, rho_rc);
  const Observable conc[] = {rhp_concurrence_observable(sys.ops.h_et.dims())};

  Trajectory traj;
  if (engine.kind == RHPEngine::Kind::Lindblad) {
    traj = integrate_lindblad(sys.rho0, sys.ops, {t_max, engine.step, engine.record_stride}, conc);
  } else {
    RIConfig cfg;
    cfg.tau = engine.step;
    cfg.steps = std::lround(t_max / engine.step);
    cfg.trotter_n = engine.trotter_n;
    cfg.trotter_split = engine.trotter_split;
    cfg.record_stride = engine.record_stride;
    traj = evolve_ri(sys.rho0, sys.ops, cfg, false, conc);
  }

  const std::vector<double>& c = traj.column("concurrence");
  RHPResult out;
  out.measure = rhp_total_variation(c);
  out.delta_e_entanglement = c.front() - c.back();
  out.concurrence_trace =
      Trajectory::from_columns(traj.times(), {{"concurrence", c}}, traj.record_stride());
  out.trajectory = std::move(traj);
  return out;
}

std::vector<TruncationRow> truncation_study(const ModelParams& params, std::span<const int> levels,
                                            double delta_e, const LindbladOptions& opts) {
  if (params.kind != ModelKind::DA) {
    throw UnsupportedModelError("truncation_study is only implemented for the DA model");
  }
  std::vector<TruncationRow> rows;
  for (int n : levels) {
    if (n < 2) throw ArgumentError("truncation_study: levels must be >= 2");
    ModelParams p = params;
    p.n_levels = n;
    p.delta_e = delta_e;
    const SystemOperators ops = build_system(p);
    const DensityMatrix rho0 = build_initial_state(ops, p);
    const RateFit fit = fit_transfer_rate(integrate_lindblad(rho0, ops, opts));
    rows.push_back({n, fit.k, mean_position(rho0, n)});
  }
  return rows;
}

}  // namespace riet
