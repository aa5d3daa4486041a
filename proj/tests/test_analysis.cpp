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

#include <cmath>
#include <random>
#include <vector>

#include <gtest/gtest.h>

#include "riet/analysis.hpp"
#include "riet/errors.hpp"
#include "test_util.hpp"

namespace riet {
namespace {

using testing::max_abs;

std::vector<double> grid(int n, double t_max) {
  std::vector<double> t(n);
  for (int i = 0; i < n; ++i) t[i] = t_max * i / (n - 1);
  return t;
}

// ---------------------------------------------------------------------- fit

TEST(FitTest, ExactRecovery) {
  const std::vector<double> t = grid(1000, 1000.0);
  std::vector<double> y;
  for (double x : t) y.push_back(std::exp(-0.01 * x));
  const RateFit f = fit_exponential(t, y);
  EXPECT_TRUE(f.converged);
  EXPECT_NEAR(f.k, 0.01, 1e-8);
  EXPECT_NEAR(f.p0, 1.0, 1e-8);
  EXPECT_NEAR(f.r_squared, 1.0, 1e-10);
  EXPECT_LT(f.residual_norm, 1e-8);
}

TEST(FitTest, OscillationRobust) {
  for (double k : {0.002, 0.01, 0.05}) {
    const std::vector<double> t = grid(1000, 1000.0);
    std::vector<double> y;
    for (double x : t) y.push_back(std::exp(-k * x) * (1.0 + 0.05 * std::sin(10.0 * x)));
    const RateFit f = fit_exponential(t, y);
    EXPECT_TRUE(f.converged);
    EXPECT_NEAR(f.k / k, 1.0, 0.02) << k;
  }
}

TEST(FitTest, ScaleEquivariant) {
  const std::vector<double> t = grid(500, 400.0);
  std::vector<double> y;
  for (double x : t) y.push_back(0.7 * std::exp(-0.004 * x) + 0.1 * std::exp(-0.05 * x) * std::cos(x));
  const RateFit base = fit_exponential(t, y);
  for (double c : {0.3, 2.0, 17.0}) {
    std::vector<double> ys;
    for (double v : y) ys.push_back(c * v);
    const RateFit f = fit_exponential(t, ys);
    EXPECT_NEAR(f.k, base.k, 1e-10) << c;
    EXPECT_NEAR(f.p0, c * base.p0, 1e-9 * c);
  }
}

TEST(FitTest, NonDecayingNotConverged) {
  const std::vector<double> t = grid(200, 100.0);
  std::vector<double> flat(200, 1.0), growing, noise;
  for (double x : t) growing.push_back(0.01 * std::exp(0.02 * x));
  for (double x : t) noise.push_back(0.5 + 0.3 * std::sin(x) + 0.002 * x);
  EXPECT_FALSE(fit_exponential(t, growing).converged);
  EXPECT_FALSE(fit_exponential(t, noise).converged);
  const RateFit f = fit_exponential(t, flat);
  EXPECT_TRUE(std::isfinite(f.k));
  EXPECT_NEAR(f.k, 0.0, 1e-12);
}

TEST(FitTest, DegenerateInputsNeverThrow) {
  const std::vector<double> t = grid(5, 1.0);
  const std::vector<double> y(5, 1.0);
  EXPECT_FALSE(fit_exponential(t, y).converged);
  const std::vector<double> t2 = grid(20, 1.0);
  const std::vector<double> y2(19, 1.0);
  EXPECT_FALSE(fit_exponential(t2, y2).converged);
  std::vector<double> nan_y(20, 0.5);
  nan_y[4] = std::nan("");
  EXPECT_NO_THROW(fit_exponential(t2, nan_y));
  EXPECT_FALSE(fit_exponential(t2, nan_y).converged);
}

TEST(FitTest, UsesDonorColumn) {
  const std::vector<double> t = grid(100, 100.0);
  std::vector<double> pd, pa;
  for (double x : t) {
    pd.push_back(std::exp(-0.03 * x));
    pa.push_back(1.0 - pd.back());
  }
  const Trajectory traj = Trajectory::from_columns(t, {{"P_D", pd}, {"P_A", pa}});
  EXPECT_NEAR(fit_transfer_rate(traj).k, 0.03, 1e-8);
  const Trajectory no_donor = Trajectory::from_columns(t, {{"P_A", pa}});
  EXPECT_FALSE(fit_transfer_rate(no_donor).converged);
}

TEST(FitTest, WeaklyCoupledLindblad) {
  const ModelParams p = preset_params(Preset::WeaklyCoupled);
  const SystemOperators ops = build_system(p);
  const Trajectory traj = integrate_lindblad(build_initial_state(ops, p), ops, {1000.0, 0.02, 50});
  const RateFit f = fit_transfer_rate(traj);
  EXPECT_TRUE(f.converged);
  EXPECT_GT(f.k, 0.0);
  EXPECT_GE(f.r_squared, 0.0);
  RecordProperty("r_squared", std::to_string(f.r_squared));
}

// ---------------------------------------------------------------------- RHP

TEST(TotalVariationTest, MonotoneIsZero) {
  const std::vector<double> down = {1.0, 0.8, 0.8, 0.5, 0.1, 0.0};
  EXPECT_EQ(rhp_total_variation(down), 0.0);
  const std::vector<double> single = {0.4};
  EXPECT_EQ(rhp_total_variation(single), 0.0);
}

TEST(TotalVariationTest, CountsRevivals) {
  const std::vector<double> c = {1.0, 0.5, 0.7, 0.2, 0.3, 0.0};
  EXPECT_NEAR(rhp_total_variation(c), 2.0 * (0.2 + 0.1), 1e-15);
}

TEST(TotalVariationTest, NonNegativeOnRandomTraces) {
  std::mt19937 rng(2);
  std::uniform_real_distribution<double> u(0.0, 1.0);
  for (int trial = 0; trial < 100; ++trial) {
    std::vector<double> c(50);
    for (double& x : c) x = u(rng);
    EXPECT_GE(rhp_total_variation(c), -1e-12);
  }
}

TEST(RhpResultTest, SummaryThreshold) {
  RHPResult r;
  r.measure = 5e-5;
  EXPECT_EQ(r.summary_measure(), 0.0);
  r.measure = 2e-4;
  EXPECT_EQ(r.summary_measure(), 2e-4);
}

TEST(RhpSystemTest, InitialStateStructure) {
  ModelParams p = preset_params(Preset::StronglyDamped);
  p.n_levels = 6;
  const SystemOperators ops = build_system(p);
  const RHPSystem sys = build_rhp_system(ops, p);
  EXPECT_EQ(sys.rho0.dims(), (Dims{2, 6, 2}));
  EXPECT_NEAR(sys.rho0.matrix().trace().real(), 1.0, 1e-12);

  const Observable conc = rhp_concurrence_observable(sys.rho0.dims());
  EXPECT_NEAR(conc.eval(sys.rho0.matrix()), 1.0, 1e-10);

  const std::vector<int> keep = {0, 1};
  const Matrix reduced = partial_trace(sys.rho0.op(), keep).matrix();
  const Matrix rc = thermal_state(oscillator_ops(6).adag.matrix() * oscillator_ops(6).a.matrix(), p.kbt);
  EXPECT_LT(max_abs(reduced - kron(0.5 * Matrix::Identity(2, 2), rc)), 1e-12);
}

TEST(RhpSystemTest, AncillaIsSpectator) {
  ModelParams p = preset_params(Preset::WeaklyCoupled);
  p.n_levels = 5;
  const RHPSystem sys = build_rhp_system(build_system(p), p);
  std::mt19937 rng(3);
  for (int trial = 0; trial < 5; ++trial) {
    const Matrix x = testing::random_hermitian(2, rng);
    const Matrix op = kron(Matrix::Identity(10, 10), x);
    const Matrix& h = sys.ops.h_et.matrix();
    const Matrix& l = sys.ops.jump.matrix();
    EXPECT_LT(max_abs(h * op - op * h), 1e-12);
    EXPECT_LT(max_abs(l * op - op * l), 1e-12);
  }
}

TEST(RhpSystemTest, CustomReactionCoordinateState) {
  ModelParams p = preset_params(Preset::WeaklyCoupled);
  p.n_levels = 4;
  const SystemOperators ops = build_system(p);
  Matrix rc = Matrix::Zero(4, 4);
  rc(1, 1) = 1.0;
  const RHPSystem sys = build_rhp_system(ops, p, rc);
  const std::vector<int> keep = {1};
  EXPECT_LT(max_abs(partial_trace(sys.rho0.op(), keep).matrix() - rc), 1e-12);
  EXPECT_THROW(build_rhp_system(ops, p, Matrix::Identity(3, 3) / 3.0), ArgumentError);
}

TEST(RhpSystemTest, DbaUnsupported) {
  ModelParams p = preset_params(Preset::Dba);
  p.n_levels = 4;
  EXPECT_THROW(build_rhp_system(build_system(p), p), UnsupportedModelError);
}

TEST(RhpMeasureTest, ShortWindowProperties) {
  ModelParams p = preset_params(Preset::WeaklyCoupled);
  p.n_levels = 8;
  const SystemOperators ops = build_system(p);
  RHPEngine lind;
  lind.step = 0.02;
  lind.record_stride = 5;
  const RHPResult a = rhp_measure(ops, p, lind, 20.0);
  const auto& c = a.concurrence_trace.column("concurrence");
  ASSERT_EQ(c.size(), 201u);
  EXPECT_NEAR(c.front(), 1.0, 1e-10);
  EXPECT_GE(a.measure, -1e-9);
  EXPECT_NEAR(a.delta_e_entanglement, c.front() - c.back(), 1e-15);
  EXPECT_NEAR(a.measure, rhp_total_variation(c), 1e-15);
  EXPECT_TRUE(a.trajectory.has_column("concurrence"));

  RHPEngine ri;
  ri.kind = RHPEngine::Kind::RI;
  ri.step = 0.1;
  ri.record_stride = 1;
  const RHPResult b = rhp_measure(ops, p, ri, 20.0);
  const auto& cb = b.concurrence_trace.column("concurrence");
  ASSERT_EQ(cb.size(), c.size());
  for (std::size_t i = 0; i < c.size(); ++i) EXPECT_NEAR(c[i], cb[i], 0.05);
}

// --------------------------------------------------------------- truncation

TEST(TruncationTest, MeanPositionApproachesDisplacement) {
  const ModelParams p = preset_params(Preset::WeaklyCoupled);
  const std::vector<int> levels = {3, 6, 16};
  const std::vector<TruncationRow> rows = truncation_study(p, levels, 3.0, {50.0, 0.05, 2});
  ASSERT_EQ(rows.size(), 3u);
  for (std::size_t i = 0; i < rows.size(); ++i) {
    EXPECT_EQ(rows[i].n_levels, levels[i]);
    EXPECT_TRUE(std::isfinite(rows[i].k));
  }
  EXPECT_NEAR(rows[2].mean_q0, -0.5, 1e-3);
  EXPECT_LE(std::abs(rows[2].mean_q0 + 0.5), std::abs(rows[0].mean_q0 + 0.5));
}

TEST(TruncationTest, RejectsTinyTruncation) {
  const std::vector<int> levels = {1};
  EXPECT_THROW(truncation_study(preset_params(Preset::WeaklyCoupled), levels, 3.0), ArgumentError);
}

}  // namespace
}  // namespace riet
