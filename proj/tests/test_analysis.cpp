// Copyright 2026 The noonsim Authors
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


#include <gtest/gtest.h>

#include <Eigen/Eigenvalues>
#include <algorithm>
#include <cmath>

#include "noonsim/analysis.hpp"
#include "oracle.hpp"

using namespace noonsim;
using L = DeviceLevel;

namespace {

RunConfig cheap() {
  RunConfig c;
  c.n_photons = 2;
  c.params = PhysicalParams::symmetric(mhz_to_rad(5.0), mhz_to_rad(300.0));
  c.params.g12 = 0.1 * c.params.g;
  c.params.delta = mhz_to_rad(2000.0);
  c.rates = NoiseRates::reference_device();
  return c;
}

SweepSpec grid() {
  SweepSpec s;
  s.base = cheap();
  s.axes = {{"omega_mhz", {150.0, 300.0}}, {"g_mhz", {3.0, 6.0, 9.0}}};
  return s;
}

SweepOptions with_workers(int k) {
  SweepOptions o;
  o.workers = k;
  return o;
}

bool same(const PointResult& a, const PointResult& b) {
  return a.fidelity == b.fidelity && a.trace_drift == b.trace_drift &&
         a.hermiticity == b.hermiticity && a.min_eigenvalue == b.min_eigenvalue &&
         a.edge_population == b.edge_population && a.error == b.error;
}

}  // namespace

TEST(Metrics, fidelity_examples) {
  const CompositeSpace s(1, 1);
  const StateVector zero = basis_state(s, L::G, 0, 0);
  const DensityMatrix rho = DensityMatrix::from_pure(zero);
  EXPECT_DOUBLE_EQ(fidelity(rho, zero), 1.0);
  StateVector plus(s);
  plus.at(L::G, 0, 0) = plus.at(L::E, 1, 1) = 1.0 / std::sqrt(2.0);
  EXPECT_NEAR(fidelity(rho, plus), std::sqrt(0.5), 1e-15);
  DensityMatrix mixed(s);
  for (std::size_t i = 0; i < 16; ++i) mixed(i, i) = 1.0 / 16.0;
  EXPECT_NEAR(fidelity(mixed, zero), 0.25, 1e-15);
  EXPECT_DOUBLE_EQ(fidelity(rho, basis_state(s, L::A, 1, 0)), 0.0);
}

TEST(Metrics, fidelity_clamps_rounding_and_rejects_garbage) {
  const CompositeSpace s(1, 1);
  const StateVector zero = basis_state(s, L::G, 0, 0);
  DensityMatrix rho = DensityMatrix::from_pure(zero);
  rho(0, 0) = 1.0 + 1e-13;
  EXPECT_EQ(fidelity(rho, zero), 1.0);
  EXPECT_GT(overlap(rho, zero), 1.0);
  rho(0, 0) = -1e-13;
  EXPECT_EQ(fidelity(rho, zero), 0.0);
  rho(0, 0) = -1e-6;
  EXPECT_THROW(fidelity(rho, zero), std::domain_error);
  StateVector plus(s);
  plus[0] = plus[1] = 1.0 / std::sqrt(2.0);
  DensityMatrix skew(s);
  skew(0, 1) = 1.0;  // not Hermitian: <psi|rho|psi> = 1/2
  skew(1, 0) = cplx(0, 1);
  EXPECT_THROW(fidelity(skew, plus), std::domain_error);
}

TEST(Metrics, fidelity_falls_under_mixing) {
  const CompositeSpace s(1, 2);
  StateVector psi(s);
  for (std::size_t i = 0; i < psi.size(); ++i) psi[i] = cplx(std::cos(0.3 * i), std::sin(1.1 * i));
  psi *= 1.0 / psi.norm();
  const DensityMatrix pure = DensityMatrix::from_pure(psi);
  double prev = 1.0 + 1e-12;
  for (double p : {0.0, 0.2, 0.5, 0.9}) {
    DensityMatrix rho(s);
    for (std::size_t r = 0; r < rho.dim(); ++r)
      for (std::size_t c = 0; c < rho.dim(); ++c)
        rho(r, c) = (1 - p) * pure(r, c) + (r == c ? p / rho.dim() : 0.0);
    const double f = fidelity(rho, psi);
    EXPECT_LT(f, prev);
    prev = f;
  }
}

TEST(Metrics, diagnostics_match_dense_oracles) {
  const CompositeSpace s(2, 3);
  oracle::Mat m = oracle::random_density(static_cast<int>(s.dim()), 4);
  // push one eigenvalue negative to exercise the sign
  m -= 0.02 * oracle::Mat::Identity(s.dim(), s.dim());
  m(0, 1) += cplx(1e-9, 2e-9);
  const DensityMatrix rho = oracle::to_rho(s, m);
  const Diagnostics d = diagnostics(rho);
  const oracle::Mat herm = 0.5 * (m + m.adjoint());
  Eigen::SelfAdjointEigenSolver<oracle::Mat> eig(herm);
  EXPECT_NEAR(d.min_eigenvalue, eig.eigenvalues().minCoeff(), 1e-12);
  EXPECT_NEAR(min_eigenvalue(rho), d.min_eigenvalue, 0.0);
  EXPECT_NEAR(d.trace_drift, std::abs(m.trace() - 1.0), 1e-14);
  EXPECT_NEAR(d.hermiticity, std::abs(cplx(1e-9, 2e-9)), 1e-15);
  double edge = 0.0;
  std::array<double, 4> pops{};
  for (std::size_t i = 0; i < s.dim(); ++i) {
    const BasisLabel b = s.label(i);
    if (b.n1 == 2 || b.n2 == 3) edge += m(i, i).real();
    pops[static_cast<int>(b.level)] += m(i, i).real();
  }
  EXPECT_NEAR(d.edge_population, edge, 1e-14);
  EXPECT_NEAR(edge_population(rho), edge, 1e-14);
  for (int k = 0; k < 4; ++k) EXPECT_NEAR(d.device_populations[k], pops[k], 1e-14);
  // device purity from an explicit partial trace
  const std::size_t blk = s.level_block();
  oracle::Mat dev = oracle::Mat::Zero(4, 4);
  for (int a = 0; a < 4; ++a)
    for (int b = 0; b < 4; ++b)
      for (std::size_t k = 0; k < blk; ++k) dev(a, b) += m(a * blk + k, b * blk + k);
  EXPECT_NEAR(d.device_purity, (dev * dev).trace().real(), 1e-13);
}

TEST(Analysis, axis_application) {
  RunConfig c = cheap();
  apply_axis(c, "N", 4);
  EXPECT_EQ(c.n_photons, 4);
  EXPECT_THROW(apply_axis(c, "N", 3.5), std::invalid_argument);
  EXPECT_THROW(apply_axis(c, "N", 1), std::invalid_argument);
  apply_axis(c, "omega_mhz", 120.0);
  EXPECT_DOUBLE_EQ(c.params.omega_rabi, mhz_to_rad(120.0));
  apply_axis(c, "g_mhz", 10.0);
  EXPECT_DOUBLE_EQ(c.params.g, mhz_to_rad(10.0));
  EXPECT_NEAR(c.params.g12, 0.1 * mhz_to_rad(10.0), 1e-6);
  apply_axis(c, "g1_frac", 0.9);
  EXPECT_DOUBLE_EQ(c.params.g1, 0.9 * c.params.g);
  apply_axis(c, "g12_frac", 0.0);
  EXPECT_EQ(c.params.g12, 0.0);
  apply_axis(c, "delta_mhz", 500.0);
  EXPECT_DOUBLE_EQ(c.params.delta, mhz_to_rad(500.0));
  EXPECT_THROW(apply_axis(c, "kappa", 1.0), std::invalid_argument);
}

TEST(Analysis, spec_validation) {
  SweepSpec s = grid();
  EXPECT_NO_THROW(s.validate());
  EXPECT_EQ(s.point_count(), 6u);
  s.axes.push_back({"N", {2, 3}});
  EXPECT_THROW(s.validate(), std::invalid_argument);
  s = grid();
  s.axes[1].name = "omega_mhz";
  EXPECT_THROW(s.validate(), std::invalid_argument);
  s = grid();
  s.axes[0].values = {300.0, 150.0};
  EXPECT_THROW(s.validate(), std::invalid_argument);
  s = grid();
  s.g_candidates = {2.0, 4.0};
  EXPECT_THROW(s.validate(), std::invalid_argument);  // g swept and optimized at once
  s.axes.pop_back();
  EXPECT_NO_THROW(s.validate());
  s.g_candidates = {0.0};
  EXPECT_THROW(s.validate(), std::invalid_argument);
  s = grid();
  s.axes.clear();
  EXPECT_EQ(s.point_count(), 1u);
}

TEST(Analysis, task_keys) {
  EXPECT_EQ(task_key({300.0, 4.5}, std::nullopt), "300,4.5");
  EXPECT_EQ(task_key({6.0}, 0.1), "6;g=0.1");
  EXPECT_NE(task_key({1.0, 23.0}, std::nullopt), task_key({12.0, 3.0}, std::nullopt));
}

TEST(Analysis, single_point_sweep_equals_direct_run) {
  SweepSpec s;
  s.base = cheap();
  s.axes = {{"omega_mhz", {200.0}}};
  const SweepResult r = sweep(s);
  ASSERT_EQ(r.rows.size(), 1u);
  RunConfig c = cheap();
  c.params.omega_rabi = mhz_to_rad(200.0);
  const RunResult direct = run_protocol(c);
  EXPECT_EQ(r.rows[0].result.fidelity, direct.fidelity);
  EXPECT_EQ(r.rows[0].result.min_eigenvalue, direct.diagnostics.min_eigenvalue);
  EXPECT_FALSE(r.rows[0].g_best_mhz.has_value());
  EXPECT_FALSE(r.optimized);
}

TEST(Analysis, grid_order_and_worker_independence) {
  const SweepResult one = sweep(grid(), with_workers(1));
  SweepOptions three;
  three.workers = 3;
  int calls = 0;
  three.on_result = [&](const std::string&, const PointResult&) { ++calls; };
  const SweepResult par = sweep(grid(), three);
  EXPECT_EQ(calls, 6);
  ASSERT_EQ(one.rows.size(), 6u);
  ASSERT_EQ(par.rows.size(), 6u);
  EXPECT_EQ(one.axis_names, (std::vector<std::string>{"omega_mhz", "g_mhz"}));
  for (std::size_t k = 0; k < 6; ++k) {
    EXPECT_EQ(one.rows[k].axis_values,
              (std::vector<double>{k < 3 ? 150.0 : 300.0, 3.0 * (1 + k % 3)}));
    EXPECT_EQ(one.rows[k].axis_values, par.rows[k].axis_values);
    EXPECT_TRUE(same(one.rows[k].result, par.rows[k].result));
    EXPECT_TRUE(one.rows[k].result.ok());
  }
}

TEST(Analysis, resume_reuses_completed_evaluations) {
  std::map<std::string, PointResult> log;
  SweepOptions first;
  first.on_result = [&](const std::string& k, const PointResult& r) { log[k] = r; };
  const SweepResult full = sweep(grid(), first);
  ASSERT_EQ(log.size(), 6u);
  // drop two as if the run had been interrupted
  log.erase(task_key({150.0, 6.0}, std::nullopt));
  log.erase(task_key({300.0, 9.0}, std::nullopt));
  SweepOptions again;
  again.completed = log;
  std::vector<std::string> fresh;
  again.on_result = [&](const std::string& k, const PointResult&) { fresh.push_back(k); };
  const SweepResult resumed = sweep(grid(), again);
  std::sort(fresh.begin(), fresh.end());
  EXPECT_EQ(fresh, (std::vector<std::string>{"150,6", "300,9"}));
  for (std::size_t k = 0; k < 6; ++k) EXPECT_TRUE(same(full.rows[k].result, resumed.rows[k].result));
  // a planted value proves reuse rather than recomputation
  again.completed[task_key({150.0, 3.0}, std::nullopt)].fidelity = 0.123;
  EXPECT_EQ(sweep(grid(), again).rows[0].result.fidelity, 0.123);
}

TEST(Analysis, failed_points_do_not_stop_the_sweep) {
  SweepSpec s;
  s.base = cheap();
  s.base.nmax1 = 3;
  s.axes = {{"N", {2, 3, 4, 5}}};
  const SweepResult r = sweep(s, with_workers(2));
  ASSERT_EQ(r.rows.size(), 4u);
  EXPECT_TRUE(r.rows[0].result.ok());
  EXPECT_TRUE(r.rows[1].result.ok());
  EXPECT_FALSE(r.rows[2].result.ok());
  EXPECT_NE(r.rows[2].result.error.find("nmax1"), std::string::npos);
  EXPECT_FALSE(r.rows[3].result.ok());
  EXPECT_TRUE(evaluate_point(s.base).ok());
}

TEST(Analysis, optimizer_is_exhaustive) {
  const RunConfig c = cheap();
  const std::vector<double> cand = {2.0, 5.0, 8.0, 11.0};
  const OptimizeResult a = optimize_g(c, cand);
  ASSERT_EQ(a.evaluated.size(), 4u);
  double best = -1.0, arg = 0.0;
  for (const auto& [g, r] : a.evaluated) {
    RunConfig d = c;
    d.params = with_reference_g(c.params, mhz_to_rad(g));
    EXPECT_EQ(r.fidelity, run_protocol(d).fidelity);
    if (r.fidelity > best) best = r.fidelity, arg = g;
  }
  EXPECT_EQ(a.g_best_mhz, arg);
  EXPECT_EQ(a.best.fidelity, best);
  // candidate order and duplicates do not matter
  const OptimizeResult b = optimize_g(c, {11.0, 2.0, 8.0, 5.0, 8.0}, 2);
  EXPECT_EQ(b.g_best_mhz, a.g_best_mhz);
  EXPECT_EQ(b.best.fidelity, a.best.fidelity);
  EXPECT_EQ(b.evaluated.size(), 4u);
  EXPECT_EQ(optimize_g(c, {5.0}).g_best_mhz, 5.0);
  EXPECT_THROW(optimize_g(c, {}), std::invalid_argument);
}

TEST(Analysis, optimizing_sweep_reports_best_g) {
  SweepSpec s;
  s.base = cheap();
  s.axes = {{"omega_mhz", {100.0, 300.0}}};
  s.g_candidates = {3.0, 6.0, 12.0};
  const SweepResult r = sweep(s);
  EXPECT_TRUE(r.optimized);
  for (const SweepRow& row : r.rows) {
    ASSERT_TRUE(row.g_best_mhz.has_value());
    RunConfig c = s.base;
    apply_axis(c, "omega_mhz", row.axis_values[0]);
    const OptimizeResult o = optimize_g(c, s.g_candidates);
    EXPECT_EQ(*row.g_best_mhz, o.g_best_mhz);
    EXPECT_EQ(row.result.fidelity, o.best.fidelity);
  }
}
