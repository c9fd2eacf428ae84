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

#include <cmath>
#include <numbers>

#include "noonsim/protocol.hpp"
#include "oracle.hpp"

using namespace noonsim;
using L = DeviceLevel;

namespace {

constexpr double kPi = std::numbers::pi;

RunConfig ideal(int n) {
  RunConfig c;
  c.n_photons = n;
  c.params = PhysicalParams::symmetric(1.0, 40.0);
  c.pulses = PulseModel::Instantaneous;
  c.steps.steps_per_period = 200.0;
  return c;
}

}  // namespace

TEST(Schedule, segment_count_and_contiguity) {
  const PhysicalParams p = PhysicalParams::symmetric(1.0, 20.0);
  for (int n = 2; n <= 9; ++n) {
    const ProtocolSchedule s = build_schedule(n, p);
    ASSERT_EQ(s.segments.size(), static_cast<std::size_t>(2 * n + 1)) << n;
    double clock = 0.0;
    for (const Segment& seg : s.segments) {
      EXPECT_DOUBLE_EQ(seg.t_start, clock);
      EXPECT_GT(seg.duration, 0.0);
      clock += seg.duration;
    }
    EXPECT_DOUBLE_EQ(s.total_time, clock);
    EXPECT_FALSE(s.asynchronous);
  }
}

TEST(Schedule, durations_and_labels_for_n3) {
  PhysicalParams p = PhysicalParams::symmetric(2.0, 20.0);
  p.gprime = 2.5;
  const ProtocolSchedule s = build_schedule(3, p);
  const std::vector<std::pair<SegmentKind, double>> expect = {
      {SegmentKind::ResonantBoth, kPi / (2 * 2.0)},
      {SegmentKind::DoublePulse, kPi / (2 * 20.0)},
      {SegmentKind::ResonantBoth, kPi / (2 * std::sqrt(2.0) * 2.0)},
      {SegmentKind::PulseAF, kPi / (2 * 20.0)},
      {SegmentKind::ResonantAE, kPi / (2 * std::sqrt(3.0) * 2.5)},
      {SegmentKind::PulseEG, kPi / (2 * 20.0)},
      {SegmentKind::ResonantBoth, 3 * kPi / (2 * std::sqrt(3.0) * 2.0)},
  };
  ASSERT_EQ(s.segments.size(), expect.size());
  for (std::size_t k = 0; k < expect.size(); ++k) {
    EXPECT_EQ(s.segments[k].kind, expect[k].first) << k;
    EXPECT_NEAR(s.segments[k].duration, expect[k].second, 1e-15) << k;
  }
  EXPECT_EQ(s.segments[0].label, "step 1 / resonant");
  EXPECT_EQ(s.segments[1].label, "step 1 / double pulse");
  EXPECT_EQ(s.segments[4].label, "step 3 / resonant e-a");
  EXPECT_EQ(s.segments[6].label, "step 4 / resonant");
  EXPECT_EQ(s.segments[6].step, 4);
}

TEST(Schedule, total_time_grows_with_n) {
  const PhysicalParams p = PhysicalParams::symmetric(1.0, 20.0);
  double prev = 0.0;
  for (int n = 2; n <= 12; ++n) {
    const double t = build_schedule(n, p).total_time;
    EXPECT_GT(t, prev);
    prev = t;
  }
}

TEST(Schedule, rejects_bad_inputs) {
  const PhysicalParams p = PhysicalParams::symmetric(1.0, 20.0);
  EXPECT_THROW(build_schedule(1, p), std::invalid_argument);
  EXPECT_THROW(build_schedule(0, p), std::invalid_argument);
  try {
    build_schedule(1, p);
  } catch (const std::invalid_argument& e) {
    EXPECT_NE(std::string(e.what()).find("N = 1"), std::string::npos);
  }
  PhysicalParams q = p;
  q.omega_rabi = 0.0;
  EXPECT_THROW(build_schedule(3, q), std::invalid_argument);
  q = p;
  q.gprime = 0.0;
  EXPECT_THROW(build_schedule(3, q), std::invalid_argument);
}

TEST(Schedule, asynchronous_lanes) {
  PhysicalParams p = PhysicalParams::symmetric(1.0, 20.0);
  EXPECT_THROW(build_schedule_async(3, p), std::invalid_argument);
  p.g1 = 0.8;
  const ProtocolSchedule s = build_schedule_async(4, p);
  EXPECT_TRUE(s.asynchronous);
  double clock = 0.0;
  for (const Segment& seg : s.segments) {
    EXPECT_DOUBLE_EQ(seg.t_start, clock);
    clock += seg.duration;
  }
  // the slower lane (cavity 1) sets the end of the interleaved phase
  const double pulse = kPi / 40.0;
  double lane1 = 0.0;
  for (int j = 1; j <= 3; ++j) lane1 += kPi / (2 * std::sqrt(double(j)) * 0.8) + (j < 3 ? pulse : 0.0);
  const auto first_final = std::find_if(s.segments.begin(), s.segments.end(),
                                        [](const Segment& x) { return x.step == 4; });
  ASSERT_NE(first_final, s.segments.end());
  EXPECT_NEAR(first_final->t_start, lane1, 1e-12);
  // only the fast lane idles
  bool lane2_idle = false;
  for (auto it = s.segments.begin(); it != first_final; ++it) {
    EXPECT_NE(it->drive.lane1, LaneMode::Idle);
    lane2_idle |= it->drive.lane2 == LaneMode::Idle;
  }
  EXPECT_TRUE(lane2_idle);
  EXPECT_NEAR(s.segments.back().duration, 3 * kPi / (2 * 2.0 * 0.8), 1e-12);
}

TEST(States, noon_target_phase) {
  const CompositeSpace s(5, 5);
  const StateVector t2 = noon_target(s, 2);
  EXPECT_NEAR(std::abs(t2.at(L::G, 2, 0) - 1 / std::sqrt(2.0)), 0, 1e-15);
  const StateVector t3 = noon_target(s, 3);
  EXPECT_NEAR(std::abs(t3.at(L::G, 0, 3) - cplx(0, -1 / std::sqrt(2.0))), 0, 1e-15);
  EXPECT_NEAR(t3.norm(), 1.0, 1e-15);
  EXPECT_THROW(noon_target(s, 6), std::out_of_range);
  EXPECT_THROW(noon_target(CompositeSpace(5, 2), 3), std::out_of_range);
  const StateVector psi = initial_ket(s);
  EXPECT_NEAR(std::norm(psi.at(L::E, 0, 0)) + std::norm(psi.at(L::A, 0, 0)), 1.0, 1e-15);
}

TEST(States, ideal_ladder_matches_unitary_integration) {
  // each closed-form checkpoint equals an independent propagation of the
  // previous one through the same segment
  const int n = 4;
  const CompositeSpace s(n + 1, n + 1);
  const oracle::Ops o(n + 1, n + 1);
  const PhysicalParams p = PhysicalParams::symmetric(1.0, 40.0);
  const std::vector<StateVector> ladder = ideal_ladder(s, n);
  const ProtocolSchedule sched = build_schedule(n, p);
  ASSERT_EQ(ladder.size(), sched.segments.size());
  oracle::Vec psi(s.dim());
  for (std::size_t i = 0; i < s.dim(); ++i) psi(i) = initial_ket(s)[i];
  for (std::size_t k = 0; k < ladder.size(); ++k) {
    const Segment& seg = sched.segments[k];
    oracle::Mat h = oracle::Mat::Zero(s.dim(), s.dim());
    switch (seg.kind) {
      case SegmentKind::ResonantBoth: h = oracle::h1(o, p.g1, p.g2); break;
      case SegmentKind::DoublePulse: h = oracle::h3(o, p.omega_rabi) + oracle::h5(o, p.omega_rabi); break;
      case SegmentKind::PulseAF: h = oracle::h3(o, p.omega_rabi); break;
      case SegmentKind::PulseEG: h = oracle::h5(o, p.omega_rabi); break;
      case SegmentKind::ResonantAE: h = oracle::h4(o, p.gprime); break;
      default: FAIL();
    }
    psi = (cplx(0, -seg.duration) * h).exp() * psi;
    double err = 0.0;
    for (std::size_t i = 0; i < s.dim(); ++i) err = std::max(err, std::abs(psi(i) - ladder[k][i]));
    EXPECT_LT(err, 1e-12) << seg.label;
  }
  const StateVector target = noon_target(s, n);
  for (std::size_t i = 0; i < s.dim(); ++i) EXPECT_NEAR(std::abs(ladder.back()[i] - target[i]), 0, 1e-12);
}

TEST(Run, ideal_protocol_reaches_noon_state) {
  for (int n = 2; n <= 6; ++n) {
    const RunResult r = run_protocol(ideal(n));
    EXPECT_GT(r.fidelity, 0.9999) << n;
    EXPECT_TRUE(r.pure_state_path);
    ASSERT_EQ(r.checkpoints.size(), static_cast<std::size_t>(2 * n + 1));
    for (const Checkpoint& c : r.checkpoints) {
      ASSERT_TRUE(c.fidelity.has_value());
      EXPECT_GT(*c.fidelity, 0.9999) << n << " " << c.label;
    }
    EXPECT_TRUE(r.warnings.empty());
    EXPECT_LT(r.diagnostics.edge_population, 1e-12);
  }
}

TEST(Run, dynamic_pulses_cost_fidelity_of_order_g_over_omega) {
  RunConfig c = ideal(3);
  c.pulses = PulseModel::Dynamic;
  c.params = PhysicalParams::symmetric(1.0, 10.0);
  const double f10 = run_protocol(c).fidelity;
  c.params = PhysicalParams::symmetric(1.0, 80.0);
  const double f80 = run_protocol(c).fidelity;
  EXPECT_LT(f10, f80);
  EXPECT_GT(f80, 0.99);
  EXPECT_LT(f10, 0.999);
}

// RK4 on rho is not the outer product of RK4 on psi, so the two paths agree
// to the discretization error, which shrinks as dt^4.
TEST(Run, pure_and_density_paths_agree) {
  for (auto pulses : {PulseModel::Dynamic, PulseModel::Instantaneous}) {
    RunConfig c = ideal(2);
    c.pulses = pulses;
    c.params.g12 = 0.05;
    c.params.delta = 0.0;  // static crosstalk survives averaging
    double prev = 1.0;
    for (double steps : {100.0, 200.0}) {
      c.steps.steps_per_period = steps;
      c.rates = NoiseRates::none();
      const RunResult pure = run_protocol(c);
      c.rates.kappa1 = 1e-300;  // forces the density-matrix path without changing the physics
      const RunResult mixed = run_protocol(c);
      EXPECT_TRUE(pure.pure_state_path);
      EXPECT_FALSE(mixed.pure_state_path);
      const double diff = std::abs(pure.fidelity - mixed.fidelity);
      EXPECT_LT(diff, 1e-6) << steps;
      for (std::size_t k = 0; k < pure.checkpoints.size(); ++k) {
        EXPECT_NEAR(*pure.checkpoints[k].fidelity, *mixed.checkpoints[k].fidelity, 1e-6);
      }
      EXPECT_LT(diff, prev / 8.0) << diff << " after " << prev;
      prev = diff;
    }
  }
}

TEST(Run, noise_lowers_fidelity_and_keeps_state_physical) {
  RunConfig c = ideal(3);
  c.pulses = PulseModel::Dynamic;
  c.params = PhysicalParams::symmetric(1.0, 40.0);
  c.rates.kappa1 = c.rates.kappa2 = 0.01;
  c.rates.gphi_a = 0.02;
  c.rates.gamma_eg = 0.01;
  const RunResult r = run_protocol(c);
  EXPECT_LT(r.fidelity, 0.99);
  EXPECT_GT(r.fidelity, 0.8);
  EXPECT_LT(r.diagnostics.trace_drift, 1e-10);
  EXPECT_LT(r.diagnostics.hermiticity, 1e-10);
  EXPECT_GT(r.diagnostics.min_eigenvalue, -1e-8);
}

TEST(Run, edge_warning_only_above_threshold) {
  RunConfig c = ideal(3);
  EXPECT_TRUE(run_protocol(c).warnings.empty());
  c.nmax1 = 3;  // the target itself sits on the truncation edge
  const RunResult r = run_protocol(c);
  ASSERT_EQ(r.warnings.size(), 1u);
  EXPECT_NE(r.warnings[0].find("increase nmax"), std::string::npos);
  EXPECT_GT(r.diagnostics.edge_population, 0.4);
}

TEST(Run, automatic_cutoff_widens_on_edge_population) {
  // Slow pulses against strong coupling pump photons past N + 3.
  RunConfig c = ideal(3);
  c.pulses = PulseModel::Dynamic;
  c.params = PhysicalParams::symmetric(1.5, 2.0);
  c.steps.steps_per_period = 50.0;
  RunConfig fixed = c;
  fixed.nmax1 = fixed.nmax2 = 6;
  const RunResult narrow = run_protocol(fixed);
  ASSERT_GT(narrow.diagnostics.edge_population, 1e-3);

  const RunResult r = run_protocol(c);
  EXPECT_EQ(r.final_state.space().nmax1(), 8);
  EXPECT_EQ(r.final_state.space().nmax2(), 8);
  EXPECT_LT(r.diagnostics.edge_population, 1e-4);
  ASSERT_EQ(r.warnings.size(), 1u);
  EXPECT_NE(r.warnings[0].find("raised to 8"), std::string::npos);

  fixed.nmax1 = fixed.nmax2 = 8;
  EXPECT_NEAR(run_protocol(fixed).fidelity, r.fidelity, 1e-12);
}

TEST(Run, asynchronous_schedule_without_noise) {
  RunConfig c = ideal(3);
  c.params.g1 = 0.9;
  c.schedule = ScheduleMode::Asynchronous;
  const RunResult r = run_protocol(c);
  EXPECT_GT(r.fidelity, 0.999);
  for (const Checkpoint& cp : r.checkpoints) EXPECT_FALSE(cp.fidelity.has_value());
  c.params.g1 = 1.0;
  EXPECT_THROW(run_protocol(c), std::invalid_argument);
}

TEST(Run, default_truncation_and_validation) {
  RunConfig c = ideal(4);
  EXPECT_EQ(c.space().nmax1(), 7);
  EXPECT_EQ(c.space().nmax2(), 7);
  c.nmax2 = 3;
  EXPECT_THROW(run_protocol(c), std::invalid_argument);
  c = ideal(4);
  c.rates.kappa1 = -1.0;
  EXPECT_THROW(run_protocol(c), std::invalid_argument);
}

TEST(Params, rescaling_keeps_ratios) {
  PhysicalParams p = PhysicalParams::symmetric(2.0, 30.0);
  p.g1 = 1.9;
  p.g12 = 0.2;
  p.delta = 100.0;
  const PhysicalParams q = with_reference_g(p, 5.0);
  EXPECT_DOUBLE_EQ(q.g, 5.0);
  EXPECT_DOUBLE_EQ(q.g1, 4.75);
  EXPECT_DOUBLE_EQ(q.g2, 5.0);
  EXPECT_DOUBLE_EQ(q.gprime, 5.0);
  EXPECT_DOUBLE_EQ(q.g12, 0.5);
  EXPECT_EQ(q.delta, 100.0);
  EXPECT_EQ(q.omega_rabi, 30.0);
  EXPECT_THROW(with_reference_g(p, 0.0), std::invalid_argument);
  EXPECT_EQ(pulse_model_name(PulseModel::Instantaneous), "instantaneous");
  EXPECT_EQ(schedule_mode_name(ScheduleMode::Asynchronous), "async");
}
