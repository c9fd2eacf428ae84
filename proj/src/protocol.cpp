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

#include "noonsim/protocol.hpp"

#include <algorithm>
#include <chrono>
#include <cmath>
#include <map>
#include <numbers>
#include <stdexcept>
#include <string>
#include <tuple>

namespace noonsim {

namespace {

using std::numbers::pi;
constexpr cplx kI{0.0, 1.0};

void require_protocol_inputs(int n_photons, const PhysicalParams& p) {
  if (n_photons < 2) {
    throw std::invalid_argument(
        "N must be >= 2 (got " + std::to_string(n_photons) +
        "): for N = 1 the step-N pulse on f<->a would rotate the initial |a> component into "
        "-|f>, since no earlier step moves it out of |a>");
  }
  p.validate();
  if (p.omega_rabi <= 0.0) {
    throw std::invalid_argument("pulse Rabi frequency must be > 0");
  }
  if (p.gprime <= 0.0) {
    throw std::invalid_argument("coupling g' must be > 0");
  }
}

class ScheduleBuilder {
 public:
  void add(SegmentKind kind, Drive drive, double duration, int step, std::string label) {
    segments_.push_back({kind, drive, clock_, duration, step, std::move(label)});
    clock_ += duration;
  }
  void add(SegmentKind kind, double duration, int step, std::string label) {
    add(kind, drive_of(kind), duration, step, std::move(label));
  }
  ProtocolSchedule finish(int n_photons, bool asynchronous) {
    return {n_photons, asynchronous, std::move(segments_), clock_};
  }

 private:
  std::vector<Segment> segments_;
  double clock_ = 0.0;
};

std::string step_label(int step, const char* what) {
  return "step " + std::to_string(step) + " / " + what;
}

void append_final_steps(ScheduleBuilder& b, int n, const PhysicalParams& p, double g_last) {
  const double pulse = pi / (2.0 * p.omega_rabi);
  const double root_n = std::sqrt(static_cast<double>(n));
  b.add(SegmentKind::PulseAF, pulse, n, step_label(n, "pulse f-a"));
  b.add(SegmentKind::ResonantAE, pi / (2.0 * root_n * p.gprime), n, step_label(n, "resonant e-a"));
  b.add(SegmentKind::PulseEG, pulse, n + 1, step_label(n + 1, "pulse g-e"));
  b.add(SegmentKind::ResonantBoth, 3.0 * pi / (2.0 * root_n * g_last), n + 1,
        step_label(n + 1, "resonant"));
}

// -- Closed-form ket algebra for the ideal ladder ---------------------------

using Key = std::tuple<int, int, int>;  // level, n1, n2
using Ket = std::map<Key, cplx>;

int lvl(DeviceLevel l) { return static_cast<int>(l); }

void put(Ket& k, DeviceLevel l, int n1, int n2, cplx a) {
  if (a != cplx{}) {
    k[{lvl(l), n1, n2}] += a;
  }
}

// exp(-i theta sqrt(n+1) sigma_x) on the pair (upper, n) <-> (lower, n+1) of
// the chosen photon mode; components outside the pair pass through.
Ket resonant(const Ket& in, DeviceLevel upper, DeviceLevel lower, int cavity, double theta) {
  Ket out;
  for (const auto& [key, amp] : in) {
    const auto [l, n1, n2] = key;
    const int n = cavity == 1 ? n1 : n2;
    const int d1 = cavity == 1 ? 1 : 0;
    const int d2 = cavity == 2 ? 1 : 0;
    if (l == lvl(upper)) {
      const double x = std::sqrt(static_cast<double>(n + 1)) * theta;
      put(out, upper, n1, n2, std::cos(x) * amp);
      put(out, lower, n1 + d1, n2 + d2, -kI * std::sin(x) * amp);
    } else if (l == lvl(lower) && n >= 1) {
      const double x = std::sqrt(static_cast<double>(n)) * theta;
      put(out, lower, n1, n2, std::cos(x) * amp);
      put(out, upper, n1 - d1, n2 - d2, -kI * std::sin(x) * amp);
    } else {
      put(out, static_cast<DeviceLevel>(l), n1, n2, amp);
    }
  }
  return out;
}

// Drive with phase e^{i pi/2}: |low> -> cos|low> + sin|up>, |up> -> -sin|low> + cos|up>.
Ket rotate(const Ket& in, DeviceLevel up, DeviceLevel low, double phi) {
  Ket out;
  for (const auto& [key, amp] : in) {
    const auto [l, n1, n2] = key;
    if (l == lvl(low)) {
      put(out, low, n1, n2, std::cos(phi) * amp);
      put(out, up, n1, n2, std::sin(phi) * amp);
    } else if (l == lvl(up)) {
      put(out, low, n1, n2, -std::sin(phi) * amp);
      put(out, up, n1, n2, std::cos(phi) * amp);
    } else {
      put(out, static_cast<DeviceLevel>(l), n1, n2, amp);
    }
  }
  return out;
}

StateVector to_state(const CompositeSpace& space, const Ket& k) {
  StateVector psi(space);
  for (const auto& [key, amp] : k) {
    const auto [l, n1, n2] = key;
    if (std::abs(amp) < 1e-15) {
      continue;
    }
    psi[space.index(static_cast<DeviceLevel>(l), n1, n2)] += amp;
  }
  return psi;
}

// (-i)^k exactly.
cplx minus_i_power(int k) {
  switch (((k % 4) + 4) % 4) {
    case 0:
      return 1.0;
    case 1:
      return -kI;
    case 2:
      return -1.0;
    default:
      return kI;
  }
}

bool has_pulse(const Drive& d) {
  return d.lane1 == LaneMode::Pulse || d.lane2 == LaneMode::Pulse;
}

// U rho U^dagger = (U (U rho)^dagger)^dagger
DensityMatrix conjugate_by(const SparseOperator& u, const DensityMatrix& rho) {
  const std::size_t n = rho.dim();
  DensityMatrix x(rho.space());
  u.accumulate_product(1.0, rho.data(), x.data(), n);
  const DensityMatrix xd = x.adjoint();
  DensityMatrix y(rho.space());
  u.accumulate_product(1.0, xd.data(), y.data(), n);
  return y.adjoint();
}

}  // namespace

std::string_view pulse_model_name(PulseModel m) {
  return m == PulseModel::Dynamic ? "dynamic" : "instantaneous";
}

std::string_view schedule_mode_name(ScheduleMode m) {
  return m == ScheduleMode::Synchronous ? "sync" : "async";
}

PhysicalParams with_reference_g(const PhysicalParams& p, double g) {
  if (!(p.g > 0.0) || !(g > 0.0)) {
    throw std::invalid_argument("reference coupling must be > 0");
  }
  const double s = g / p.g;
  PhysicalParams out = p;
  out.g = g;
  out.g1 = p.g1 * s;
  out.g2 = p.g2 * s;
  out.gprime = p.gprime * s;
  out.g12 = p.g12 * s;
  return out;
}

// ---------------------------------------------------------------------------
// Schedules

ProtocolSchedule build_schedule(int n_photons, const PhysicalParams& params) {
  require_protocol_inputs(n_photons, params);
  const double pulse = pi / (2.0 * params.omega_rabi);
  ScheduleBuilder b;
  for (int j = 1; j <= n_photons - 1; ++j) {
    b.add(SegmentKind::ResonantBoth, pi / (2.0 * std::sqrt(static_cast<double>(j)) * params.g), j,
          step_label(j, "resonant"));
    // Step N-1 ends on |g,N-1,0> + |f,0,N-1>: no pump-back pulse.
    if (j < n_photons - 1) {
      b.add(SegmentKind::DoublePulse, pulse, j, step_label(j, "double pulse"));
    }
  }
  append_final_steps(b, n_photons, params, params.g);
  return b.finish(n_photons, false);
}

ProtocolSchedule build_schedule_async(int n_photons, const PhysicalParams& params) {
  require_protocol_inputs(n_photons, params);
  if (params.g1 == params.g2) {
    throw std::invalid_argument(
        "asynchronous schedule requires g1 != g2; use the synchronous schedule");
  }
  if (params.g1 <= 0.0 || params.g2 <= 0.0) {
    throw std::invalid_argument("asynchronous schedule requires g1 > 0 and g2 > 0");
  }
  const double pulse = pi / (2.0 * params.omega_rabi);

  struct Phase {
    LaneMode mode;
    double end;
  };
  auto lane = [&](double coupling) {
    std::vector<Phase> phases;
    double t = 0.0;
    for (int j = 1; j <= n_photons - 1; ++j) {
      t += pi / (2.0 * std::sqrt(static_cast<double>(j)) * coupling);
      phases.push_back({LaneMode::Resonant, t});
      if (j < n_photons - 1) {
        t += pulse;
        phases.push_back({LaneMode::Pulse, t});
      }
    }
    return phases;
  };
  std::vector<Phase> lane1 = lane(params.g1);
  std::vector<Phase> lane2 = lane(params.g2);
  const double finish = std::max(lane1.back().end, lane2.back().end);
  // The faster subspace is detuned from its cavity until the slower catches up.
  lane1.push_back({LaneMode::Idle, finish});
  lane2.push_back({LaneMode::Idle, finish});

  ScheduleBuilder b;
  std::size_t i1 = 0;
  std::size_t i2 = 0;
  double t = 0.0;
  while (t < finish) {
    while (i1 + 1 < lane1.size() && lane1[i1].end <= t) {
      ++i1;
    }
    while (i2 + 1 < lane2.size() && lane2[i2].end <= t) {
      ++i2;
    }
    const double next = std::min(lane1[i1].end, lane2[i2].end);
    const Drive d{lane1[i1].mode, lane2[i2].mode, false};
    SegmentKind kind = SegmentKind::Split;
    for (SegmentKind k : {SegmentKind::ResonantBoth, SegmentKind::DoublePulse,
                          SegmentKind::Decoupled}) {
      if (drive_of(k) == d) {
        kind = k;
      }
    }
    auto mode_name = [](LaneMode m) {
      switch (m) {
        case LaneMode::Idle:
          return "idle";
        case LaneMode::Resonant:
          return "resonant";
        case LaneMode::Residual:
          return "residual";
        case LaneMode::Pulse:
          return "pulse";
      }
      return "?";
    };
    if (next > t) {
      b.add(kind, d, next - t, 0,
            std::string("steps 1-") + std::to_string(n_photons - 1) + " / cavity1 " +
                mode_name(d.lane1) + ", cavity2 " + mode_name(d.lane2));
    }
    t = next;
  }
  // Step N+1 transfers |e,N-1,0> -> |g,N,0> through cavity 1, so its
  // duration follows g1.
  append_final_steps(b, n_photons, params, params.g1);
  return b.finish(n_photons, true);
}

// ---------------------------------------------------------------------------
// States

StateVector initial_ket(const CompositeSpace& space) {
  StateVector psi(space);
  const double s = 1.0 / std::sqrt(2.0);
  psi.at(DeviceLevel::E, 0, 0) = s;
  psi.at(DeviceLevel::A, 0, 0) = s;
  return psi;
}

DensityMatrix initial_state(const CompositeSpace& space) {
  return DensityMatrix::from_pure(initial_ket(space));
}

StateVector noon_target(const CompositeSpace& space, int n_photons) {
  if (n_photons < 1 || n_photons > space.nmax1() || n_photons > space.nmax2()) {
    throw std::out_of_range("NOON target N=" + std::to_string(n_photons) +
                            " does not fit the cavity truncation");
  }
  StateVector psi(space);
  const cplx amp = minus_i_power(n_photons + 2) / std::sqrt(2.0);
  psi.at(DeviceLevel::G, n_photons, 0) = amp;
  psi.at(DeviceLevel::G, 0, n_photons) = amp;
  return psi;
}

std::vector<StateVector> ideal_ladder(const CompositeSpace& space, int n_photons) {
  if (n_photons < 2) {
    throw std::invalid_argument("ideal ladder requires N >= 2");
  }
  using L = DeviceLevel;
  const double s = 1.0 / std::sqrt(2.0);
  Ket k{{{lvl(L::E), 0, 0}, s}, {{lvl(L::A), 0, 0}, s}};
  std::vector<StateVector> out;
  for (int j = 1; j <= n_photons - 1; ++j) {
    // Resonance for t_j = pi/(2 sqrt(j) g): g t = pi/(2 sqrt(j)).
    const double theta = pi / (2.0 * std::sqrt(static_cast<double>(j)));
    k = resonant(k, L::E, L::G, 1, theta);
    k = resonant(k, L::A, L::F, 2, theta);
    out.push_back(to_state(space, k));
    if (j < n_photons - 1) {
      k = rotate(k, L::E, L::G, pi / 2.0);
      k = rotate(k, L::A, L::F, pi / 2.0);
      out.push_back(to_state(space, k));
    }
  }
  const double root_n = std::sqrt(static_cast<double>(n_photons));
  k = rotate(k, L::A, L::F, pi / 2.0);
  out.push_back(to_state(space, k));
  k = resonant(k, L::A, L::E, 2, pi / (2.0 * root_n));
  out.push_back(to_state(space, k));
  k = rotate(k, L::E, L::G, pi / 2.0);
  out.push_back(to_state(space, k));
  k = resonant(k, L::E, L::G, 1, 3.0 * pi / (2.0 * root_n));
  k = resonant(k, L::A, L::F, 2, 3.0 * pi / (2.0 * root_n));
  out.push_back(to_state(space, k));
  return out;
}

// ---------------------------------------------------------------------------
// Run

void RunConfig::validate() const {
  require_protocol_inputs(n_photons, params);
  rates.validate();
  if (nmax1 != 0 && nmax1 < n_photons) {
    throw std::invalid_argument("nmax1 must be >= N");
  }
  if (nmax2 != 0 && nmax2 < n_photons) {
    throw std::invalid_argument("nmax2 must be >= N");
  }
  (void)steps.max_step(1.0);
}

CompositeSpace RunConfig::space() const {
  return CompositeSpace(nmax1 == 0 ? n_photons + 3 : nmax1, nmax2 == 0 ? n_photons + 3 : nmax2);
}

ProtocolSchedule RunConfig::build() const {
  return schedule == ScheduleMode::Synchronous ? build_schedule(n_photons, params)
                                               : build_schedule_async(n_photons, params);
}

namespace {

constexpr double kEdgeLimit = 1e-3;
// Extra photons the automatic cutoff may add on top of N + 3.
constexpr int kMaxAutoExtra = 6;

RunResult run_in_space(const RunConfig& config, const CompositeSpace& space) {
  const auto wall_start = std::chrono::steady_clock::now();
  ProtocolSchedule schedule = config.build();
  const CollapseSet collapses = collapse_operators(config.rates, space);
  const bool pure = collapses.empty();
  const double noise_scale = config.rates.total();

  std::vector<StateVector> ladder;
  if (!schedule.asynchronous) {
    ladder = ideal_ladder(space, config.n_photons);
  }

  StateVector psi = initial_ket(space);
  DensityMatrix rho = pure ? DensityMatrix(space) : initial_state(space);
  std::vector<Checkpoint> checkpoints;
  checkpoints.reserve(schedule.segments.size());

  for (std::size_t k = 0; k < schedule.segments.size(); ++k) {
    const Segment& seg = schedule.segments[k];
    const bool instant = config.pulses == PulseModel::Instantaneous && has_pulse(seg.drive);
    if (instant) {
      const SparseOperator u =
          pairwise_propagator(pulse_drive(seg.drive, config.params, space), seg.duration);
      if (pure) {
        psi = u.apply(psi);
      } else {
        rho = conjugate_by(u, rho);
      }
    }
    const SegmentHamiltonian h =
        build_segment_hamiltonian(seg.drive, config.params, space, config.crosstalk, !instant);
    const double dt = config.steps.max_step(std::max(h.fastest_frequency, noise_scale));
    if (pure) {
      if (!h.stationary.empty() || h.time_dependent()) {
        psi = evolve_unitary(psi, h, seg.t_start, seg.duration, dt);
      }
    } else {
      rho = evolve_segment(rho, h, collapses, seg.t_start, seg.duration, dt);
    }

    std::optional<double> f;
    if (!ladder.empty()) {
      if (pure) {
        f = std::min(1.0, std::abs(ladder[k].inner(psi)));
      } else {
        f = fidelity(rho, ladder[k]);
      }
    }
    checkpoints.push_back({seg.label, seg.t_start + seg.duration, f});
  }

  if (pure) {
    rho = DensityMatrix::from_pure(psi);
  }
  const double f_final = fidelity(rho, noon_target(space, config.n_photons));
  Diagnostics diag = diagnostics(rho);
  std::vector<std::string> warnings;
  if (diag.edge_population > kEdgeLimit) {
    warnings.push_back("truncation-edge population " + std::to_string(diag.edge_population) +
                       " exceeds 1e-3; increase nmax");
  }
  const double wall_ms =
      std::chrono::duration<double, std::milli>(std::chrono::steady_clock::now() - wall_start)
          .count();
  return {std::move(rho), f_final, std::move(checkpoints), diag, std::move(warnings),
          std::move(schedule), pure, wall_ms};
}

}  // namespace

RunResult run_protocol(const RunConfig& config) {
  config.validate();
  if (config.nmax1 != 0 || config.nmax2 != 0) {
    return run_in_space(config, config.space());
  }
  // Automatic cutoff: widen by two photons while the edge holds too much.
  const auto wall_start = std::chrono::steady_clock::now();
  std::vector<std::string> notes;
  for (int extra = 0;; extra += 2) {
    const int n = config.n_photons + 3 + extra;
    RunResult r = run_in_space(config, CompositeSpace(n, n));
    if (r.diagnostics.edge_population <= kEdgeLimit || extra >= kMaxAutoExtra) {
      r.warnings.insert(r.warnings.begin(), notes.begin(), notes.end());
      r.wall_ms = std::chrono::duration<double, std::milli>(std::chrono::steady_clock::now() -
                                                            wall_start)
                      .count();
      return r;
    }
    notes.push_back("nmax " + std::to_string(n) + " left edge population " +
                    std::to_string(r.diagnostics.edge_population) + "; raised to " +
                    std::to_string(n + 2));
  }
}

}  // namespace noonsim
