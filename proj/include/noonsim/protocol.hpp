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

#pragma once

#include <optional>
#include <string>
#include <string_view>
#include <vector>

#include "noonsim/fockspace.hpp"
#include "noonsim/hamiltonians.hpp"
#include "noonsim/lindblad.hpp"
#include "noonsim/metrics.hpp"

namespace noonsim {

struct Segment {
  SegmentKind kind;
  Drive drive;
  double t_start;   // s, protocol clock
  double duration;  // s
  int step;         // 1 .. N+1; 0 for the interleaved phase of an asynchronous schedule
  std::string label;
};

struct ProtocolSchedule {
  int n_photons = 0;
  bool asynchronous = false;
  std::vector<Segment> segments;
  double total_time = 0.0;
};

/// The (N+1)-step sequence with every resonant duration derived from the
/// reference coupling g (2N+1 segments):
///   steps j < N:  resonant pi/(2 sqrt(j) g), then (for j < N-1) a double
///                 pulse pi/(2 Omega) pumping |g> -> |e> and |f> -> |a>
///   step N:       pulse on f<->a, then e<->a resonance pi/(2 sqrt(N) g')
///   step N+1:     pulse on g<->e, then resonant 3 pi/(2 sqrt(N) g)
/// Throws std::invalid_argument for N < 2.
ProtocolSchedule build_schedule(int n_photons, const PhysicalParams& params);

/// Variant for g1 != g2: the two subspaces run their first N-1 steps on their
/// own clocks (durations from g1 and g2), the faster one idles until the
/// slower finishes, then steps N and N+1 follow. Throws for g1 == g2.
ProtocolSchedule build_schedule_async(int n_photons, const PhysicalParams& params);

enum class PulseModel { Dynamic, Instantaneous };
enum class ScheduleMode { Synchronous, Asynchronous };

std::string_view pulse_model_name(PulseModel m);
std::string_view schedule_mode_name(ScheduleMode m);

struct RunConfig {
  int n_photons = 2;
  PhysicalParams params;
  NoiseRates rates;
  int nmax1 = 0;  // both 0: N + 3, widened while the edge population exceeds 1e-3
  int nmax2 = 0;
  StepPolicy steps;
  CrosstalkMode crosstalk = CrosstalkMode::Averaged;
  PulseModel pulses = PulseModel::Dynamic;
  ScheduleMode schedule = ScheduleMode::Synchronous;

  void validate() const;
  CompositeSpace space() const;
  ProtocolSchedule build() const;
};

struct Checkpoint {
  std::string label;
  double t_end;
  /// Fidelity against the analytic state after this segment; empty for
  /// asynchronous schedules, which have no closed-form ladder.
  std::optional<double> fidelity;
};

struct RunResult {
  DensityMatrix final_state;
  double fidelity;
  std::vector<Checkpoint> checkpoints;
  Diagnostics diagnostics;
  std::vector<std::string> warnings;
  ProtocolSchedule schedule;
  bool pure_state_path;  // closed system propagated as a ket
  double wall_ms;
};

/// (|e> + |a>)/sqrt(2) with both cavities empty.
StateVector initial_ket(const CompositeSpace& space);
DensityMatrix initial_state(const CompositeSpace& space);

/// (-i)^{N+2}/sqrt(2) |g>(|N,0> + |0,N>). Throws std::out_of_range if N exceeds
/// either truncation.
StateVector noon_target(const CompositeSpace& space, int n_photons);

/// Closed-form state after every segment of build_schedule(N) for symmetric
/// couplings, composed from the two-level rotation formulas rather than by
/// numerical integration.
std::vector<StateVector> ideal_ladder(const CompositeSpace& space, int n_photons);

RunResult run_protocol(const RunConfig& config);

/// Rescales g and every coupling expressed relative to it (g1, g2, g', g12).
PhysicalParams with_reference_g(const PhysicalParams& p, double g);

}  // namespace noonsim
