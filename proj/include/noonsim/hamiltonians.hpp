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

#include <numbers>
#include <string_view>

#include "noonsim/fockspace.hpp"

namespace noonsim {

/// MHz (cycles) to angular frequency in rad/s.
constexpr double mhz_to_rad(double mhz) { return 2.0 * std::numbers::pi * mhz * 1e6; }
constexpr double rad_to_mhz(double rad) { return rad / (2.0 * std::numbers::pi * 1e6); }

/// Coupling constants and drive strengths, all in rad/s.
struct PhysicalParams {
  double g = 0.0;           // reference coupling; sets every scheduled duration
  double g1 = 0.0;          // cavity 1 on |g> <-> |e>
  double g2 = 0.0;          // cavity 2 on |f> <-> |a>
  double gprime = 0.0;      // cavity 2 on |e> <-> |a> (step N)
  double omega_rabi = 0.0;  // pulse Rabi frequency
  double g12 = 0.0;         // inter-cavity crosstalk
  double delta = 0.0;       // cavity detuning w_a2 - w_a1

  /// g1 = g2 = g' = g, no crosstalk.
  static PhysicalParams symmetric(double g, double omega_rabi);

  /// Throws std::invalid_argument on negative or non-finite values, or g == 0.
  void validate() const;
};

enum class SegmentKind {
  ResonantBoth,  // H1
  DoublePulse,   // H2 + H1
  PulseAF,       // H3 + H1
  ResonantAE,    // H4
  PulseEG,       // H5 + H1
  Decoupled,     // crosstalk only
  Split,         // per-lane configuration, used by asynchronous schedules
};

std::string_view kind_name(SegmentKind kind);

/// What one subspace (cavity 1 with |g>,|e>, or cavity 2 with |f>,|a>) is
/// doing during a segment.
enum class LaneMode {
  Idle,      // device detuned from this cavity
  Resonant,  // scheduled resonant exchange with the cavity
  Residual,  // cavity still resonant, but only as a side effect of another lane's pulse
  Pulse,     // classical drive on this lane's transition; the cavity coupling stays on
};

struct Drive {
  LaneMode lane1 = LaneMode::Idle;
  LaneMode lane2 = LaneMode::Idle;
  bool ae_coupling = false;  // cavity 2 on |e> <-> |a> (step-N retune)
  bool operator==(const Drive&) const = default;
};

/// Lane configuration of a named kind. Throws for SegmentKind::Split.
Drive drive_of(SegmentKind kind);

enum class CrosstalkMode { Exact, Averaged };

std::string_view crosstalk_name(CrosstalkMode mode);

SparseOperator h1(const PhysicalParams& p, const CompositeSpace& space);
SparseOperator h2(const PhysicalParams& p, const CompositeSpace& space);
SparseOperator h3(const PhysicalParams& p, const CompositeSpace& space);
SparseOperator h4(const PhysicalParams& p, const CompositeSpace& space);
SparseOperator h5(const PhysicalParams& p, const CompositeSpace& space);

/// g1 (a1 s+_eg + h.c.) and g2 (a2 s+_af + h.c.), the two halves of H1.
SparseOperator lane1_coupling(const PhysicalParams& p, const CompositeSpace& space);
SparseOperator lane2_coupling(const PhysicalParams& p, const CompositeSpace& space);

/// g12 (e^{i delta t} a1 a2^dagger + h.c.) at protocol time t.
SparseOperator crosstalk(const PhysicalParams& p, double t, const CompositeSpace& space);

/// H(t) = stationary + e^{i delta t} rotating + e^{-i delta t} rotating^dagger.
struct SegmentHamiltonian {
  SparseOperator stationary;
  SparseOperator rotating;
  double delta = 0.0;
  /// Largest angular frequency present; drives the step-size policy.
  double fastest_frequency = 0.0;

  bool time_dependent() const { return !rotating.empty() && delta != 0.0; }
  SparseOperator at(double t) const;
};

/// Full Hamiltonian for a lane configuration. With `with_pulses == false`
/// the pulse drives and the residual couplings that accompany them are left
/// out; what remains is the evolution that continues while an instantaneous
/// pulse is applied separately.
SegmentHamiltonian build_segment_hamiltonian(const Drive& drive, const PhysicalParams& p,
                                             const CompositeSpace& space, CrosstalkMode mode,
                                             bool with_pulses = true);

SparseOperator segment_hamiltonian(SegmentKind kind, const PhysicalParams& p, double t,
                                   const CompositeSpace& space, CrosstalkMode mode);

/// Sum of the classical drives active in `drive` (H5 for lane 1, H3 for lane 2).
SparseOperator pulse_drive(const Drive& drive, const PhysicalParams& p,
                           const CompositeSpace& space);

/// exp(-i H tau) for a Hamiltonian made of disjoint two-level couplings
/// (every basis state coupled to at most one other, no diagonal). This is the
/// exact rotation used for instantaneous pulses. Throws otherwise.
SparseOperator pairwise_propagator(const SparseOperator& h, double tau);

}  // namespace noonsim
