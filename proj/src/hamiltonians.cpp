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

#include "noonsim/hamiltonians.hpp"

#include <algorithm>
#include <cmath>
#include <stdexcept>
#include <string>

namespace noonsim {

namespace {

constexpr cplx kI{0.0, 1.0};

bool lane_coupled(LaneMode m, bool with_pulses) {
  switch (m) {
    case LaneMode::Idle:
      return false;
    case LaneMode::Resonant:
      return true;
    case LaneMode::Residual:
    case LaneMode::Pulse:
      return with_pulses;
  }
  return false;
}

void check_nonneg(double v, const char* name) {
  if (!std::isfinite(v) || v < 0.0) {
    throw std::invalid_argument(std::string("physical parameter ") + name +
                                " must be finite and >= 0");
  }
}

}  // namespace

PhysicalParams PhysicalParams::symmetric(double g, double omega_rabi) {
  PhysicalParams p;
  p.g = g;
  p.g1 = g;
  p.g2 = g;
  p.gprime = g;
  p.omega_rabi = omega_rabi;
  return p;
}

void PhysicalParams::validate() const {
  check_nonneg(g, "g");
  check_nonneg(g1, "g1");
  check_nonneg(g2, "g2");
  check_nonneg(gprime, "gprime");
  check_nonneg(omega_rabi, "omega_rabi");
  check_nonneg(g12, "g12");
  if (!std::isfinite(delta)) {
    throw std::invalid_argument("physical parameter delta must be finite");
  }
  if (g <= 0.0) {
    throw std::invalid_argument("reference coupling g must be > 0");
  }
}

std::string_view kind_name(SegmentKind kind) {
  switch (kind) {
    case SegmentKind::ResonantBoth:
      return "ResonantBoth";
    case SegmentKind::DoublePulse:
      return "DoublePulse";
    case SegmentKind::PulseAF:
      return "PulseAF";
    case SegmentKind::ResonantAE:
      return "ResonantAE";
    case SegmentKind::PulseEG:
      return "PulseEG";
    case SegmentKind::Decoupled:
      return "Decoupled";
    case SegmentKind::Split:
      return "Split";
  }
  return "?";
}

std::string_view crosstalk_name(CrosstalkMode mode) {
  return mode == CrosstalkMode::Exact ? "exact" : "averaged";
}

Drive drive_of(SegmentKind kind) {
  switch (kind) {
    case SegmentKind::ResonantBoth:
      return {LaneMode::Resonant, LaneMode::Resonant, false};
    case SegmentKind::DoublePulse:
      return {LaneMode::Pulse, LaneMode::Pulse, false};
    case SegmentKind::PulseAF:
      return {LaneMode::Residual, LaneMode::Pulse, false};
    case SegmentKind::ResonantAE:
      return {LaneMode::Idle, LaneMode::Idle, true};
    case SegmentKind::PulseEG:
      return {LaneMode::Pulse, LaneMode::Residual, false};
    case SegmentKind::Decoupled:
      return {LaneMode::Idle, LaneMode::Idle, false};
    case SegmentKind::Split:
      break;
  }
  throw std::invalid_argument("Split segments carry their own lane configuration");
}

SparseOperator lane1_coupling(const PhysicalParams& p, const CompositeSpace& space) {
  const SparseOperator up = annihilation(space, 1) * transition(space, DeviceLevel::E, DeviceLevel::G);
  return (up + up.dagger()) * cplx(p.g1);
}

SparseOperator lane2_coupling(const PhysicalParams& p, const CompositeSpace& space) {
  const SparseOperator up = annihilation(space, 2) * transition(space, DeviceLevel::A, DeviceLevel::F);
  return (up + up.dagger()) * cplx(p.g2);
}

SparseOperator h1(const PhysicalParams& p, const CompositeSpace& space) {
  return lane1_coupling(p, space) + lane2_coupling(p, space);
}

SparseOperator h5(const PhysicalParams& p, const CompositeSpace& space) {
  const SparseOperator drive = transition(space, DeviceLevel::E, DeviceLevel::G) * (p.omega_rabi * kI);
  return drive + drive.dagger();
}

SparseOperator h3(const PhysicalParams& p, const CompositeSpace& space) {
  const SparseOperator drive = transition(space, DeviceLevel::A, DeviceLevel::F) * (p.omega_rabi * kI);
  return drive + drive.dagger();
}

SparseOperator h2(const PhysicalParams& p, const CompositeSpace& space) {
  return h5(p, space) + h3(p, space);
}

SparseOperator h4(const PhysicalParams& p, const CompositeSpace& space) {
  const SparseOperator down = creation(space, 2) * transition(space, DeviceLevel::E, DeviceLevel::A);
  return (down + down.dagger()) * cplx(p.gprime);
}

namespace {

// g12 a1 a2^dagger: the e^{i delta t} half of the crosstalk term.
SparseOperator crosstalk_rotating(const PhysicalParams& p, const CompositeSpace& space) {
  return annihilation(space, 1) * creation(space, 2) * cplx(p.g12);
}

}  // namespace

SparseOperator crosstalk(const PhysicalParams& p, double t, const CompositeSpace& space) {
  if (p.g12 == 0.0) {
    return SparseOperator::zero(space);
  }
  const SparseOperator r = crosstalk_rotating(p, space);
  const cplx phase = std::exp(kI * (p.delta * t));
  return r * phase + r.dagger() * std::conj(phase);
}

SparseOperator SegmentHamiltonian::at(double t) const {
  if (rotating.empty()) {
    return stationary;
  }
  const cplx phase = std::exp(kI * (delta * t));
  return stationary + rotating * phase + rotating.dagger() * std::conj(phase);
}

SegmentHamiltonian build_segment_hamiltonian(const Drive& drive, const PhysicalParams& p,
                                             const CompositeSpace& space, CrosstalkMode mode,
                                             bool with_pulses) {
  SparseOperator stationary = SparseOperator::zero(space);
  double fastest = 0.0;
  const double root1 = std::sqrt(static_cast<double>(space.nmax1()));
  const double root2 = std::sqrt(static_cast<double>(space.nmax2()));

  if (lane_coupled(drive.lane1, with_pulses)) {
    stationary = stationary + lane1_coupling(p, space);
    fastest = std::max(fastest, p.g1 * root1);
  }
  if (lane_coupled(drive.lane2, with_pulses)) {
    stationary = stationary + lane2_coupling(p, space);
    fastest = std::max(fastest, p.g2 * root2);
  }
  if (drive.ae_coupling) {
    stationary = stationary + h4(p, space);
    fastest = std::max(fastest, p.gprime * root2);
  }
  if (with_pulses) {
    if (drive.lane1 == LaneMode::Pulse || drive.lane2 == LaneMode::Pulse) {
      stationary = stationary + pulse_drive(drive, p, space);
      fastest = std::max(fastest, p.omega_rabi);
    }
  }

  SegmentHamiltonian out{stationary, SparseOperator::zero(space), 0.0, 0.0};
  if (p.g12 > 0.0) {
    const double hop = p.g12 * root1 * root2;
    if (p.delta == 0.0) {
      out.stationary = out.stationary + crosstalk(p, 0.0, space);
      fastest = std::max(fastest, hop);
    } else if (mode == CrosstalkMode::Exact) {
      out.rotating = crosstalk_rotating(p, space);
      out.delta = p.delta;
      fastest = std::max({fastest, hop, std::abs(p.delta)});
    }
    // Averaged mode with delta != 0: the fast-rotating term is dropped.
  }
  out.fastest_frequency = fastest;
  return out;
}

SparseOperator segment_hamiltonian(SegmentKind kind, const PhysicalParams& p, double t,
                                   const CompositeSpace& space, CrosstalkMode mode) {
  return build_segment_hamiltonian(drive_of(kind), p, space, mode).at(t);
}

SparseOperator pulse_drive(const Drive& drive, const PhysicalParams& p,
                           const CompositeSpace& space) {
  SparseOperator out = SparseOperator::zero(space);
  if (drive.lane1 == LaneMode::Pulse) {
    out = out + h5(p, space);
  }
  if (drive.lane2 == LaneMode::Pulse) {
    out = out + h3(p, space);
  }
  return out;
}

SparseOperator pairwise_propagator(const SparseOperator& h, double tau) {
  const std::size_t n = h.dim();
  const auto rows = h.row_offsets();
  const auto cols = h.col_indices();
  const auto vals = h.values();
  std::vector<SparseOperator::Entry> u;
  u.reserve(2 * n);
  for (std::size_t r = 0; r < n; ++r) {
    const std::size_t count = rows[r + 1] - rows[r];
    if (count == 0) {
      u.push_back({r, r, 1.0});
      continue;
    }
    if (count != 1 || cols[rows[r]] == r) {
      throw std::invalid_argument("pairwise_propagator: row " + std::to_string(r) +
                                  " is not a single off-diagonal coupling");
    }
    const std::size_t c = cols[rows[r]];
    const cplx h_rc = vals[rows[r]];
    if (rows[c + 1] - rows[c] != 1 || cols[rows[c]] != r ||
        std::abs(vals[rows[c]] - std::conj(h_rc)) > 1e-12 * std::abs(h_rc)) {
      throw std::invalid_argument("pairwise_propagator: coupling " + std::to_string(r) + " <-> " +
                                  std::to_string(c) + " is not an isolated Hermitian pair");
    }
    // exp(-i tau H) on span{r, c}: cos(|h| tau) I - i sin(|h| tau) H / |h|
    const double mag = std::abs(h_rc);
    u.push_back({r, r, std::cos(mag * tau)});
    u.push_back({r, c, -kI * std::sin(mag * tau) * (h_rc / mag)});
  }
  return {h.space(), std::move(u)};
}

}  // namespace noonsim
