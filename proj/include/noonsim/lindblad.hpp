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

#include <limits>
#include <stdexcept>
#include <string>
#include <vector>

#include "noonsim/fockspace.hpp"
#include "noonsim/hamiltonians.hpp"

namespace noonsim {

/// Decay and dephasing rates in 1/s. Zero switches a channel off.
struct NoiseRates {
  double kappa1 = 0.0;
  double kappa2 = 0.0;
  double gamma_ae = 0.0;
  double gamma_af = 0.0;
  double gamma_ag = 0.0;
  double gamma_ef = 0.0;
  double gamma_eg = 0.0;
  double gamma_fg = 0.0;
  double gphi_a = 0.0;
  double gphi_e = 0.0;
  double gphi_f = 0.0;

  static NoiseRates none() { return {}; }
  /// Reference flux device and resonators: dephasing 5 / 1.5 / 0.5 us
  /// (f, e, a), relaxation 10 us (f->g), 3 us (e->g, e->f), 1.5 us (a->e,
  /// a->f, a->g), cavities 20 us.
  static NoiseRates reference_device();

  void validate() const;
  bool all_zero() const;
  /// Sum of every rate; an upper bound on any decay frequency in the generator.
  double total() const;
};

struct Channel {
  std::string name;
  SparseOperator op;
  double rate;
};

using CollapseSet = std::vector<Channel>;

/// One channel per nonzero rate, in the order a1, a2, a->e, a->f, a->g,
/// e->f, e->g, f->g, dephasing a, e, f.
CollapseSet collapse_operators(const NoiseRates& rates, const CompositeSpace& space);

/// d rho / dt = -i[H, rho] + sum_k rate_k D[L_k] rho, for any (not necessarily
/// Hermitian) rho.
DensityMatrix liouvillian_rhs(const DensityMatrix& rho, const SparseOperator& h,
                              const CollapseSet& collapses);

class IntegrationError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

/// Fixed-step size rule: dt <= (2 pi / w_fast) / steps_per_period, and dt <= max_dt.
struct StepPolicy {
  double steps_per_period = 50.0;
  double max_dt = std::numeric_limits<double>::infinity();

  /// Largest admissible step for a segment whose fastest frequency is
  /// `fastest` (rad/s).
  double max_step(double fastest) const;
};

/// Liouvillian of one segment, prepared once and applied at many times.
/// Applies the generator term by term; never forms the dim^2 x dim^2
/// superoperator.
class Liouvillian {
 public:
  Liouvillian(SegmentHamiltonian h, const CollapseSet& collapses);

  std::size_t dim() const { return dim_; }

  /// out = L(t)[rho] for Hermitian rho. The result is Hermitian up to rounding.
  void apply_hermitian(double t, const cplx* rho, cplx* out);

 private:
  struct Run {
    std::size_t src;
    std::size_t dst;
    std::size_t len;
    std::size_t weight_offset;
  };
  struct Jump {
    double rate;
    std::vector<Run> runs;
    std::vector<double> weights;
  };

  void add_jump(const Jump& jump, const cplx* rho, cplx* out) const;

  std::size_t dim_;
  SegmentHamiltonian h_;
  SparseOperator rotating_dag_;
  SparseOperator rotating_t_;      // transposes feed the right-hand products
  SparseOperator rotating_dag_t_;
  SparseOperator h_eff_;  // off-diagonal part of H - (i/2) sum rate L^dagger L
  SparseOperator h_eff_dag_t_;
  std::vector<double> diag_re_;  // its diagonal, split into real and imaginary parts
  std::vector<double> diag_im_;
  bool has_diag_re_ = false;
  bool has_diag_im_ = false;
  std::vector<Jump> jumps_;
  std::vector<SparseOperator> general_jumps_;  // channels that are not weighted partial permutations
  std::vector<double> general_rates_;
  std::vector<cplx> scratch_;
  std::vector<cplx> scratch2_;
};

/// Integrates rho over [t_start, t_start + duration] with classical RK4 using
/// ceil(duration / dt) equal steps. Throws IntegrationError when the trace
/// drifts by more than 1e-6 or Hermiticity by more than 1e-8.
DensityMatrix evolve_segment(const DensityMatrix& rho0, const SegmentHamiltonian& h,
                             const CollapseSet& collapses, double t_start, double duration,
                             double dt);

DensityMatrix evolve_segment(const DensityMatrix& rho0, SegmentKind kind, double duration,
                             double t_start, const PhysicalParams& params,
                             const NoiseRates& rates, double dt, CrosstalkMode mode);

/// Closed-system RK4 propagation of a ket.
StateVector evolve_unitary(const StateVector& psi0, const SparseOperator& h, double duration,
                           double dt);
StateVector evolve_unitary(const StateVector& psi0, const SegmentHamiltonian& h,
                           double t_start, double duration, double dt);

/// Number of equal steps used for a segment of `duration` with step bound `dt`.
std::size_t step_count(double duration, double dt);

}  // namespace noonsim
