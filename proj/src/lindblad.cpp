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

#include "noonsim/lindblad.hpp"

#include <algorithm>
#include <cmath>
#include <numbers>

#include "noonsim/kernels.hpp"

namespace noonsim {

namespace {

constexpr cplx kI{0.0, 1.0};

double per_us(double lifetime_us) { return 1.0 / (lifetime_us * 1e-6); }

void check_rate(double v, const char* name) {
  if (!std::isfinite(v) || v < 0.0) {
    throw std::invalid_argument(std::string("noise rate ") + name + " must be finite and >= 0");
  }
}

// out[r][c] = a[r][c] + conj(a[c][r])
SparseOperator transposed(const SparseOperator& op) {
  auto e = op.entries();
  for (auto& x : e) std::swap(x.row, x.col);
  return SparseOperator(op.space(), std::move(e));
}

// out += coeff * m * op for a dense row-major n x n matrix m, where op_t is the
// transpose of op. Each output row only reads the matching row of m, so the
// right product never walks m by columns.
void accumulate_right(const SparseOperator& op_t, cplx coeff, const cplx* m, cplx* out,
                      std::size_t n) {
  const auto rows = op_t.row_offsets();
  const auto cols = op_t.col_indices();
  const auto vals = op_t.values();
  for (std::size_t r = 0; r < n; ++r) {
    const cplx* mr = m + r * n;
    cplx* o = out + r * n;
    for (std::size_t c = 0; c < n; ++c) {
      if (rows[c] == rows[c + 1]) continue;
      cplx acc{};
      for (std::size_t q = rows[c]; q < rows[c + 1]; ++q) acc += vals[q] * mr[cols[q]];
      o[c] += coeff * acc;
    }
  }
}

void adjoint_into(const cplx* a, cplx* out, std::size_t n) {
  for (std::size_t r = 0; r < n; ++r) {
    for (std::size_t c = 0; c < n; ++c) {
      out[c * n + r] = std::conj(a[r * n + c]);
    }
  }
}

// out += rate * L rho L^dagger = rate * (L (L rho)^dagger)^dagger, for any L and rho.
void add_general_jump(const SparseOperator& l, double rate, const cplx* rho, cplx* out,
                      std::vector<cplx>& t1, std::vector<cplx>& t2) {
  const std::size_t n = l.dim();
  std::fill(t1.begin(), t1.end(), cplx{});
  l.accumulate_product(1.0, rho, t1.data(), n);
  adjoint_into(t1.data(), t2.data(), n);
  std::fill(t1.begin(), t1.end(), cplx{});
  l.accumulate_product(1.0, t2.data(), t1.data(), n);
  for (std::size_t r = 0; r < n; ++r) {
    for (std::size_t c = 0; c < n; ++c) {
      out[r * n + c] += rate * std::conj(t1[c * n + r]);
    }
  }
}

SparseOperator dissipative_part(const CompositeSpace& space, const CollapseSet& collapses) {
  SparseOperator k = SparseOperator::zero(space);
  for (const auto& ch : collapses) {
    k = k + (ch.op.dagger() * ch.op) * cplx(ch.rate);
  }
  return k;
}

}  // namespace

// ---------------------------------------------------------------------------
// NoiseRates

NoiseRates NoiseRates::reference_device() {
  NoiseRates r;
  r.gphi_f = per_us(5.0);
  r.gphi_e = per_us(1.5);
  r.gphi_a = per_us(0.5);
  r.gamma_fg = per_us(10.0);
  r.gamma_eg = per_us(3.0);
  r.gamma_ef = per_us(3.0);
  r.gamma_ae = per_us(1.5);
  r.gamma_af = per_us(1.5);
  r.gamma_ag = per_us(1.5);
  r.kappa1 = per_us(20.0);
  r.kappa2 = per_us(20.0);
  return r;
}

void NoiseRates::validate() const {
  check_rate(kappa1, "kappa1");
  check_rate(kappa2, "kappa2");
  check_rate(gamma_ae, "gamma_ae");
  check_rate(gamma_af, "gamma_af");
  check_rate(gamma_ag, "gamma_ag");
  check_rate(gamma_ef, "gamma_ef");
  check_rate(gamma_eg, "gamma_eg");
  check_rate(gamma_fg, "gamma_fg");
  check_rate(gphi_a, "gphi_a");
  check_rate(gphi_e, "gphi_e");
  check_rate(gphi_f, "gphi_f");
}

bool NoiseRates::all_zero() const { return total() == 0.0; }

double NoiseRates::total() const {
  return kappa1 + kappa2 + gamma_ae + gamma_af + gamma_ag + gamma_ef + gamma_eg + gamma_fg +
         gphi_a + gphi_e + gphi_f;
}

CollapseSet collapse_operators(const NoiseRates& rates, const CompositeSpace& space) {
  rates.validate();
  using L = DeviceLevel;
  CollapseSet out;
  auto add = [&](const char* name, double rate, auto make) {
    if (rate > 0.0) {
      out.push_back({name, make(), rate});
    }
  };
  add("kappa1", rates.kappa1, [&] { return annihilation(space, 1); });
  add("kappa2", rates.kappa2, [&] { return annihilation(space, 2); });
  add("gamma_ae", rates.gamma_ae, [&] { return transition(space, L::E, L::A); });
  add("gamma_af", rates.gamma_af, [&] { return transition(space, L::F, L::A); });
  add("gamma_ag", rates.gamma_ag, [&] { return transition(space, L::G, L::A); });
  add("gamma_ef", rates.gamma_ef, [&] { return transition(space, L::F, L::E); });
  add("gamma_eg", rates.gamma_eg, [&] { return transition(space, L::G, L::E); });
  add("gamma_fg", rates.gamma_fg, [&] { return transition(space, L::G, L::F); });
  add("gphi_a", rates.gphi_a, [&] { return projector(space, L::A); });
  add("gphi_e", rates.gphi_e, [&] { return projector(space, L::E); });
  add("gphi_f", rates.gphi_f, [&] { return projector(space, L::F); });
  return out;
}

DensityMatrix liouvillian_rhs(const DensityMatrix& rho, const SparseOperator& h,
                              const CollapseSet& collapses) {
  if (!(rho.space() == h.space())) {
    throw std::invalid_argument("liouvillian_rhs: density matrix and Hamiltonian spaces differ");
  }
  for (const auto& ch : collapses) {
    if (!(ch.op.space() == rho.space())) {
      throw std::invalid_argument("liouvillian_rhs: collapse operator " + ch.name +
                                  " lives on a different space");
    }
  }
  const std::size_t n = rho.dim();
  const SparseOperator h_eff = h - dissipative_part(rho.space(), collapses) * cplx(0.0, 0.5);

  DensityMatrix out(rho.space());
  // -i H_eff rho
  h_eff.accumulate_product(-kI, rho.data(), out.data(), n);
  // +i rho H_eff^dagger = +i (H_eff rho^dagger)^dagger
  const DensityMatrix rho_dag = rho.adjoint();
  std::vector<cplx> t(n * n);
  h_eff.accumulate_product(1.0, rho_dag.data(), t.data(), n);
  for (std::size_t r = 0; r < n; ++r) {
    for (std::size_t c = 0; c < n; ++c) {
      out(r, c) += kI * std::conj(t[c * n + r]);
    }
  }
  std::vector<cplx> t2(n * n);
  for (const auto& ch : collapses) {
    add_general_jump(ch.op, ch.rate, rho.data(), out.data(), t, t2);
  }
  return out;
}

// ---------------------------------------------------------------------------
// Step policy

double StepPolicy::max_step(double fastest) const {
  if (!(steps_per_period > 0.0)) {
    throw std::invalid_argument("steps_per_period must be > 0");
  }
  if (!(max_dt > 0.0)) {
    throw std::invalid_argument("max_dt must be > 0");
  }
  if (fastest <= 0.0) {
    return max_dt;
  }
  return std::min(max_dt, 2.0 * std::numbers::pi / (fastest * steps_per_period));
}

std::size_t step_count(double duration, double dt) {
  if (!(dt > 0.0)) {
    throw std::invalid_argument("integration step must be > 0");
  }
  if (!(duration >= 0.0)) {
    throw std::invalid_argument("segment duration must be >= 0");
  }
  if (duration == 0.0) {
    return 0;
  }
  if (std::isinf(dt)) {
    return 1;
  }
  // Tolerate roundoff so that duration == k * dt gives exactly k steps.
  const double ratio = duration / dt;
  const auto steps = static_cast<std::size_t>(std::ceil(ratio * (1.0 - 1e-12)));
  return std::max<std::size_t>(1, steps);
}

// ---------------------------------------------------------------------------
// Liouvillian

Liouvillian::Liouvillian(SegmentHamiltonian h, const CollapseSet& collapses)
    : dim_(h.stationary.dim()),
      h_(std::move(h)),
      rotating_dag_(h_.rotating.dagger()),
      rotating_t_(SparseOperator::zero(h_.stationary.space())),
      rotating_dag_t_(SparseOperator::zero(h_.stationary.space())),
      h_eff_(SparseOperator::zero(h_.stationary.space())),
      h_eff_dag_t_(SparseOperator::zero(h_.stationary.space())) {
  for (const auto& ch : collapses) {
    if (!(ch.op.space() == h_.stationary.space())) {
      throw std::invalid_argument("collapse operator " + ch.name + " lives on a different space");
    }
  }
  h_eff_ = h_.stationary - dissipative_part(h_.stationary.space(), collapses) * cplx(0.0, 0.5);
  {
    // Split H_eff into its diagonal, handled by vector kernels, and the rest.
    diag_re_.assign(dim_, 0.0);
    diag_im_.assign(dim_, 0.0);
    std::vector<SparseOperator::Entry> off;
    for (const auto& e : h_eff_.entries()) {
      if (e.row == e.col) {
        diag_re_[e.row] = e.value.real();
        diag_im_[e.row] = e.value.imag();
      } else {
        off.push_back(e);
      }
    }
    has_diag_re_ = std::any_of(diag_re_.begin(), diag_re_.end(), [](double v) { return v != 0.0; });
    has_diag_im_ = std::any_of(diag_im_.begin(), diag_im_.end(), [](double v) { return v != 0.0; });
    h_eff_ = SparseOperator(h_.stationary.space(), std::move(off));
  }
  h_eff_dag_t_ = transposed(h_eff_.dagger());
  rotating_t_ = transposed(h_.rotating);
  rotating_dag_t_ = transposed(rotating_dag_);

  for (const auto& ch : collapses) {
    // Weighted partial permutation: at most one real entry per row and column.
    const auto entries = ch.op.entries();
    std::vector<std::size_t> col_seen(dim_, 0);
    bool monomial = true;
    for (std::size_t k = 0; k < entries.size(); ++k) {
      if (entries[k].value.imag() != 0.0 || ++col_seen[entries[k].col] > 1 ||
          (k > 0 && entries[k].row == entries[k - 1].row)) {
        monomial = false;
        break;
      }
    }
    if (!monomial) {
      general_jumps_.push_back(ch.op);
      general_rates_.push_back(ch.rate);
      continue;
    }
    auto sorted = entries;
    std::sort(sorted.begin(), sorted.end(),
              [](const auto& a, const auto& b) { return a.col < b.col; });
    Jump jump{ch.rate, {}, {}};
    for (const auto& e : sorted) {
      if (!jump.runs.empty()) {
        Run& last = jump.runs.back();
        if (e.col == last.src + last.len && e.row == last.dst + last.len) {
          ++last.len;
          jump.weights.push_back(e.value.real());
          continue;
        }
      }
      jump.runs.push_back({e.col, e.row, 1, jump.weights.size()});
      jump.weights.push_back(e.value.real());
    }
    jumps_.push_back(std::move(jump));
  }
  if (!general_jumps_.empty()) {
    scratch_.resize(dim_ * dim_);
    scratch2_.resize(dim_ * dim_);
  }
}

void Liouvillian::add_jump(const Jump& jump, const cplx* rho, cplx* out) const {
  const auto& k = kernels::active();
  const std::size_t n = dim_;
  for (const Run& a : jump.runs) {
    for (std::size_t i = 0; i < a.len; ++i) {
      const cplx* row_in = rho + (a.src + i) * n;
      cplx* row_out = out + (a.dst + i) * n;
      const double c = jump.rate * jump.weights[a.weight_offset + i];
      for (const Run& b : jump.runs) {
        k.caxpy_weighted(c, jump.weights.data() + b.weight_offset, row_in + b.src,
                         row_out + b.dst, b.len);
      }
    }
  }
}

void Liouvillian::apply_hermitian(double t, const cplx* rho, cplx* out) {
  const std::size_t n = dim_;
  // -i (H_eff rho - rho H_eff^dagger), both products taken row by row. With
  // d = a + ib on the diagonal, the diagonal part is rho_rc (b_r - i a_r + i a_c + b_c).
  const auto& k = kernels::active();
  if (has_diag_re_ || has_diag_im_) {
    for (std::size_t r = 0; r < n; ++r) {
      const cplx* rr = rho + r * n;
      cplx* o = out + r * n;
      const cplx row_scale(diag_im_[r], -diag_re_[r]);
      std::fill(o, o + n, cplx{});
      k.caxpy(row_scale, rr, o, n);
      if (has_diag_re_) k.caxpy_weighted(kI, diag_re_.data(), rr, o, n);
      if (has_diag_im_) k.caxpy_weighted(1.0, diag_im_.data(), rr, o, n);
    }
  } else {
    std::fill(out, out + n * n, cplx{});
  }
  h_eff_.accumulate_product(-kI, rho, out, n);
  accumulate_right(h_eff_dag_t_, kI, rho, out, n);
  if (h_.time_dependent()) {
    const cplx phase = std::exp(kI * (h_.delta * t));
    h_.rotating.accumulate_product(-kI * phase, rho, out, n);
    rotating_dag_.accumulate_product(-kI * std::conj(phase), rho, out, n);
    accumulate_right(rotating_t_, kI * phase, rho, out, n);
    accumulate_right(rotating_dag_t_, kI * std::conj(phase), rho, out, n);
  }
  for (const Jump& j : jumps_) {
    add_jump(j, rho, out);
  }
  for (std::size_t q = 0; q < general_jumps_.size(); ++q) {
    add_general_jump(general_jumps_[q], general_rates_[q], rho, out, scratch_, scratch2_);
  }
}

// ---------------------------------------------------------------------------
// Integrators

DensityMatrix evolve_segment(const DensityMatrix& rho0, const SegmentHamiltonian& h,
                             const CollapseSet& collapses, double t_start, double duration,
                             double dt) {
  if (!(rho0.space() == h.stationary.space())) {
    throw std::invalid_argument("evolve_segment: state and Hamiltonian spaces differ");
  }
  const std::size_t steps = step_count(duration, dt);
  if (steps == 0) {
    return rho0;
  }
  const double step = duration / static_cast<double>(steps);
  const std::size_t len = rho0.dim() * rho0.dim();
  const auto& kern = kernels::active();

  Liouvillian gen(h, collapses);
  DensityMatrix rho = rho0;
  std::vector<cplx> k1(len), k2(len), k3(len), k4(len), stage(len);
  for (std::size_t s = 0; s < steps; ++s) {
    const double t = t_start + static_cast<double>(s) * step;
    cplx* y = rho.data();
    gen.apply_hermitian(t, y, k1.data());
    kern.rwaxpy(0.5 * step, k1.data(), y, stage.data(), len);
    gen.apply_hermitian(t + 0.5 * step, stage.data(), k2.data());
    kern.rwaxpy(0.5 * step, k2.data(), y, stage.data(), len);
    gen.apply_hermitian(t + 0.5 * step, stage.data(), k3.data());
    kern.rwaxpy(step, k3.data(), y, stage.data(), len);
    gen.apply_hermitian(t + step, stage.data(), k4.data());
    kern.rk4_combine(step / 6.0, k1.data(), k2.data(), k3.data(), k4.data(), y, len);
  }

  const double trace_drift = std::abs(rho.trace() - rho0.trace());
  const double herm = rho.hermiticity_residual();
  if (!std::isfinite(trace_drift) || trace_drift > 1e-6 || !(herm <= 1e-8)) {
    throw IntegrationError("integration drift over segment [t=" + std::to_string(t_start) +
                           " s, " + std::to_string(steps) + " steps of " + std::to_string(step) +
                           " s]: trace drift " + std::to_string(trace_drift) +
                           ", Hermiticity residual " + std::to_string(herm) +
                           "; reduce the step size");
  }
  return rho;
}

DensityMatrix evolve_segment(const DensityMatrix& rho0, SegmentKind kind, double duration,
                             double t_start, const PhysicalParams& params,
                             const NoiseRates& rates, double dt, CrosstalkMode mode) {
  const auto h = build_segment_hamiltonian(drive_of(kind), params, rho0.space(), mode);
  return evolve_segment(rho0, h, collapse_operators(rates, rho0.space()), t_start, duration, dt);
}

namespace {

void apply_minus_i(const SparseOperator& h, cplx scale, const cplx* psi, cplx* out) {
  const auto rows = h.row_offsets();
  const auto cols = h.col_indices();
  const auto vals = h.values();
  for (std::size_t r = 0; r < h.dim(); ++r) {
    cplx acc{};
    for (std::size_t q = rows[r]; q < rows[r + 1]; ++q) {
      acc += vals[q] * psi[cols[q]];
    }
    out[r] += -kI * scale * acc;
  }
}

}  // namespace

StateVector evolve_unitary(const StateVector& psi0, const SegmentHamiltonian& h, double t_start,
                           double duration, double dt) {
  if (!(psi0.space() == h.stationary.space())) {
    throw std::invalid_argument("evolve_unitary: state and Hamiltonian spaces differ");
  }
  const std::size_t steps = step_count(duration, dt);
  if (steps == 0) {
    return psi0;
  }
  const double step = duration / static_cast<double>(steps);
  const std::size_t n = psi0.size();
  const auto& kern = kernels::active();
  const SparseOperator rot_dag = h.rotating.dagger();
  const bool td = h.time_dependent();

  auto rhs = [&](double t, const cplx* y, cplx* out) {
    std::fill(out, out + n, cplx{});
    apply_minus_i(h.stationary, 1.0, y, out);
    if (td) {
      const cplx phase = std::exp(kI * (h.delta * t));
      apply_minus_i(h.rotating, phase, y, out);
      apply_minus_i(rot_dag, std::conj(phase), y, out);
    }
  };

  StateVector psi = psi0;
  std::vector<cplx> k1(n), k2(n), k3(n), k4(n), stage(n);
  for (std::size_t s = 0; s < steps; ++s) {
    const double t = t_start + static_cast<double>(s) * step;
    cplx* y = psi.amplitudes().data();
    rhs(t, y, k1.data());
    kern.rwaxpy(0.5 * step, k1.data(), y, stage.data(), n);
    rhs(t + 0.5 * step, stage.data(), k2.data());
    kern.rwaxpy(0.5 * step, k2.data(), y, stage.data(), n);
    rhs(t + 0.5 * step, stage.data(), k3.data());
    kern.rwaxpy(step, k3.data(), y, stage.data(), n);
    rhs(t + step, stage.data(), k4.data());
    kern.rk4_combine(step / 6.0, k1.data(), k2.data(), k3.data(), k4.data(), y, n);
  }
  return psi;
}

StateVector evolve_unitary(const StateVector& psi0, const SparseOperator& h, double duration,
                           double dt) {
  SegmentHamiltonian sh{h, SparseOperator::zero(h.space()), 0.0, 0.0};
  return evolve_unitary(psi0, sh, 0.0, duration, dt);
}

}  // namespace noonsim
