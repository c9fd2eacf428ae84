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


#include "noonsim/verify.hpp"

#include <algorithm>
#include <cmath>
#include <exception>
#include <functional>
#include <numbers>
#include <random>
#include <sstream>

#include "noonsim/kernels.hpp"
#include "noonsim/lindblad.hpp"
#include "noonsim/metrics.hpp"
#include "noonsim/protocol.hpp"

namespace noonsim {
namespace {

using L = DeviceLevel;
constexpr double kPi = std::numbers::pi;
constexpr cplx kI{0.0, 1.0};

std::string sci(double v) {
  std::ostringstream o;
  o.precision(3);
  o << std::scientific << v;
  return o.str();
}

CheckResult check(std::string name, double err, double tol) {
  return {std::move(name), err < tol, "max error " + sci(err) + " (tolerance " + sci(tol) + ")"};
}

CheckResult basis_bijection() {
  const CompositeSpace s(3, 4);
  std::size_t bad = 0;
  for (std::size_t i = 0; i < s.dim(); ++i) {
    const BasisLabel b = s.label(i);
    if (s.index(b.level, b.n1, b.n2) != i) ++bad;
  }
  return {"basis index round trip", bad == 0 && s.dim() == 4 * 4 * 5,
          std::to_string(s.dim()) + " indices, " + std::to_string(bad) + " mismatches"};
}

CheckResult commutator() {
  const CompositeSpace s(5, 3);
  double err = 0.0;
  for (int cav : {1, 2}) {
    const SparseOperator a = annihilation(s, cav);
    const SparseOperator c = a * a.dagger() - a.dagger() * a;
    const int nmax = cav == 1 ? s.nmax1() : s.nmax2();
    for (std::size_t i = 0; i < s.dim(); ++i) {
      const BasisLabel bi = s.label(i);
      if ((cav == 1 ? bi.n1 : bi.n2) >= nmax) continue;
      for (std::size_t j = 0; j < s.dim(); ++j) {
        const BasisLabel bj = s.label(j);
        if ((cav == 1 ? bj.n1 : bj.n2) >= nmax) continue;
        err = std::max(err, std::abs(c.value(i, j) - cplx(i == j ? 1.0 : 0.0)));
      }
    }
  }
  return check("[a, a^dagger] = 1 below the truncation", err, 1e-14);
}

CheckResult transition_composition() {
  const CompositeSpace s(2, 2);
  double err = 0.0;
  for (L x : kAllLevels) {
    for (L y : kAllLevels) {
      for (L z : kAllLevels) {
        if (x == y || y == z || x == z) continue;
        err = std::max(err,
                       (transition(s, x, y) * transition(s, y, z) - transition(s, x, z)).max_abs());
      }
    }
  }
  return check("transition composition |x><y| |y><z| = |x><z|", err, 1e-15);
}

PhysicalParams unit_params() {
  PhysicalParams p = PhysicalParams::symmetric(1.0, 20.0);
  p.g1 = 0.95;
  p.gprime = 1.1;
  p.g12 = 0.1;
  p.delta = 7.0;
  return p;
}

CheckResult hermiticity() {
  const CompositeSpace s(4, 4);
  const PhysicalParams p = unit_params();
  double err = 0.0;
  for (const SparseOperator& h :
       {h1(p, s), h2(p, s), h3(p, s), h4(p, s), h5(p, s), crosstalk(p, 0.37, s)}) {
    err = std::max(err, h.hermiticity_residual());
  }
  return check("every Hamiltonian term is Hermitian", err, 1e-14);
}

CheckResult double_pulse_sum() {
  const CompositeSpace s(3, 3);
  const PhysicalParams p = unit_params();
  return check("double pulse equals the sum of the single pulses",
               (h2(p, s) - h3(p, s) - h5(p, s)).max_abs(), 1e-15);
}

CheckResult rabi_oracle() {
  const CompositeSpace s(7, 1);
  const double g = 1.0;
  const SparseOperator h = h1(PhysicalParams::symmetric(g, 1.0), s);
  double err = 0.0;
  for (int n = 0; n <= 5; ++n) {
    const double w = std::sqrt(n + 1.0) * g;
    const double tstep = (2.0 * kPi / w) / 20.0;
    StateVector psi = basis_state(s, L::E, n, 0);
    for (int k = 1; k <= 20; ++k) {
      psi = evolve_unitary(psi, h, tstep, tstep / 200.0);
      const double t = k * tstep;
      err = std::max(err, std::abs(psi.at(L::E, n, 0) - cplx(std::cos(w * t))));
      err = std::max(err, std::abs(psi.at(L::G, n + 1, 0) - (-kI * std::sin(w * t))));
    }
  }
  return check("Rabi oscillation |e,n> <-> |g,n+1>, n = 0..5, 20 times each", err, 1e-6);
}

CheckResult h4_oracle() {
  const CompositeSpace s(3, 3);
  PhysicalParams p = PhysicalParams::symmetric(1.0, 1.0);
  p.gprime = 1.3;
  const double t = kPi / (2.0 * std::sqrt(2.0) * p.gprime);
  const StateVector out = evolve_unitary(basis_state(s, L::A, 0, 1), h4(p, s), t, t / 2000.0);
  return check("e-a resonance maps |a,0,1> to -i|e,0,2>",
               std::abs(out.at(L::E, 0, 2) - (-kI)), 1e-9);
}

CheckResult pulse_rotations() {
  const CompositeSpace s(2, 2);
  const PhysicalParams p = PhysicalParams::symmetric(1.0, 3.0);
  const double tau = kPi / (2.0 * p.omega_rabi);
  double err = 0.0;
  // Exact rotation and numerical integration must both land on the target.
  const SparseOperator u5 = pairwise_propagator(h5(p, s), tau);
  const SparseOperator u3 = pairwise_propagator(h3(p, s), tau);
  err = std::max(err, std::abs(u5.apply(basis_state(s, L::G, 1, 0)).at(L::E, 1, 0) - 1.0));
  err = std::max(err, std::abs(u3.apply(basis_state(s, L::F, 0, 1)).at(L::A, 0, 1) - 1.0));
  const StateVector num = evolve_unitary(basis_state(s, L::G, 0, 0), h2(p, s), tau, tau / 500.0);
  err = std::max(err, std::abs(num.at(L::E, 0, 0) - 1.0));
  return check("pi/2 pulses map |g> -> |e> and |f> -> |a>", err, 1e-9);
}

CheckResult ideal_ladder_check() {
  double worst_cp = 0.0;
  double worst_f = 0.0;
  double worst_dev = 0.0;
  for (int n = 2; n <= 6; ++n) {
    RunConfig c;
    c.n_photons = n;
    c.params = PhysicalParams::symmetric(mhz_to_rad(4.0), mhz_to_rad(300.0));
    c.pulses = PulseModel::Instantaneous;
    c.steps.steps_per_period = 200.0;
    const RunResult r = run_protocol(c);
    for (const auto& cp : r.checkpoints) worst_cp = std::max(worst_cp, 1.0 - cp.fidelity.value_or(0.0));
    worst_f = std::max(worst_f, 1.0 - r.fidelity);
    worst_dev = std::max({worst_dev, 1.0 - r.diagnostics.device_purity,
                          1.0 - r.diagnostics.device_populations[0]});
  }
  return {"ideal protocol follows the analytic ladder, N = 2..6",
          worst_cp < 1e-8 && worst_f < 1e-4 && worst_dev < 1e-8,
          "worst checkpoint infidelity " + sci(worst_cp) + ", final " + sci(worst_f) +
              ", device mixedness " + sci(worst_dev)};
}

CheckResult decay_oracle() {
  const CompositeSpace s(1, 1);
  NoiseRates rates;
  rates.kappa1 = 1.0 / 20e-6;
  const PhysicalParams p = PhysicalParams::symmetric(1.0, 1.0);
  double err = 0.0;
  for (double kt : {0.5, 1.0, 2.0}) {
    const double t = kt / rates.kappa1;
    const DensityMatrix rho =
        evolve_segment(DensityMatrix::from_pure(basis_state(s, L::G, 1, 0)), SegmentKind::Decoupled,
                       t, 0.0, p, rates, 1.0 / (400.0 * rates.kappa1), CrosstalkMode::Averaged);
    const std::size_t i = s.index(L::G, 1, 0);
    err = std::max(err, std::abs(rho(i, i).real() - std::exp(-kt)));
  }
  return check("cavity decay follows exp(-kappa t) at kappa t = 0.5, 1, 2", err, 1e-6);
}

CheckResult dephasing_oracle() {
  const CompositeSpace s(1, 1);
  NoiseRates rates;
  rates.gphi_e = 1.0 / 1.5e-6;
  StateVector plus = basis_state(s, L::E, 0, 0);
  plus += basis_state(s, L::G, 0, 0);
  plus *= 1.0 / std::sqrt(2.0);
  const double t = 1.0 / rates.gphi_e;
  const DensityMatrix rho =
      evolve_segment(DensityMatrix::from_pure(plus), SegmentKind::Decoupled, t, 0.0,
                     PhysicalParams::symmetric(1.0, 1.0), rates, t / 400.0, CrosstalkMode::Averaged);
  const std::size_t e = s.index(L::E, 0, 0), g = s.index(L::G, 0, 0);
  const double err = std::max({std::abs(rho(e, g) - cplx(0.5 * std::exp(-0.5))),
                               std::abs(rho(e, e) - 0.5), std::abs(rho(g, g) - 0.5)});
  return check("dephasing decays coherence at gamma/2 and keeps populations", err, 1e-8);
}

DensityMatrix random_state(const CompositeSpace& s, unsigned seed) {
  std::mt19937_64 rng(seed);
  std::normal_distribution<double> nd;
  std::vector<StateVector> kets;
  DensityMatrix rho(s);
  for (int k = 0; k < 3; ++k) {
    StateVector v(s);
    for (std::size_t i = 0; i < s.dim(); ++i) v[i] = {nd(rng), nd(rng)};
    v *= 1.0 / v.norm();
    const DensityMatrix pk = DensityMatrix::from_pure(v);
    for (std::size_t i = 0; i < s.dim() * s.dim(); ++i) rho.data()[i] += pk.data()[i] / 3.0;
  }
  return rho;
}

NoiseRates unit_rates() {
  NoiseRates r;
  r.kappa1 = 0.05; r.kappa2 = 0.07;
  r.gamma_ae = 0.6; r.gamma_af = 0.5; r.gamma_ag = 0.4;
  r.gamma_ef = 0.3; r.gamma_eg = 0.35; r.gamma_fg = 0.1;
  r.gphi_a = 2.0; r.gphi_e = 0.7; r.gphi_f = 0.2;
  return r;
}

CheckResult generator_trace() {
  const CompositeSpace s(3, 3);
  const DensityMatrix rho = random_state(s, 7);
  const SparseOperator h = h1(unit_params(), s) + crosstalk(unit_params(), 0.4, s);
  const DensityMatrix d = liouvillian_rhs(rho, h, collapse_operators(unit_rates(), s));
  return {"generator is trace free and Hermiticity preserving",
          std::abs(d.trace()) < 1e-12 && d.hermiticity_residual() < 1e-12,
          "|tr| " + sci(std::abs(d.trace())) + ", Hermiticity " + sci(d.hermiticity_residual())};
}

CheckResult relaxation_fixed_point() {
  const CompositeSpace s(1, 1);
  const NoiseRates rates = NoiseRates::reference_device();
  const double slowest = 1.0 / std::min({rates.kappa1, rates.kappa2, rates.gamma_fg});
  const PhysicalParams p = PhysicalParams::symmetric(1.0, 1.0);
  const DensityMatrix rho =
      evolve_segment(DensityMatrix::from_pure(basis_state(s, L::A, 1, 1)), SegmentKind::Decoupled,
                     10.0 * slowest, 0.0, p, rates, StepPolicy{}.max_step(rates.total()),
                     CrosstalkMode::Averaged);
  const std::size_t g = s.index(L::G, 0, 0);
  const double pop = rho(g, g).real();
  return {"relaxation drives every state to |g,0,0>", pop > 0.999,
          "population " + std::to_string(pop) + " after ten slowest lifetimes"};
}

CheckResult rk4_order() {
  const CompositeSpace s(3, 1);
  const SparseOperator h = h1(PhysicalParams::symmetric(1.0, 1.0), s);
  const double t = kPi;
  const cplx exact_e = std::cos(std::sqrt(2.0) * t);
  auto err = [&](int steps) {
    const StateVector psi = evolve_unitary(basis_state(s, L::E, 1, 0), h, t, t / steps);
    return std::abs(psi.at(L::E, 1, 0) - exact_e);
  };
  const double e1 = err(40), e2 = err(80);
  const double ratio = e1 / e2;
  return {"integrator converges at fourth order", std::abs(ratio - 16.0) <= 4.0,
          "error ratio " + std::to_string(ratio) + " under step halving"};
}

CheckResult kernel_agreement() {
  const kernels::KernelTable& ref = kernels::scalar_table();
  const kernels::KernelTable& act = kernels::active();
  const std::size_t n = 1003;
  std::mt19937_64 rng(11);
  std::uniform_real_distribution<double> u(-1.0, 1.0);
  std::vector<cplx> x(n), k2(n), k3(n), k4(n), y(n);
  std::vector<double> w(n);
  for (std::size_t i = 0; i < n; ++i) {
    x[i] = {u(rng), u(rng)};
    k2[i] = {u(rng), u(rng)};
    k3[i] = {u(rng), u(rng)};
    k4[i] = {u(rng), u(rng)};
    y[i] = {u(rng), u(rng)};
    w[i] = u(rng);
  }
  const cplx a{0.3, -0.7};
  double err = 0.0;
  auto cmp = [&](const std::function<void(const kernels::KernelTable&, std::vector<cplx>&)>& f) {
    std::vector<cplx> r1 = y, r2 = y;
    f(ref, r1);
    f(act, r2);
    for (std::size_t i = 0; i < n; ++i) err = std::max(err, std::abs(r1[i] - r2[i]));
  };
  cmp([&](const auto& t, auto& o) { t.caxpy(a, x.data(), o.data(), n); });
  cmp([&](const auto& t, auto& o) { t.caxpy_weighted(a, w.data(), x.data(), o.data(), n); });
  cmp([&](const auto& t, auto& o) { t.raxpy(0.7, x.data(), o.data(), n); });
  cmp([&](const auto& t, auto& o) { t.rwaxpy(0.7, x.data(), k2.data(), o.data(), n); });
  cmp([&](const auto& t, auto& o) {
    t.rk4_combine(0.1, x.data(), k2.data(), k3.data(), k4.data(), o.data(), n);
  });
  err = std::max(err, std::abs(ref.cdotc(x.data(), y.data(), n) - act.cdotc(x.data(), y.data(), n)));
  CheckResult r = check("vector kernels (" + std::string(kernels::isa_name(act.isa)) +
                            ") agree with the scalar reference",
                        err, 1e-12);
  return r;
}

}  // namespace

std::vector<CheckResult> run_verification() {
  const std::vector<std::pair<std::string, std::function<CheckResult()>>> checks = {
      {"basis", basis_bijection},
      {"commutator", commutator},
      {"transitions", transition_composition},
      {"hermiticity", hermiticity},
      {"double pulse", double_pulse_sum},
      {"rabi", rabi_oracle},
      {"e-a resonance", h4_oracle},
      {"pulses", pulse_rotations},
      {"ladder", ideal_ladder_check},
      {"decay", decay_oracle},
      {"dephasing", dephasing_oracle},
      {"generator", generator_trace},
      {"fixed point", relaxation_fixed_point},
      {"rk4 order", rk4_order},
      {"kernels", kernel_agreement},
  };
  std::vector<CheckResult> out;
  for (const auto& [name, fn] : checks) {
    try {
      out.push_back(fn());
    } catch (const std::exception& e) {
      out.push_back({name, false, std::string("threw: ") + e.what()});
    }
  }
  return out;
}

}  // namespace noonsim
