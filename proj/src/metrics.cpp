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

#include "noonsim/metrics.hpp"

#include <Eigen/Eigenvalues>
#include <algorithm>
#include <cmath>
#include <stdexcept>
#include <string>

namespace noonsim {

double overlap(const DensityMatrix& rho, const StateVector& target) {
  if (!(rho.space() == target.space())) {
    throw std::invalid_argument("fidelity: density matrix and target live on different spaces");
  }
  const std::size_t n = rho.dim();
  cplx acc{};
  for (std::size_t r = 0; r < n; ++r) {
    if (target[r] == cplx{}) {
      continue;
    }
    cplx row{};
    for (std::size_t c = 0; c < n; ++c) {
      if (target[c] != cplx{}) {
        row += rho(r, c) * target[c];
      }
    }
    acc += std::conj(target[r]) * row;
  }
  if (std::abs(acc.imag()) > 1e-10) {
    throw std::domain_error("fidelity: <psi|rho|psi> has imaginary part " +
                            std::to_string(acc.imag()) + " (rho not Hermitian?)");
  }
  return acc.real();
}

double fidelity(const DensityMatrix& rho, const StateVector& target) {
  const double v = overlap(rho, target);
  if (v < -1e-10) {
    throw std::domain_error("fidelity: <psi|rho|psi> = " + std::to_string(v) + " is negative");
  }
  return std::clamp(std::sqrt(std::max(v, 0.0)), 0.0, 1.0);
}

double min_eigenvalue(const DensityMatrix& rho) {
  const auto n = static_cast<Eigen::Index>(rho.dim());
  Eigen::MatrixXcd m(n, n);
  for (Eigen::Index r = 0; r < n; ++r) {
    for (Eigen::Index c = 0; c < n; ++c) {
      const auto ur = static_cast<std::size_t>(r);
      const auto uc = static_cast<std::size_t>(c);
      m(r, c) = 0.5 * (rho(ur, uc) + std::conj(rho(uc, ur)));
    }
  }
  Eigen::SelfAdjointEigenSolver<Eigen::MatrixXcd> solver(m, Eigen::EigenvaluesOnly);
  return solver.eigenvalues().minCoeff();
}

double edge_population(const DensityMatrix& rho) {
  const CompositeSpace& s = rho.space();
  double pop = 0.0;
  for (std::size_t i = 0; i < rho.dim(); ++i) {
    const BasisLabel b = s.label(i);
    if (b.n1 == s.nmax1() || b.n2 == s.nmax2()) {
      pop += rho(i, i).real();
    }
  }
  return pop;
}

Diagnostics diagnostics(const DensityMatrix& rho) {
  Diagnostics d;
  d.trace_drift = std::abs(rho.trace() - 1.0);
  d.hermiticity = rho.hermiticity_residual();
  d.min_eigenvalue = min_eigenvalue(rho);
  d.edge_population = edge_population(rho);

  const std::size_t block = rho.space().level_block();
  cplx dev[4][4]{};
  for (std::size_t a = 0; a < 4; ++a) {
    for (std::size_t b = 0; b < 4; ++b) {
      for (std::size_t k = 0; k < block; ++k) {
        dev[a][b] += rho(a * block + k, b * block + k);
      }
    }
  }
  double purity = 0.0;
  for (std::size_t a = 0; a < 4; ++a) {
    d.device_populations[a] = dev[a][a].real();
    for (std::size_t b = 0; b < 4; ++b) {
      purity += std::norm(dev[a][b]);
    }
  }
  d.device_purity = purity;
  return d;
}

}  // namespace noonsim
