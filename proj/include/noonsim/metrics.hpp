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

#include <array>

#include "noonsim/fockspace.hpp"

namespace noonsim {

/// Re <psi|rho|psi> without clamping.
double overlap(const DensityMatrix& rho, const StateVector& target);

/// sqrt(<psi|rho|psi>), clamped to [0, 1]. Throws std::domain_error when the
/// expectation has an imaginary part above 1e-10 or is below -1e-10.
double fidelity(const DensityMatrix& rho, const StateVector& target);

struct Diagnostics {
  double trace_drift = 0.0;       // |tr rho - 1|
  double hermiticity = 0.0;       // max |rho - rho^dagger|
  double min_eigenvalue = 0.0;    // of the Hermitian part
  double edge_population = 0.0;   // weight on n1 = nmax1 or n2 = nmax2
  double device_purity = 0.0;     // tr(rho_dev^2) after tracing out both cavities
  std::array<double, 4> device_populations{};  // g, e, f, a
};

Diagnostics diagnostics(const DensityMatrix& rho);

double min_eigenvalue(const DensityMatrix& rho);
double edge_population(const DensityMatrix& rho);

}  // namespace noonsim
