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

#include <complex>
#include <cstddef>
#include <string_view>

namespace noonsim::kernels {

using cplx = std::complex<double>;

enum class Isa { Scalar, Avx2, Neon };

std::string_view isa_name(Isa isa);

// Inner loops of the density-matrix integrator. Every table computes the same
// arithmetic; vector variants may differ from the scalar reference only by
// floating-point reassociation (and FMA contraction).
struct KernelTable {
  Isa isa;
  // y[i] += a * x[i]
  void (*caxpy)(cplx a, const cplx* x, cplx* y, std::size_t n);
  // y[i] += a * w[i] * x[i], real weights w
  void (*caxpy_weighted)(cplx a, const double* w, const cplx* x, cplx* y, std::size_t n);
  // y[i] += a * x[i], real a
  void (*raxpy)(double a, const cplx* x, cplx* y, std::size_t n);
  // out[i] = y[i] + a * x[i], real a
  void (*rwaxpy)(double a, const cplx* x, const cplx* y, cplx* out, std::size_t n);
  // y[i] += h * (k1[i] + 2 k2[i] + 2 k3[i] + k4[i])
  void (*rk4_combine)(double h, const cplx* k1, const cplx* k2, const cplx* k3,
                      const cplx* k4, cplx* y, std::size_t n);
  // sum_i conj(x[i]) * y[i]
  cplx (*cdotc)(const cplx* x, const cplx* y, std::size_t n);
};

const KernelTable& scalar_table();

// nullptr when the variant was not compiled in or the CPU lacks the feature.
const KernelTable* avx2_table();
const KernelTable* neon_table();

// Best table for this CPU, chosen once. The environment variable
// NOONSIM_ISA=scalar forces the reference kernels.
const KernelTable& active();

}  // namespace noonsim::kernels
