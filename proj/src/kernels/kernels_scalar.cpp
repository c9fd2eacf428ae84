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

#include "kernels_impl.hpp"

namespace noonsim::kernels::detail {
namespace {

void caxpy(cplx a, const cplx* x, cplx* y, std::size_t n) {
  const double ar = a.real();
  const double ai = a.imag();
  for (std::size_t i = 0; i < n; ++i) {
    const double xr = x[i].real();
    const double xi = x[i].imag();
    y[i] = cplx(y[i].real() + (ar * xr - ai * xi), y[i].imag() + (ar * xi + ai * xr));
  }
}

void caxpy_weighted(cplx a, const double* w, const cplx* x, cplx* y, std::size_t n) {
  const double ar = a.real();
  const double ai = a.imag();
  for (std::size_t i = 0; i < n; ++i) {
    const double xr = w[i] * x[i].real();
    const double xi = w[i] * x[i].imag();
    y[i] = cplx(y[i].real() + (ar * xr - ai * xi), y[i].imag() + (ar * xi + ai * xr));
  }
}

void raxpy(double a, const cplx* x, cplx* y, std::size_t n) {
  for (std::size_t i = 0; i < n; ++i) {
    y[i] = cplx(y[i].real() + a * x[i].real(), y[i].imag() + a * x[i].imag());
  }
}

void rwaxpy(double a, const cplx* x, const cplx* y, cplx* out, std::size_t n) {
  for (std::size_t i = 0; i < n; ++i) {
    out[i] = cplx(y[i].real() + a * x[i].real(), y[i].imag() + a * x[i].imag());
  }
}

void rk4_combine(double h, const cplx* k1, const cplx* k2, const cplx* k3, const cplx* k4,
                 cplx* y, std::size_t n) {
  for (std::size_t i = 0; i < n; ++i) {
    const double re = k1[i].real() + 2.0 * k2[i].real() + 2.0 * k3[i].real() + k4[i].real();
    const double im = k1[i].imag() + 2.0 * k2[i].imag() + 2.0 * k3[i].imag() + k4[i].imag();
    y[i] = cplx(y[i].real() + h * re, y[i].imag() + h * im);
  }
}

cplx cdotc(const cplx* x, const cplx* y, std::size_t n) {
  double re = 0.0;
  double im = 0.0;
  for (std::size_t i = 0; i < n; ++i) {
    re += x[i].real() * y[i].real() + x[i].imag() * y[i].imag();
    im += x[i].real() * y[i].imag() - x[i].imag() * y[i].real();
  }
  return {re, im};
}

}  // namespace

const KernelTable kScalarTable{Isa::Scalar, caxpy, caxpy_weighted, raxpy, rwaxpy, rk4_combine, cdotc};

}  // namespace noonsim::kernels::detail
