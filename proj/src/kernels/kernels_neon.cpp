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

// AArch64 variant. Advanced SIMD is mandatory on AArch64, so no runtime
// feature probe is needed beyond the compile-time target.

#include <arm_neon.h>

#include "kernels_impl.hpp"

namespace noonsim::kernels::detail {
namespace {

inline const double* as_doubles(const cplx* p) { return reinterpret_cast<const double*>(p); }
inline double* as_doubles(cplx* p) { return reinterpret_cast<double*>(p); }

// One complex number per float64x2_t.
inline float64x2_t cmul(float64x2_t x, float64x2_t a, float64x2_t a_swapped_neg) {
  // a = [ar, ai]; a_swapped_neg = [-ai, ai]
  const float64x2_t xr = vdupq_laneq_f64(x, 0);
  const float64x2_t xi = vdupq_laneq_f64(x, 1);
  return vfmaq_f64(vmulq_f64(xr, a), xi, a_swapped_neg);
}

void caxpy(cplx a, const cplx* x, cplx* y, std::size_t n) {
  const double ab[2] = {a.real(), a.imag()};
  const double an[2] = {-a.imag(), a.real()};
  const float64x2_t av = vld1q_f64(ab);
  const float64x2_t asn = vld1q_f64(an);
  const double* xd = as_doubles(x);
  double* yd = as_doubles(y);
  for (std::size_t i = 0; i < n; ++i) {
    const float64x2_t xv = vld1q_f64(xd + 2 * i);
    vst1q_f64(yd + 2 * i, vaddq_f64(vld1q_f64(yd + 2 * i), cmul(xv, av, asn)));
  }
}

void caxpy_weighted(cplx a, const double* w, const cplx* x, cplx* y, std::size_t n) {
  const double ab[2] = {a.real(), a.imag()};
  const double an[2] = {-a.imag(), a.real()};
  const float64x2_t av = vld1q_f64(ab);
  const float64x2_t asn = vld1q_f64(an);
  const double* xd = as_doubles(x);
  double* yd = as_doubles(y);
  for (std::size_t i = 0; i < n; ++i) {
    const float64x2_t xv = vmulq_n_f64(vld1q_f64(xd + 2 * i), w[i]);
    vst1q_f64(yd + 2 * i, vaddq_f64(vld1q_f64(yd + 2 * i), cmul(xv, av, asn)));
  }
}

void raxpy(double a, const cplx* x, cplx* y, std::size_t n) {
  const float64x2_t av = vdupq_n_f64(a);
  const double* xd = as_doubles(x);
  double* yd = as_doubles(y);
  for (std::size_t i = 0; i < 2 * n; i += 2) {
    vst1q_f64(yd + i, vfmaq_f64(vld1q_f64(yd + i), av, vld1q_f64(xd + i)));
  }
}

void rwaxpy(double a, const cplx* x, const cplx* y, cplx* out, std::size_t n) {
  const float64x2_t av = vdupq_n_f64(a);
  const double* xd = as_doubles(x);
  const double* yd = as_doubles(y);
  double* od = as_doubles(out);
  for (std::size_t i = 0; i < 2 * n; i += 2) {
    vst1q_f64(od + i, vfmaq_f64(vld1q_f64(yd + i), av, vld1q_f64(xd + i)));
  }
}

void rk4_combine(double h, const cplx* k1, const cplx* k2, const cplx* k3, const cplx* k4,
                 cplx* y, std::size_t n) {
  const float64x2_t hv = vdupq_n_f64(h);
  const float64x2_t two = vdupq_n_f64(2.0);
  const double* a = as_doubles(k1);
  const double* b = as_doubles(k2);
  const double* c = as_doubles(k3);
  const double* d = as_doubles(k4);
  double* yd = as_doubles(y);
  for (std::size_t i = 0; i < 2 * n; i += 2) {
    const float64x2_t mid = vaddq_f64(vld1q_f64(b + i), vld1q_f64(c + i));
    const float64x2_t sum = vfmaq_f64(vaddq_f64(vld1q_f64(a + i), vld1q_f64(d + i)), two, mid);
    vst1q_f64(yd + i, vfmaq_f64(vld1q_f64(yd + i), hv, sum));
  }
}

cplx cdotc(const cplx* x, const cplx* y, std::size_t n) {
  const double* xd = as_doubles(x);
  const double* yd = as_doubles(y);
  float64x2_t acc_re = vdupq_n_f64(0.0);
  float64x2_t acc_im = vdupq_n_f64(0.0);
  for (std::size_t i = 0; i < n; ++i) {
    const float64x2_t xv = vld1q_f64(xd + 2 * i);
    const float64x2_t yv = vld1q_f64(yd + 2 * i);
    acc_re = vfmaq_f64(acc_re, xv, yv);
    acc_im = vfmaq_f64(acc_im, xv, vextq_f64(yv, yv, 1));
  }
  const double re = vgetq_lane_f64(acc_re, 0) + vgetq_lane_f64(acc_re, 1);
  const double im = vgetq_lane_f64(acc_im, 0) - vgetq_lane_f64(acc_im, 1);
  return {re, im};
}

}  // namespace

const KernelTable kNeonTable{Isa::Neon, caxpy, caxpy_weighted, raxpy, rwaxpy, rk4_combine, cdotc};

}  // namespace noonsim::kernels::detail
