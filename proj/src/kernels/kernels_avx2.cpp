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

// Compiled with -mavx2 -mfma. Only reached through avx2_table() after a
// runtime CPUID check.

#include <immintrin.h>

#include "kernels_impl.hpp"

namespace noonsim::kernels::detail {
namespace {

inline const double* as_doubles(const cplx* p) { return reinterpret_cast<const double*>(p); }
inline double* as_doubles(cplx* p) { return reinterpret_cast<double*>(p); }

// a * x for two packed complex numbers: even lanes ar*xr - ai*xi, odd lanes ar*xi + ai*xr.
inline __m256d cmul(__m256d x, __m256d ar, __m256d ai) {
  const __m256d swapped = _mm256_permute_pd(x, 0b0101);
  return _mm256_fmaddsub_pd(x, ar, _mm256_mul_pd(swapped, ai));
}

void caxpy(cplx a, const cplx* x, cplx* y, std::size_t n) {
  const __m256d ar = _mm256_set1_pd(a.real());
  const __m256d ai = _mm256_set1_pd(a.imag());
  const double* xd = as_doubles(x);
  double* yd = as_doubles(y);
  std::size_t i = 0;
  for (; i + 4 <= n; i += 4) {
    const __m256d x0 = _mm256_loadu_pd(xd + 2 * i);
    const __m256d x1 = _mm256_loadu_pd(xd + 2 * i + 4);
    const __m256d y0 = _mm256_loadu_pd(yd + 2 * i);
    const __m256d y1 = _mm256_loadu_pd(yd + 2 * i + 4);
    _mm256_storeu_pd(yd + 2 * i, _mm256_add_pd(y0, cmul(x0, ar, ai)));
    _mm256_storeu_pd(yd + 2 * i + 4, _mm256_add_pd(y1, cmul(x1, ar, ai)));
  }
  for (; i + 2 <= n; i += 2) {
    const __m256d x0 = _mm256_loadu_pd(xd + 2 * i);
    const __m256d y0 = _mm256_loadu_pd(yd + 2 * i);
    _mm256_storeu_pd(yd + 2 * i, _mm256_add_pd(y0, cmul(x0, ar, ai)));
  }
  for (; i < n; ++i) {
    y[i] += a * x[i];
  }
}

void caxpy_weighted(cplx a, const double* w, const cplx* x, cplx* y, std::size_t n) {
  const __m256d ar = _mm256_set1_pd(a.real());
  const __m256d ai = _mm256_set1_pd(a.imag());
  const double* xd = as_doubles(x);
  double* yd = as_doubles(y);
  std::size_t i = 0;
  for (; i + 2 <= n; i += 2) {
    // [w0, w0, w1, w1]
    const __m256d wv =
        _mm256_permute4x64_pd(_mm256_castpd128_pd256(_mm_loadu_pd(w + i)), 0b01010000);
    const __m256d xw = _mm256_mul_pd(_mm256_loadu_pd(xd + 2 * i), wv);
    const __m256d y0 = _mm256_loadu_pd(yd + 2 * i);
    _mm256_storeu_pd(yd + 2 * i, _mm256_add_pd(y0, cmul(xw, ar, ai)));
  }
  for (; i < n; ++i) {
    y[i] += a * (w[i] * x[i]);
  }
}

void raxpy(double a, const cplx* x, cplx* y, std::size_t n) {
  const __m256d av = _mm256_set1_pd(a);
  const double* xd = as_doubles(x);
  double* yd = as_doubles(y);
  const std::size_t len = 2 * n;
  std::size_t i = 0;
  for (; i + 4 <= len; i += 4) {
    _mm256_storeu_pd(yd + i, _mm256_fmadd_pd(av, _mm256_loadu_pd(xd + i), _mm256_loadu_pd(yd + i)));
  }
  for (; i < len; ++i) {
    yd[i] += a * xd[i];
  }
}

void rwaxpy(double a, const cplx* x, const cplx* y, cplx* out, std::size_t n) {
  const __m256d av = _mm256_set1_pd(a);
  const double* xd = as_doubles(x);
  const double* yd = as_doubles(y);
  double* od = as_doubles(out);
  const std::size_t len = 2 * n;
  std::size_t i = 0;
  for (; i + 4 <= len; i += 4) {
    _mm256_storeu_pd(od + i, _mm256_fmadd_pd(av, _mm256_loadu_pd(xd + i), _mm256_loadu_pd(yd + i)));
  }
  for (; i < len; ++i) {
    od[i] = yd[i] + a * xd[i];
  }
}

void rk4_combine(double h, const cplx* k1, const cplx* k2, const cplx* k3, const cplx* k4,
                 cplx* y, std::size_t n) {
  const __m256d hv = _mm256_set1_pd(h);
  const __m256d two = _mm256_set1_pd(2.0);
  const double* a = as_doubles(k1);
  const double* b = as_doubles(k2);
  const double* c = as_doubles(k3);
  const double* d = as_doubles(k4);
  double* yd = as_doubles(y);
  const std::size_t len = 2 * n;
  std::size_t i = 0;
  for (; i + 4 <= len; i += 4) {
    const __m256d mid = _mm256_add_pd(_mm256_loadu_pd(b + i), _mm256_loadu_pd(c + i));
    const __m256d ends = _mm256_add_pd(_mm256_loadu_pd(a + i), _mm256_loadu_pd(d + i));
    const __m256d sum = _mm256_fmadd_pd(two, mid, ends);
    _mm256_storeu_pd(yd + i, _mm256_fmadd_pd(hv, sum, _mm256_loadu_pd(yd + i)));
  }
  for (; i < len; ++i) {
    yd[i] += h * (a[i] + 2.0 * b[i] + 2.0 * c[i] + d[i]);
  }
}

cplx cdotc(const cplx* x, const cplx* y, std::size_t n) {
  const double* xd = as_doubles(x);
  const double* yd = as_doubles(y);
  __m256d acc_re = _mm256_setzero_pd();
  __m256d acc_im = _mm256_setzero_pd();
  std::size_t i = 0;
  for (; i + 2 <= n; i += 2) {
    const __m256d xv = _mm256_loadu_pd(xd + 2 * i);
    const __m256d yv = _mm256_loadu_pd(yd + 2 * i);
    acc_re = _mm256_fmadd_pd(xv, yv, acc_re);
    acc_im = _mm256_fmadd_pd(xv, _mm256_permute_pd(yv, 0b0101), acc_im);
  }
  alignas(32) double re_lanes[4];
  alignas(32) double im_lanes[4];
  _mm256_store_pd(re_lanes, acc_re);
  _mm256_store_pd(im_lanes, acc_im);
  double re = (re_lanes[0] + re_lanes[1]) + (re_lanes[2] + re_lanes[3]);
  double im = (im_lanes[0] - im_lanes[1]) + (im_lanes[2] - im_lanes[3]);
  for (; i < n; ++i) {
    re += x[i].real() * y[i].real() + x[i].imag() * y[i].imag();
    im += x[i].real() * y[i].imag() - x[i].imag() * y[i].real();
  }
  return {re, im};
}

}  // namespace

const KernelTable kAvx2Table{Isa::Avx2, caxpy, caxpy_weighted, raxpy, rwaxpy, rk4_combine, cdotc};

}  // namespace noonsim::kernels::detail
