// Copyright 2026 The wpcnsim Authors
//
// Licensed under the Apache License, Version 2.0 (the "License");
// you may not use this file except in compliance with the License.
// You may obtain a copy of the License at
//
//      http://www.apache.org/licenses/LICENSE-2.0
//
// Unless required by applicable law or agreed to in writing, software
// distributed under the License is distributed on an "AS IS" BASIS,
// WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
// See the License for the specific language governing permissions and
// limitations under the License.

// Compiled with -mavx2 -mfma; only reached after a runtime CPU check.
#include <immintrin.h>

#include "wpcn/simd/kernels.hpp"

namespace wpcn::simd::detail {
namespace {

// One __m256d holds two complex doubles: [re0, im0, re1, im1].
inline __m256d load2(const cplx* p) { return _mm256_loadu_pd(reinterpret_cast<const double*>(p)); }
inline __m256d swap_re_im(__m256d v) { return _mm256_permute_pd(v, 0b0101); }

inline double hsum_even(__m256d v) {
  alignas(32) double t[4];
  _mm256_store_pd(t, v);
  return t[0] + t[2];
}
inline double hsum_odd(__m256d v) {
  alignas(32) double t[4];
  _mm256_store_pd(t, v);
  return t[1] + t[3];
}

cplx dotc_avx2(const cplx* a, const cplx* b, std::size_t n) {
  __m256d prod = _mm256_setzero_pd();   // [ar*br, ai*bi, ...]
  __m256d cross = _mm256_setzero_pd();  // [ar*bi, ai*br, ...]
  std::size_t k = 0;
  for (; k + 2 <= n; k += 2) {
    const __m256d va = load2(a + k);
    const __m256d vb = load2(b + k);
    prod = _mm256_fmadd_pd(va, vb, prod);
    cross = _mm256_fmadd_pd(va, swap_re_im(vb), cross);
  }
  double re = hsum_even(prod) + hsum_odd(prod);
  double im = hsum_even(cross) - hsum_odd(cross);
  for (; k < n; ++k) {
    re += a[k].real() * b[k].real() + a[k].imag() * b[k].imag();
    im += a[k].real() * b[k].imag() - a[k].imag() * b[k].real();
  }
  return {re, im};
}

cplx dotu_avx2(const cplx* a, const cplx* b, std::size_t n) {
  __m256d prod = _mm256_setzero_pd();
  __m256d cross = _mm256_setzero_pd();
  std::size_t k = 0;
  for (; k + 2 <= n; k += 2) {
    const __m256d va = load2(a + k);
    const __m256d vb = load2(b + k);
    prod = _mm256_fmadd_pd(va, vb, prod);
    cross = _mm256_fmadd_pd(va, swap_re_im(vb), cross);
  }
  double re = hsum_even(prod) - hsum_odd(prod);
  double im = hsum_even(cross) + hsum_odd(cross);
  for (; k < n; ++k) {
    re += a[k].real() * b[k].real() - a[k].imag() * b[k].imag();
    im += a[k].real() * b[k].imag() + a[k].imag() * b[k].real();
  }
  return {re, im};
}

double norm2_avx2(const cplx* a, std::size_t n) {
  __m256d acc0 = _mm256_setzero_pd();
  __m256d acc1 = _mm256_setzero_pd();
  std::size_t k = 0;
  for (; k + 4 <= n; k += 4) {
    const __m256d v0 = load2(a + k);
    const __m256d v1 = load2(a + k + 2);
    acc0 = _mm256_fmadd_pd(v0, v0, acc0);
    acc1 = _mm256_fmadd_pd(v1, v1, acc1);
  }
  for (; k + 2 <= n; k += 2) {
    const __m256d v = load2(a + k);
    acc0 = _mm256_fmadd_pd(v, v, acc0);
  }
  const __m256d acc = _mm256_add_pd(acc0, acc1);
  double s = hsum_even(acc) + hsum_odd(acc);
  for (; k < n; ++k) s += a[k].real() * a[k].real() + a[k].imag() * a[k].imag();
  return s;
}

void axpy_conj_avx2(cplx alpha, const cplx* x, cplx* y, std::size_t n) {
  const double p = alpha.real(), q = alpha.imag();
  // y += [p*xr + q*xi, q*xr - p*xi]
  const __m256d vp = _mm256_setr_pd(p, -p, p, -p);
  const __m256d vq = _mm256_set1_pd(q);
  std::size_t k = 0;
  for (; k + 2 <= n; k += 2) {
    const __m256d vx = load2(x + k);
    double* yp = reinterpret_cast<double*>(y + k);
    __m256d vy = _mm256_loadu_pd(yp);
    vy = _mm256_fmadd_pd(vp, vx, vy);
    vy = _mm256_fmadd_pd(vq, swap_re_im(vx), vy);
    _mm256_storeu_pd(yp, vy);
  }
  for (; k < n; ++k) {
    const double xr = x[k].real(), xi = x[k].imag();
    y[k] = {y[k].real() + p * xr + q * xi, y[k].imag() + q * xr - p * xi};
  }
}

void axpy_avx2(cplx alpha, const cplx* x, cplx* y, std::size_t n) {
  const double p = alpha.real(), q = alpha.imag();
  // y += [p*xr - q*xi, p*xi + q*xr]
  const __m256d vp = _mm256_set1_pd(p);
  const __m256d vq = _mm256_setr_pd(-q, q, -q, q);
  std::size_t k = 0;
  for (; k + 2 <= n; k += 2) {
    const __m256d vx = load2(x + k);
    double* yp = reinterpret_cast<double*>(y + k);
    __m256d vy = _mm256_loadu_pd(yp);
    vy = _mm256_fmadd_pd(vp, vx, vy);
    vy = _mm256_fmadd_pd(vq, swap_re_im(vx), vy);
    _mm256_storeu_pd(yp, vy);
  }
  for (; k < n; ++k) {
    const double xr = x[k].real(), xi = x[k].imag();
    y[k] = {y[k].real() + p * xr - q * xi, y[k].imag() + q * xr + p * xi};
  }
}

}  // namespace

const KernelTable& avx2_table() noexcept {
  static const KernelTable t{dotc_avx2, dotu_avx2, norm2_avx2, axpy_conj_avx2, axpy_avx2};
  return t;
}

}  // namespace wpcn::simd::detail
