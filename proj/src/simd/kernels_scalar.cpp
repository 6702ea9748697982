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

#include "wpcn/simd/kernels.hpp"

namespace wpcn::simd::detail {
namespace {

// Written with explicit real arithmetic so the reference path does not depend
// on the library's complex multiply (which adds NaN/Inf recovery branches).
cplx dotc_scalar(const cplx* a, const cplx* b, std::size_t n) {
  double re = 0.0;
  double im = 0.0;
  for (std::size_t k = 0; k < n; ++k) {
    const double ar = a[k].real(), ai = a[k].imag();
    const double br = b[k].real(), bi = b[k].imag();
    re += ar * br + ai * bi;
    im += ar * bi - ai * br;
  }
  return {re, im};
}

cplx dotu_scalar(const cplx* a, const cplx* b, std::size_t n) {
  double re = 0.0;
  double im = 0.0;
  for (std::size_t k = 0; k < n; ++k) {
    const double ar = a[k].real(), ai = a[k].imag();
    const double br = b[k].real(), bi = b[k].imag();
    re += ar * br - ai * bi;
    im += ar * bi + ai * br;
  }
  return {re, im};
}

double norm2_scalar(const cplx* a, std::size_t n) {
  double s = 0.0;
  for (std::size_t k = 0; k < n; ++k) {
    s += a[k].real() * a[k].real() + a[k].imag() * a[k].imag();
  }
  return s;
}

void axpy_conj_scalar(cplx alpha, const cplx* x, cplx* y, std::size_t n) {
  const double p = alpha.real(), q = alpha.imag();
  for (std::size_t k = 0; k < n; ++k) {
    const double xr = x[k].real(), xi = x[k].imag();
    y[k] = {y[k].real() + p * xr + q * xi, y[k].imag() + q * xr - p * xi};
  }
}

void axpy_scalar(cplx alpha, const cplx* x, cplx* y, std::size_t n) {
  const double p = alpha.real(), q = alpha.imag();
  for (std::size_t k = 0; k < n; ++k) {
    const double xr = x[k].real(), xi = x[k].imag();
    y[k] = {y[k].real() + p * xr - q * xi, y[k].imag() + q * xr + p * xi};
  }
}

}  // namespace

const KernelTable& scalar_table() noexcept {
  static const KernelTable t{dotc_scalar, dotu_scalar, norm2_scalar, axpy_conj_scalar,
                             axpy_scalar};
  return t;
}

}  // namespace wpcn::simd::detail
