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

#pragma once

#include <complex>
#include <cstddef>
#include <span>
#include <string_view>

namespace wpcn::simd {

using cplx = std::complex<double>;

enum class Backend { kScalar, kAvx2 };

// Inner loops shared by the channel and policy code. Every backend must agree
// with kScalar to rounding (see tests/test_kernels.cpp).
struct KernelTable {
  // sum_k conj(a_k) * b_k
  cplx (*dotc)(const cplx* a, const cplx* b, std::size_t n);
  // sum_k a_k * b_k
  cplx (*dotu)(const cplx* a, const cplx* b, std::size_t n);
  // sum_k |a_k|^2
  double (*norm2)(const cplx* a, std::size_t n);
  // y_k += alpha * conj(x_k)
  void (*axpy_conj)(cplx alpha, const cplx* x, cplx* y, std::size_t n);
  // y_k += alpha * x_k
  void (*axpy)(cplx alpha, const cplx* x, cplx* y, std::size_t n);
};

bool backend_available(Backend b) noexcept;
const KernelTable& table(Backend b);

// Active backend: the best available one at startup, unless the environment
// variable WPCN_SIMD=scalar forces the reference kernels.
Backend active_backend() noexcept;
void select_backend(Backend b);
const KernelTable& active() noexcept;

std::string_view backend_name(Backend b) noexcept;

inline cplx dotc(std::span<const cplx> a, std::span<const cplx> b) {
  return active().dotc(a.data(), b.data(), a.size());
}
inline cplx dotu(std::span<const cplx> a, std::span<const cplx> b) {
  return active().dotu(a.data(), b.data(), a.size());
}
inline double norm2(std::span<const cplx> a) { return active().norm2(a.data(), a.size()); }
inline void axpy_conj(cplx alpha, std::span<const cplx> x, std::span<cplx> y) {
  active().axpy_conj(alpha, x.data(), y.data(), x.size());
}
inline void axpy(cplx alpha, std::span<const cplx> x, std::span<cplx> y) {
  active().axpy(alpha, x.data(), y.data(), x.size());
}

namespace detail {
const KernelTable& scalar_table() noexcept;
#if defined(WPCN_HAVE_AVX2)
const KernelTable& avx2_table() noexcept;
#endif
}  // namespace detail

}  // namespace wpcn::simd
