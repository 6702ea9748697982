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

#include <doctest.h>

#include <random>
#include <vector>

#include "support.hpp"
#include "wpcn/simd/kernels.hpp"

using namespace wpcn;
using wpcn::simd::Backend;

namespace {

double rel(cplx a, cplx b) { return std::abs(a - b) / std::max(1.0, std::abs(b)); }

}  // namespace

TEST_CASE("scalar backend is always available") {
  CHECK(simd::backend_available(Backend::kScalar));
  CHECK(simd::backend_name(Backend::kScalar) == "scalar");
}

TEST_CASE("AVX2 kernels match the scalar reference") {
  if (!simd::backend_available(Backend::kAvx2)) {
    MESSAGE("AVX2 not available on this host; equivalence test skipped");
    return;
  }
  const auto& ref = simd::table(Backend::kScalar);
  const auto& vec = simd::table(Backend::kAvx2);
  std::mt19937_64 rng(123);
  for (std::size_t n = 0; n <= 67; ++n) {
    const CVector a = testing::random_vector(n, rng);
    const CVector b = testing::random_vector(n, rng);
    const cplx alpha{0.3, -1.7};
    CHECK(rel(vec.dotc(a.data(), b.data(), n), ref.dotc(a.data(), b.data(), n)) < 1e-13);
    CHECK(rel(vec.dotu(a.data(), b.data(), n), ref.dotu(a.data(), b.data(), n)) < 1e-13);
    CHECK(vec.norm2(a.data(), n) ==
          doctest::Approx(ref.norm2(a.data(), n)).epsilon(1e-13));
    CVector y1 = b, y2 = b;
    ref.axpy(alpha, a.data(), y1.data(), n);
    vec.axpy(alpha, a.data(), y2.data(), n);
    for (std::size_t i = 0; i < n; ++i) CHECK(rel(y2[i], y1[i]) < 1e-14);
    y1 = b;
    y2 = b;
    ref.axpy_conj(alpha, a.data(), y1.data(), n);
    vec.axpy_conj(alpha, a.data(), y2.data(), n);
    for (std::size_t i = 0; i < n; ++i) CHECK(rel(y2[i], y1[i]) < 1e-14);
  }
}

TEST_CASE("scalar kernels against direct formulas") {
  const CVector a{{1, 2}, {3, -1}, {0, 1}};
  const CVector b{{2, 0}, {1, 1}, {-1, 4}};
  const auto& t = simd::table(Backend::kScalar);
  cplx c{}, u{};
  for (std::size_t i = 0; i < 3; ++i) {
    c += std::conj(a[i]) * b[i];
    u += a[i] * b[i];
  }
  CHECK(t.dotc(a.data(), b.data(), 3) == c);
  CHECK(t.dotu(a.data(), b.data(), 3) == u);
  CHECK(t.norm2(a.data(), 3) == 16.0);
}

TEST_CASE("backend switching round-trips") {
  const Backend before = simd::active_backend();
  simd::select_backend(Backend::kScalar);
  CHECK(simd::active_backend() == Backend::kScalar);
  simd::select_backend(before);
  CHECK(simd::active_backend() == before);
}
