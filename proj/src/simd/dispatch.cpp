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

#include <atomic>
#include <cstdlib>
#include <string>

#include "wpcn/error.hpp"
#include "wpcn/simd/kernels.hpp"

namespace wpcn::simd {
namespace {

bool cpu_has_avx2() noexcept {
#if defined(WPCN_HAVE_AVX2) && (defined(__GNUC__) || defined(__clang__))
  __builtin_cpu_init();
  return __builtin_cpu_supports("avx2") && __builtin_cpu_supports("fma");
#else
  return false;
#endif
}

Backend initial_backend() noexcept {
  if (const char* env = std::getenv("WPCN_SIMD"); env != nullptr && std::string(env) == "scalar") {
    return Backend::kScalar;
  }
  return cpu_has_avx2() ? Backend::kAvx2 : Backend::kScalar;
}

std::atomic<Backend>& current() noexcept {
  static std::atomic<Backend> b{initial_backend()};
  return b;
}

}  // namespace

bool backend_available(Backend b) noexcept {
  switch (b) {
    case Backend::kScalar:
      return true;
    case Backend::kAvx2:
      return cpu_has_avx2();
  }
  return false;
}

const KernelTable& table(Backend b) {
  if (!backend_available(b)) {
    throw Error(ErrorCode::kInvalidArgument,
                "SIMD backend " + std::string(backend_name(b)) + " not available on this CPU");
  }
#if defined(WPCN_HAVE_AVX2)
  if (b == Backend::kAvx2) return detail::avx2_table();
#endif
  return detail::scalar_table();
}

Backend active_backend() noexcept { return current().load(std::memory_order_relaxed); }

void select_backend(Backend b) {
  table(b);  // throws when unavailable
  current().store(b, std::memory_order_relaxed);
}

const KernelTable& active() noexcept {
#if defined(WPCN_HAVE_AVX2)
  if (active_backend() == Backend::kAvx2) return detail::avx2_table();
#endif
  return detail::scalar_table();
}

std::string_view backend_name(Backend b) noexcept {
  switch (b) {
    case Backend::kScalar:
      return "scalar";
    case Backend::kAvx2:
      return "avx2";
  }
  return "unknown";
}

}  // namespace wpcn::simd
