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

#include <random>

#include "wpcn/numerics/cmatrix.hpp"

namespace wpcn::testing {

inline CMatrix random_matrix(std::size_t rows, std::size_t cols, std::mt19937_64& rng,
                             double scale = 1.0) {
  std::normal_distribution<double> n(0.0, scale);
  CMatrix a(rows, cols);
  for (auto& v : a.data()) v = {n(rng), n(rng)};
  return a;
}

inline CMatrix random_hermitian(std::size_t n, std::mt19937_64& rng, double scale = 1.0) {
  CMatrix a = random_matrix(n, n, rng, scale);
  CMatrix h = a + a.adjoint();
  h *= 0.5;
  return h;
}

inline CVector random_vector(std::size_t n, std::mt19937_64& rng) {
  std::normal_distribution<double> d(0.0, 1.0);
  CVector v(n);
  for (auto& x : v) x = {d(rng), d(rng)};
  return v;
}

}  // namespace wpcn::testing
