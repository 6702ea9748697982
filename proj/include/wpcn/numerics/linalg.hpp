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

#include <cstddef>
#include <vector>

#include "wpcn/numerics/cmatrix.hpp"

namespace wpcn {

// Eigenpairs of a Hermitian matrix, eigenvalues sorted descending.
// vectors.column(k) is the unit eigenvector for values[k].
struct EigResult {
  std::vector<double> values;
  CMatrix vectors;

  CVector vector(std::size_t k) const { return vectors.column(k); }
};

// Thin SVD restricted to the numerical rank: a ≈ left · diag(singulars) · rightᴴ,
// left is rows×rank and right is cols×rank.
struct SvdResult {
  CMatrix left;
  std::vector<double> singulars;
  CMatrix right;
  std::size_t rank = 0;
};

// Largest eigenvalue and a unit eigenvector.
struct TopEigen {
  double value = 0.0;
  CVector vector;
};

// Householder tridiagonalisation followed by implicit-shift QL. The input is
// symmetrised; asymmetry beyond 1e-12·‖A‖_F is rejected.
EigResult hermitian_eig(const CMatrix& a);

// One-sided (Hestenes) Jacobi on the taller orientation of a. Singular values
// below 1e-12·θ_max are dropped from the rank.
SvdResult svd(const CMatrix& a);

TopEigen top_eigen(const CMatrix& hermitian);

// Top eigenpair of factorᴴ·factor without forming it when factor is wide:
// the small Gram factor·factorᴴ is decomposed and its eigenvector mapped back.
TopEigen gram_top_eigen(const CMatrix& factor);

inline constexpr double kHermitianTolerance = 1e-12;
inline constexpr double kRankTolerance = 1e-12;

}  // namespace wpcn
