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

#include "wpcn/numerics/linalg.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <numeric>
#include <string>

#include "wpcn/error.hpp"
#include "wpcn/simd/kernels.hpp"

namespace wpcn {
namespace {

constexpr int kMaxQlIterations = 64;
constexpr int kMaxJacobiSweeps = 80;

void check_hermitian_input(const CMatrix& a) {
  if (!a.is_square()) {
    throw Error(ErrorCode::kNonSquare,
                std::to_string(a.rows()) + "x" + std::to_string(a.cols()) + " input");
  }
  if (!all_finite(a.data())) throw Error(ErrorCode::kNonFinite, "hermitian_eig input");
  const double tol = kHermitianTolerance * a.frobenius_norm();
  for (std::size_t i = 0; i < a.rows(); ++i) {
    for (std::size_t j = i; j < a.cols(); ++j) {
      if (std::abs(a(i, j) - std::conj(a(j, i))) > tol) {
        throw Error(ErrorCode::kNonHermitian,
                    "entry (" + std::to_string(i) + "," + std::to_string(j) + ") off by " +
                        std::to_string(std::abs(a(i, j) - std::conj(a(j, i)))));
      }
    }
  }
}

// Reduces the Hermitian matrix in `a` (lower part used) to tridiagonal form
// T = Qᴴ·A·Q. On return diag holds T's diagonal, sub the complex subdiagonal
// (sub[k] couples k and k+1), and q the accumulated unitary.
void tridiagonalize(CMatrix& a, std::vector<double>& diag, std::vector<cplx>& sub, CMatrix& q) {
  const std::size_t n = a.rows();
  q = CMatrix::identity(n);
  diag.assign(n, 0.0);
  sub.assign(n, cplx{});
  CVector v, p;
  for (std::size_t k = 0; k + 2 < n; ++k) {
    const std::size_t m = n - k - 1;
    v.resize(m);
    for (std::size_t i = 0; i < m; ++i) v[i] = a(k + 1 + i, k);
    double tail = 0.0;
    for (std::size_t i = 1; i < m; ++i) tail += std::norm(v[i]);
    if (tail == 0.0) continue;  // column already tridiagonal
    const double xnorm = std::sqrt(std::norm(v[0]) + tail);
    const cplx phase = std::abs(v[0]) > 0.0 ? v[0] / std::abs(v[0]) : cplx{1.0, 0.0};
    const cplx alpha = -phase * xnorm;
    v[0] -= alpha;
    const double vnorm = std::sqrt(simd::norm2(v));
    for (auto& e : v) e /= vnorm;

    // trailing block B <- H B H with H = I - 2 v vᴴ
    p.assign(m, cplx{});
    for (std::size_t i = 0; i < m; ++i) {
      cplx s{};
      for (std::size_t j = 0; j < m; ++j) s += a(k + 1 + i, k + 1 + j) * v[j];
      p[i] = s;
    }
    const double kk = simd::dotc(v, p).real();
    for (std::size_t i = 0; i < m; ++i) p[i] -= kk * v[i];
    for (std::size_t i = 0; i < m; ++i) {
      for (std::size_t j = 0; j < m; ++j) {
        a(k + 1 + i, k + 1 + j) -= 2.0 * (v[i] * std::conj(p[j]) + p[i] * std::conj(v[j]));
      }
    }
    for (std::size_t i = 0; i < m; ++i) {
      a(k + 1 + i, k) = (i == 0) ? alpha : cplx{};
      a(k, k + 1 + i) = (i == 0) ? std::conj(alpha) : cplx{};
    }
    // Q <- Q·diag(I, H)
    for (std::size_t r = 0; r < n; ++r) {
      auto row = q.row(r).subspan(k + 1, m);
      const cplx t = simd::dotu(row, v);
      simd::axpy_conj(-2.0 * t, v, row);
    }
  }
  for (std::size_t i = 0; i < n; ++i) diag[i] = a(i, i).real();
  for (std::size_t i = 0; i + 1 < n; ++i) sub[i] = a(i + 1, i);
}

// Implicit QL with Wilkinson-style shifts on a real symmetric tridiagonal
// matrix (d, e with e[i] coupling i and i+1). Rotations are applied to the
// columns of z.
void tridiagonal_ql(std::vector<double>& d, std::vector<double>& e, CMatrix& z) {
  const int n = static_cast<int>(d.size());
  const std::size_t zr = z.rows();
  if (n > 0) e[n - 1] = 0.0;
  for (int l = 0; l < n; ++l) {
    int iter = 0;
    int m = l;
    do {
      for (m = l; m < n - 1; ++m) {
        const double dd = std::abs(d[m]) + std::abs(d[m + 1]);
        if (std::abs(e[m]) <= std::numeric_limits<double>::epsilon() * dd) break;
      }
      if (m != l) {
        if (++iter > kMaxQlIterations) {
          throw Error(ErrorCode::kNonFinite, "tridiagonal QL failed to converge");
        }
        double g = (d[l + 1] - d[l]) / (2.0 * e[l]);
        double r = std::hypot(g, 1.0);
        g = d[m] - d[l] + e[l] / (g + std::copysign(r, g));
        double s = 1.0, c = 1.0, p = 0.0;
        int i = m - 1;
        for (; i >= l; --i) {
          double f = s * e[i];
          const double b = c * e[i];
          r = std::hypot(f, g);
          e[i + 1] = r;
          if (r == 0.0) {
            d[i + 1] -= p;
            e[m] = 0.0;
            break;
          }
          s = f / r;
          c = g / r;
          g = d[i + 1] - p;
          r = (d[i] - g) * s + 2.0 * c * b;
          p = s * r;
          d[i + 1] = g + p;
          g = c * r - b;
          for (std::size_t k = 0; k < zr; ++k) {
            const cplx zf = z(k, i + 1);
            z(k, i + 1) = s * z(k, i) + c * zf;
            z(k, i) = c * z(k, i) - s * zf;
          }
        }
        if (r == 0.0 && i >= l) continue;
        d[l] -= p;
        e[l] = g;
        e[m] = 0.0;
      }
    } while (m != l);
  }
}

}  // namespace

EigResult hermitian_eig(const CMatrix& input) {
  check_hermitian_input(input);
  const std::size_t n = input.rows();
  EigResult out;
  if (n == 0) return out;

  CMatrix a(n, n);
  for (std::size_t i = 0; i < n; ++i) {
    a(i, i) = input(i, i).real();
    for (std::size_t j = i + 1; j < n; ++j) {
      const cplx v = 0.5 * (input(i, j) + std::conj(input(j, i)));
      a(i, j) = v;
      a(j, i) = std::conj(v);
    }
  }

  std::vector<double> d;
  std::vector<cplx> sub;
  CMatrix z;
  tridiagonalize(a, d, sub, z);

  // Unitary diagonal scaling makes the subdiagonal real and nonnegative.
  std::vector<double> e(n, 0.0);
  cplx phase{1.0, 0.0};
  for (std::size_t i = 0; i + 1 < n; ++i) {
    const double mag = std::abs(sub[i]);
    e[i] = mag;
    if (mag > 0.0) phase *= sub[i] / mag;
    if (phase != cplx{1.0, 0.0}) {
      for (std::size_t r = 0; r < n; ++r) z(r, i + 1) *= phase;
    }
  }

  tridiagonal_ql(d, e, z);

  std::vector<std::size_t> order(n);
  std::iota(order.begin(), order.end(), std::size_t{0});
  std::stable_sort(order.begin(), order.end(),
                   [&](std::size_t x, std::size_t y) { return d[x] > d[y]; });
  out.values.resize(n);
  out.vectors = CMatrix(n, n);
  for (std::size_t k = 0; k < n; ++k) {
    out.values[k] = d[order[k]];
    for (std::size_t r = 0; r < n; ++r) out.vectors(r, k) = z(r, order[k]);
  }
  return out;
}

SvdResult svd(const CMatrix& a) {
  if (!all_finite(a.data())) throw Error(ErrorCode::kNonFinite, "svd input");
  const bool transposed = a.rows() < a.cols();
  // Work on rows: bt has at least as many columns as rows.
  CMatrix bt = transposed ? a : a.adjoint();
  const std::size_t q = bt.rows();
  const std::size_t p = bt.cols();
  CMatrix vt = CMatrix::identity(q);  // rows of vt are the columns of V

  const double eps = std::numeric_limits<double>::epsilon();
  for (int sweep = 0; sweep < kMaxJacobiSweeps; ++sweep) {
    bool rotated = false;
    for (std::size_t i = 0; i + 1 < q; ++i) {
      for (std::size_t j = i + 1; j < q; ++j) {
        const double aa = simd::norm2(bt.row(i));
        const double bb = simd::norm2(bt.row(j));
        const cplx g = simd::dotc(bt.row(i), bt.row(j));
        const double gabs = std::abs(g);
        if (gabs == 0.0 || gabs <= eps * std::sqrt(aa * bb)) continue;
        rotated = true;
        const double zeta = (bb - aa) / (2.0 * gabs);
        const double t =
            (zeta >= 0.0 ? 1.0 : -1.0) / (std::abs(zeta) + std::sqrt(1.0 + zeta * zeta));
        const double c = 1.0 / std::sqrt(1.0 + t * t);
        const double s = c * t;
        const cplx ph = std::conj(g) / gabs;  // e^{-i·arg g}
        auto rotate = [&](CMatrix& m) {
          auto ri = m.row(i);
          auto rj = m.row(j);
          for (std::size_t k = 0; k < ri.size(); ++k) {
            const cplx xi = ri[k];
            const cplx xj = ph * rj[k];
            ri[k] = c * xi - s * xj;
            rj[k] = s * xi + c * xj;
          }
        };
        rotate(bt);
        rotate(vt);
      }
    }
    if (!rotated) break;
  }

  std::vector<double> norms(q);
  for (std::size_t j = 0; j < q; ++j) norms[j] = std::sqrt(simd::norm2(bt.row(j)));
  std::vector<std::size_t> order(q);
  std::iota(order.begin(), order.end(), std::size_t{0});
  std::stable_sort(order.begin(), order.end(),
                   [&](std::size_t x, std::size_t y) { return norms[x] > norms[y]; });

  SvdResult out;
  const double theta_max = q > 0 ? norms[order[0]] : 0.0;
  std::size_t rank = 0;
  if (theta_max > 0.0) {
    while (rank < q && norms[order[rank]] > kRankTolerance * theta_max) ++rank;
  }
  out.rank = rank;
  out.singulars.resize(rank);
  CMatrix u(p, rank);
  CMatrix v(q, rank);
  for (std::size_t k = 0; k < rank; ++k) {
    const std::size_t j = order[k];
    out.singulars[k] = norms[j];
    for (std::size_t r = 0; r < p; ++r) u(r, k) = bt(j, r) / norms[j];
    for (std::size_t r = 0; r < q; ++r) v(r, k) = vt(j, r);
  }
  // The sweep orthogonalised the columns of C = btᵀ, which is aᵀ for wide
  // input and conj(a) for tall input: C·V = U·Θ.
  for (auto& x : u.data()) x = std::conj(x);
  for (auto& x : v.data()) x = std::conj(x);
  if (transposed) {
    out.left = std::move(v);
    out.right = std::move(u);
  } else {
    out.left = std::move(u);
    out.right = std::move(v);
  }
  return out;
}

TopEigen top_eigen(const CMatrix& hermitian) {
  EigResult e = hermitian_eig(hermitian);
  TopEigen top;
  if (e.values.empty()) return top;
  top.value = e.values[0];
  top.vector = e.vector(0);
  return top;
}

TopEigen gram_top_eigen(const CMatrix& factor) {
  const std::size_t n = factor.cols();
  if (factor.rows() >= n) return top_eigen(gram_cols(factor));

  const EigResult small = hermitian_eig(gram_rows(factor));
  TopEigen top;
  top.value = std::max(small.values.empty() ? 0.0 : small.values[0], 0.0);
  top.vector.assign(n, cplx{});
  if (top.value > 0.0) {
    // u = factorᴴ·v / ‖factorᴴ·v‖
    for (std::size_t r = 0; r < factor.rows(); ++r) {
      simd::axpy_conj(small.vectors(r, 0), factor.row(r), top.vector);
    }
    const double nrm = std::sqrt(simd::norm2(top.vector));
    if (nrm > 0.0) {
      for (auto& x : top.vector) x /= nrm;
      return top;
    }
  }
  top.vector.assign(n, cplx{});
  top.vector[0] = 1.0;
  return top;
}

}  // namespace wpcn
