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

#include "wpcn/numerics/cmatrix.hpp"

#include <cmath>
#include <string>

#include "wpcn/error.hpp"
#include "wpcn/simd/kernels.hpp"

namespace wpcn {
namespace {

void require_same_shape(const CMatrix& a, const CMatrix& b, const char* op) {
  if (a.rows() != b.rows() || a.cols() != b.cols()) {
    throw Error(ErrorCode::kDimensionMismatch,
                std::string(op) + ": " + std::to_string(a.rows()) + "x" + std::to_string(a.cols()) +
                    " vs " + std::to_string(b.rows()) + "x" + std::to_string(b.cols()));
  }
}

}  // namespace

CMatrix::CMatrix(std::size_t rows, std::size_t cols)
    : rows_(rows), cols_(cols), data_(rows * cols, cplx{0.0, 0.0}) {}

CMatrix::CMatrix(std::size_t rows, std::size_t cols, std::vector<cplx> entries)
    : rows_(rows), cols_(cols), data_(std::move(entries)) {
  if (data_.size() != rows * cols) {
    throw Error(ErrorCode::kDimensionMismatch,
                "expected " + std::to_string(rows * cols) + " entries, got " +
                    std::to_string(data_.size()));
  }
  if (!all_finite(data_)) throw Error(ErrorCode::kNonFinite, "matrix entries must be finite");
}

CMatrix CMatrix::identity(std::size_t n) {
  CMatrix m(n, n);
  for (std::size_t i = 0; i < n; ++i) m(i, i) = 1.0;
  return m;
}

CMatrix CMatrix::diagonal(std::span<const double> diag) {
  CMatrix m(diag.size(), diag.size());
  for (std::size_t i = 0; i < diag.size(); ++i) {
    if (!std::isfinite(diag[i])) throw Error(ErrorCode::kNonFinite, "diagonal entry");
    m(i, i) = diag[i];
  }
  return m;
}

CVector CMatrix::column(std::size_t c) const {
  CVector out(rows_);
  for (std::size_t r = 0; r < rows_; ++r) out[r] = (*this)(r, c);
  return out;
}

CMatrix CMatrix::adjoint() const {
  CMatrix out(cols_, rows_);
  for (std::size_t r = 0; r < rows_; ++r) {
    for (std::size_t c = 0; c < cols_; ++c) out(c, r) = std::conj((*this)(r, c));
  }
  return out;
}

double CMatrix::frobenius_norm() const { return std::sqrt(wpcn::norm2(data_)); }

double CMatrix::trace_real() const {
  double t = 0.0;
  const std::size_t n = std::min(rows_, cols_);
  for (std::size_t i = 0; i < n; ++i) t += (*this)(i, i).real();
  return t;
}

CMatrix& CMatrix::operator+=(const CMatrix& other) {
  require_same_shape(*this, other, "operator+=");
  for (std::size_t i = 0; i < data_.size(); ++i) data_[i] += other.data_[i];
  return *this;
}

CMatrix& CMatrix::operator-=(const CMatrix& other) {
  require_same_shape(*this, other, "operator-=");
  for (std::size_t i = 0; i < data_.size(); ++i) data_[i] -= other.data_[i];
  return *this;
}

CMatrix& CMatrix::operator*=(cplx s) {
  for (auto& v : data_) v *= s;
  return *this;
}

CMatrix operator+(CMatrix a, const CMatrix& b) { return a += b; }
CMatrix operator-(CMatrix a, const CMatrix& b) { return a -= b; }
CMatrix operator*(cplx s, CMatrix a) { return a *= s; }

CMatrix operator*(const CMatrix& a, const CMatrix& b) {
  if (a.cols() != b.rows()) {
    throw Error(ErrorCode::kDimensionMismatch, "matrix product inner dimensions differ");
  }
  CMatrix out(a.rows(), b.cols());
  for (std::size_t i = 0; i < a.rows(); ++i) {
    auto out_row = out.row(i);
    for (std::size_t k = 0; k < a.cols(); ++k) {
      const cplx aik = a(i, k);
      if (aik == cplx{}) continue;
      simd::axpy(aik, b.row(k), out_row);
    }
  }
  return out;
}

CVector operator*(const CMatrix& a, std::span<const cplx> x) {
  if (a.cols() != x.size()) {
    throw Error(ErrorCode::kDimensionMismatch, "matrix-vector product dimensions differ");
  }
  CVector y(a.rows());
  for (std::size_t i = 0; i < a.rows(); ++i) y[i] = simd::dotu(a.row(i), x);
  return y;
}

CMatrix gram_rows(const CMatrix& a) {
  const std::size_t n = a.rows();
  CMatrix g(n, n);
  for (std::size_t i = 0; i < n; ++i) {
    g(i, i) = simd::norm2(a.row(i));
    for (std::size_t j = i + 1; j < n; ++j) {
      // (a aᴴ)_{ij} = sum_k a_ik conj(a_jk)
      const cplx v = simd::dotc(a.row(j), a.row(i));
      g(i, j) = v;
      g(j, i) = std::conj(v);
    }
  }
  return g;
}

CMatrix gram_cols(const CMatrix& a) {
  const std::size_t n = a.cols();
  CMatrix g(n, n);
  // accumulate conj(a_r)ᵀ a_r row by row, upper triangle, then mirror
  for (std::size_t r = 0; r < a.rows(); ++r) {
    const auto row = a.row(r);
    for (std::size_t i = 0; i < n; ++i) {
      const cplx ci = std::conj(row[i]);
      if (ci == cplx{}) continue;
      simd::axpy(ci, row.subspan(i), g.row(i).subspan(i));
    }
  }
  for (std::size_t i = 0; i < n; ++i) {
    g(i, i) = cplx(g(i, i).real(), 0.0);
    for (std::size_t j = i + 1; j < n; ++j) g(j, i) = std::conj(g(i, j));
  }
  return g;
}

double quadratic_form(const CMatrix& a, std::span<const cplx> x) {
  if (!a.is_square() || a.cols() != x.size()) {
    throw Error(ErrorCode::kDimensionMismatch, "quadratic form dimensions differ");
  }
  double acc = 0.0;
  for (std::size_t i = 0; i < a.rows(); ++i) {
    acc += (std::conj(x[i]) * simd::dotu(a.row(i), x)).real();
  }
  return acc;
}

double norm2(std::span<const cplx> x) { return simd::norm2(x); }

bool all_finite(std::span<const cplx> x) {
  for (const auto& v : x) {
    if (!std::isfinite(v.real()) || !std::isfinite(v.imag())) return false;
  }
  return true;
}

}  // namespace wpcn
