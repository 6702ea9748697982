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
#include <vector>

namespace wpcn {

using cplx = std::complex<double>;
using CVector = std::vector<cplx>;

// Dense complex matrix, row-major. Entries are dimensionless (channel gains,
// covariances); the constructors reject non-finite data.
class CMatrix {
 public:
  CMatrix() = default;
  CMatrix(std::size_t rows, std::size_t cols);
  CMatrix(std::size_t rows, std::size_t cols, std::vector<cplx> entries);

  static CMatrix identity(std::size_t n);
  static CMatrix diagonal(std::span<const double> diag);

  std::size_t rows() const noexcept { return rows_; }
  std::size_t cols() const noexcept { return cols_; }
  std::size_t size() const noexcept { return data_.size(); }
  bool is_square() const noexcept { return rows_ == cols_; }
  bool empty() const noexcept { return data_.empty(); }

  cplx& operator()(std::size_t r, std::size_t c) noexcept { return data_[r * cols_ + c]; }
  const cplx& operator()(std::size_t r, std::size_t c) const noexcept {
    return data_[r * cols_ + c];
  }

  std::span<cplx> row(std::size_t r) noexcept { return {data_.data() + r * cols_, cols_}; }
  std::span<const cplx> row(std::size_t r) const noexcept {
    return {data_.data() + r * cols_, cols_};
  }
  CVector column(std::size_t c) const;

  std::span<cplx> data() noexcept { return data_; }
  std::span<const cplx> data() const noexcept { return data_; }

  CMatrix adjoint() const;
  double frobenius_norm() const;
  double trace_real() const;

  CMatrix& operator+=(const CMatrix& other);
  CMatrix& operator-=(const CMatrix& other);
  CMatrix& operator*=(cplx s);

  friend bool operator==(const CMatrix&, const CMatrix&) = default;

 private:
  std::size_t rows_ = 0;
  std::size_t cols_ = 0;
  std::vector<cplx> data_;
};

CMatrix operator+(CMatrix a, const CMatrix& b);
CMatrix operator-(CMatrix a, const CMatrix& b);
CMatrix operator*(cplx s, CMatrix a);
CMatrix operator*(const CMatrix& a, const CMatrix& b);
CVector operator*(const CMatrix& a, std::span<const cplx> x);

// a·aᴴ (rows × rows) and aᴴ·a (cols × cols); both exactly Hermitian.
CMatrix gram_rows(const CMatrix& a);
CMatrix gram_cols(const CMatrix& a);

// xᴴ·A·x, real part (A Hermitian).
double quadratic_form(const CMatrix& a, std::span<const cplx> x);

double norm2(std::span<const cplx> x);
bool all_finite(std::span<const cplx> x);

}  // namespace wpcn
