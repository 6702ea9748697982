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

#include "wpcn/numerics/special.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <numbers>
#include <string>

#include "wpcn/error.hpp"

namespace wpcn {
namespace {

constexpr double kBranchPoint = -1.0 / std::numbers::e;
constexpr double kBranchSlack = 1e-14;

// Series about the branch point in p = sqrt(2(1 + e·x)).
double branch_series(double p) {
  return -1.0 + p * (1.0 + p * (-1.0 / 3.0 + p * (11.0 / 72.0 + p * (-43.0 / 540.0 +
                                                                    p * (769.0 / 17280.0)))));
}

double initial_guess(double x) {
  if (x < -0.25) {
    return branch_series(std::sqrt(std::max(0.0, 2.0 * (std::numbers::e * x + 1.0))));
  }
  if (x < 3.0) {
    // Padé-like start that is exact at 0 and reasonable on [-0.25, 3]
    return x * (1.0 + 4.0 / 3.0 * x) / (1.0 + 7.0 / 3.0 * x + 5.0 / 6.0 * x * x);
  }
  const double l1 = std::log(x);
  const double l2 = std::log(l1);
  return l1 - l2 + l2 / l1;
}

}  // namespace

double lambert_w0(double x) {
  if (std::isnan(x)) throw Error(ErrorCode::kDomainError, "lambert_w0(NaN)");
  if (x < kBranchPoint - kBranchSlack) {
    throw Error(ErrorCode::kDomainError, "lambert_w0 argument " + std::to_string(x) +
                                             " below -1/e");
  }
  if (x <= kBranchPoint) return -1.0;
  if (x == 0.0) return 0.0;
  if (std::isinf(x)) return x;

  const double p2 = 2.0 * (std::numbers::e * x + 1.0);
  if (p2 < 1e-6) {
    // Halley's denominator vanishes at the branch point; the truncated
    // series is already accurate to ~p^6 here.
    return branch_series(std::sqrt(std::max(0.0, p2)));
  }

  double w = initial_guess(x);
  for (int it = 0; it < 64; ++it) {
    const double ew = std::exp(w);
    const double f = w * ew - x;
    const double wp1 = w + 1.0;
    const double denom = ew * wp1 - (w + 2.0) * f / (2.0 * wp1);
    const double step = f / denom;
    w -= step;
    if (std::abs(step) <= 4.0 * std::numeric_limits<double>::epsilon() * (1.0 + std::abs(w))) {
      break;
    }
  }
  return w;
}

double lambert_w0_of_exp(double log_x) {
  if (log_x < 500.0) return lambert_w0(std::exp(log_x));
  // w + log w = log_x, solved by Newton from the asymptotic start.
  double w = log_x - std::log(log_x);
  for (int it = 0; it < 64; ++it) {
    const double f = w + std::log(w) - log_x;
    const double step = f / (1.0 + 1.0 / w);
    w -= step;
    if (std::abs(step) <= 4.0 * std::numeric_limits<double>::epsilon() * w) break;
  }
  return w;
}

double empirical_quantile(std::span<const double> samples, double q) {
  std::vector<double> copy(samples.begin(), samples.end());
  return empirical_quantile_inplace(copy, q);
}

double empirical_quantile_inplace(std::vector<double>& samples, double q) {
  if (samples.empty()) throw Error(ErrorCode::kEmptySamples, "empirical_quantile");
  if (!(q >= 0.0 && q <= 1.0)) {
    throw Error(ErrorCode::kInvalidArgument, "quantile level must be in [0,1]");
  }
  for (double s : samples) {
    if (!std::isfinite(s)) throw Error(ErrorCode::kNonFinite, "empirical_quantile sample");
  }
  const std::size_t n = samples.size();
  // guard against q·n landing a few ulps above an integer
  const double pos = q * static_cast<double>(n) * (1.0 - 8.0 * std::numeric_limits<double>::epsilon());
  std::size_t rank = static_cast<std::size_t>(std::ceil(pos));
  rank = std::clamp<std::size_t>(rank, 1, n);
  auto nth = samples.begin() + static_cast<std::ptrdiff_t>(rank - 1);
  std::nth_element(samples.begin(), nth, samples.end());
  return *nth;
}

std::vector<double> waterfill_alloc(std::span<const double> thetas, double delta) {
  if (!(delta > 0.0) || !std::isfinite(delta)) {
    throw Error(ErrorCode::kInvalidArgument, "water level must be positive and finite");
  }
  std::vector<double> psi(thetas.size());
  for (std::size_t j = 0; j < thetas.size(); ++j) {
    if (!(thetas[j] > 0.0)) {
      throw Error(ErrorCode::kInvalidArgument, "singular values must be positive");
    }
    psi[j] = std::max(0.0, 1.0 - delta / (thetas[j] * thetas[j]));
  }
  return psi;
}

}  // namespace wpcn
