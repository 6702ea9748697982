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

#include <span>
#include <vector>

namespace wpcn {

// Principal branch of the Lambert W function, w·e^w = x with w >= -1.
// Throws DomainError for x < -1/e (a slack of 1e-14 is accepted).
double lambert_w0(double x);

// W0(e^log_x) for arguments whose exponential would overflow.
double lambert_w0_of_exp(double log_x);

// Nearest-rank quantile: sort ascending, take element ceil(q·n) (1-based,
// clamped to [1, n]); q = 0 returns the minimum.
double empirical_quantile(std::span<const double> samples, double q);

// Same convention, but reorders `samples` in place (O(n) selection).
double empirical_quantile_inplace(std::vector<double>& samples, double q);

// ψ_j = max(0, 1 - delta/θ_j²).
std::vector<double> waterfill_alloc(std::span<const double> thetas, double delta);

}  // namespace wpcn
