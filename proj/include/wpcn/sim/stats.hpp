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
#include <span>

namespace wpcn::sim {

struct Summary {
  std::size_t n = 0;
  double mean = 0.0;
  double stddev = 0.0;   // sample (n-1)
  double stderr_ = 0.0;  // stddev/√n
  double ci_low = 0.0;   // two-sided Student-t interval
  double ci_high = 0.0;
};

double mean(std::span<const double> xs);
// Standard error of the mean; 0 for fewer than two samples.
double standard_error(std::span<const double> xs);
Summary summarize(std::span<const double> xs, double confidence = 0.95);

// Spearman rank correlation with average ranks for ties.
double spearman(std::span<const double> x, std::span<const double> y);

}  // namespace wpcn::sim
