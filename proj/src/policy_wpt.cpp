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

#include "wpcn/policy_wpt.hpp"

#include <algorithm>
#include <cmath>
#include <string>

#include "wpcn/error.hpp"
#include "wpcn/numerics/special.hpp"

namespace wpcn {

void WptConfig::validate() const {
  if (!(p_avg > 0.0 && p_avg <= p_peak)) {
    throw Error(ErrorCode::kConfigError, "need 0 < p_avg <= p_peak");
  }
  if (!(v > 0.0)) throw Error(ErrorCode::kConfigError, "V must be positive");
}

BeamDecision silent_beam() { return {}; }

BeamDecision peak_beam(std::span<const cplx> unit_direction, double p_peak) {
  BeamDecision d;
  d.transmit = true;
  const double scale = std::sqrt(p_peak);
  d.x.assign(unit_direction.begin(), unit_direction.end());
  for (auto& v : d.x) v *= scale;
  d.tx_power = norm2(d.x);
  return d;
}

CMatrix sum_channel(std::span<const CMatrix> grams) {
  if (grams.empty()) throw Error(ErrorCode::kDimensionMismatch, "sum_channel of nothing");
  CMatrix total = grams.front();
  for (std::size_t i = 1; i < grams.size(); ++i) total += grams[i];
  return total;
}

BeamDecision optimal_decide(const TopEigen& top, double threshold, double p_peak) {
  if (top.value >= threshold) return peak_beam(top.vector, p_peak);
  return silent_beam();
}

BeamDecision optimal_decide(const CMatrix& w_sum, double threshold, double p_peak) {
  return optimal_decide(top_eigen(w_sum), threshold, p_peak);
}

BeamDecision mdpp_decide(const TopEigen& top, const WptQueue& q, const WptConfig& cfg) {
  // λ_max >= Z/V, written multiplicatively so Z = V·λ_max is an exact tie
  if (cfg.v * top.value >= q.backlog) return peak_beam(top.vector, cfg.p_peak);
  return silent_beam();
}

BeamDecision mdpp_decide(const CMatrix& w_sum, const WptQueue& q, const WptConfig& cfg) {
  return mdpp_decide(top_eigen(w_sum), q, cfg);
}

WptQueue update_queue(WptQueue q, double tx_power, double p_avg) {
  return {std::max(q.backlog + tx_power - p_avg, 0.0)};
}

std::vector<double> sample_lambda_max(const Topology& topo, std::size_t n, Rng& rng) {
  ChannelSampler sampler(topo);
  std::vector<double> out(n);
  for (std::size_t s = 0; s < n; ++s) {
    sampler.sample(rng);
    out[s] = gram_top_eigen(sampler.stacked()).value;
  }
  return out;
}

double threshold_from_samples(std::vector<double> lambda_max, double p_avg, double p_peak) {
  const double q = std::clamp(1.0 - p_avg / p_peak, 0.0, 1.0);
  return empirical_quantile_inplace(lambda_max, q);
}

double calibrate_threshold(const Topology& topo, const WptConfig& cfg, std::size_t n_samples,
                           Rng& rng) {
  cfg.validate();
  if (n_samples < kMinCalibrationSamples) {
    throw Error(ErrorCode::kInvalidArgument,
                "calibration needs at least " + std::to_string(kMinCalibrationSamples) +
                    " samples, got " + std::to_string(n_samples));
  }
  return threshold_from_samples(sample_lambda_max(topo, n_samples, rng), cfg.p_avg, cfg.p_peak);
}

}  // namespace wpcn
