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
#include <vector>

#include "wpcn/channel.hpp"
#include "wpcn/numerics/cmatrix.hpp"
#include "wpcn/numerics/linalg.hpp"

namespace wpcn {

// Average/peak power budgets (watts), MDPP control parameter and harvesting
// efficiency. Decisions ignore eta; it only scales reported power.
struct WptConfig {
  double p_avg = 0.4;
  double p_peak = 2.0;
  double v = 1e4;
  double eta = 0.5;

  void validate() const;
};

// Virtual queue for the average-power constraint, in watt-slots.
struct WptQueue {
  double backlog = 0.0;
};

// Per-slot transmit decision. x is empty when silent; tx_power = ‖x‖².
struct BeamDecision {
  bool transmit = false;
  CVector x;
  double tx_power = 0.0;
};

BeamDecision silent_beam();
// √p_peak·u for a unit vector u.
BeamDecision peak_beam(std::span<const cplx> unit_direction, double p_peak);

CMatrix sum_channel(std::span<const CMatrix> grams);

// Threshold policy: full power along the top eigenvector of W_sum when its
// top eigenvalue reaches `threshold`.
BeamDecision optimal_decide(const CMatrix& w_sum, double threshold, double p_peak);
BeamDecision optimal_decide(const TopEigen& top, double threshold, double p_peak);

// Drift-plus-penalty rule: transmit iff λ_max(W_sum) >= Z/V.
BeamDecision mdpp_decide(const CMatrix& w_sum, const WptQueue& q, const WptConfig& cfg);
BeamDecision mdpp_decide(const TopEigen& top, const WptQueue& q, const WptConfig& cfg);

WptQueue update_queue(WptQueue q, double tx_power, double p_avg);

// λ_max of the summed Gram matrix for n fresh channel draws.
std::vector<double> sample_lambda_max(const Topology& topo, std::size_t n, Rng& rng);

// Empirical threshold F⁻¹(1 - p_avg/p_peak) from lambda samples.
double threshold_from_samples(std::vector<double> lambda_max, double p_avg, double p_peak);

// Monte-Carlo estimate of the optimal threshold; n_samples >= 1000.
double calibrate_threshold(const Topology& topo, const WptConfig& cfg, std::size_t n_samples,
                           Rng& rng);

inline constexpr std::size_t kMinCalibrationSamples = 1000;

}  // namespace wpcn
