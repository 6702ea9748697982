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
#include <functional>
#include <span>
#include <string>
#include <string_view>
#include <vector>

#include "wpcn/numerics/cmatrix.hpp"
#include "wpcn/numerics/linalg.hpp"
#include "wpcn/policy_wpt.hpp"

namespace wpcn {

enum class UtilityKind { kSum, kProportionalFair, kMaxMin, kAlphaFair };

// Concave, nondecreasing network utility φ. AlphaFair uses the standard
// family Σ γ^(1-α)/(1-α) (α = 1 is proportional fairness).
struct Utility {
  UtilityKind kind = UtilityKind::kSum;
  double alpha = 1.0;

  static Utility sum() { return {UtilityKind::kSum, 1.0}; }
  static Utility proportional_fair() { return {UtilityKind::kProportionalFair, 1.0}; }
  static Utility max_min() { return {UtilityKind::kMaxMin, 1.0}; }
  static Utility alpha_fair(double a) { return {UtilityKind::kAlphaFair, a}; }

  // Accepts sum, pf/proportional, mmf/maxmin/max-min, alpha.
  static Utility parse(std::string_view name, double alpha = 1.0);
  std::string name() const;
  void validate() const;

  // φ(γ); -inf where a logarithmic/negative-power term is evaluated at 0.
  double value(std::span<const double> gamma) const;
};

struct FairConfig {
  double p_avg = 0.4;
  double p_peak = 2.0;
  double p_min = 0.0;
  double v = 1e4;
  double eta = 0.5;
  Utility utility = Utility::proportional_fair();

  void validate() const;
};

// G (fairness), Z (minimum-power) per receiver and the E-AP average-power
// queue. All start at zero.
struct FairQueueSet {
  std::vector<double> fairness;
  std::vector<double> min_power;
  double avg_power = 0.0;

  FairQueueSet() = default;
  explicit FairQueueSet(std::size_t k) : fairness(k, 0.0), min_power(k, 0.0) {}
  std::size_t size() const noexcept { return fairness.size(); }
};

// Σ (Z_i + G_i)·W_i − Z_AP·I. The result may be indefinite.
CMatrix weighted_channel(std::span<const CMatrix> grams, const FairQueueSet& q);

// Transmit √p_peak·u_max iff λ_max(W') >= 0 (zero counts as transmit).
BeamDecision qf_decide(const CMatrix& w_prime, double p_peak);
BeamDecision qf_decide(const TopEigen& top, double p_peak);

// min_γ −V·φ(γ) + Σ G_i·γ_i over the box [0, upper]^K, closed forms per kind.
std::vector<double> solve_gamma(const Utility& utility, double v, std::span<const double> g,
                                double upper);

// The objective minimised by solve_gamma.
double gamma_objective(const Utility& utility, double v, std::span<const double> g,
                       std::span<const double> gamma);

// Projected-gradient fallback for a user-supplied differentiable concave φ.
struct GenericUtility {
  std::function<double(std::span<const double>)> value;
  std::function<void(std::span<const double>, std::span<double>)> gradient;
};
std::vector<double> solve_gamma_generic(const GenericUtility& utility, double v,
                                        std::span<const double> g, double upper);

// received: raw quadratic forms xᴴW_i x (no η), tx_power = ‖x‖².
FairQueueSet update_fair_queues(const FairQueueSet& q, std::span<const double> gamma,
                                std::span<const double> received, double tx_power,
                                const FairConfig& cfg);

}  // namespace wpcn
