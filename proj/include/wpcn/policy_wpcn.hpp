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
#include <optional>
#include <span>
#include <vector>

#include "wpcn/numerics/cmatrix.hpp"
#include "wpcn/numerics/linalg.hpp"
#include "wpcn/policy_fair.hpp"

namespace wpcn {

// Joint power/information transfer parameters. d_min is in bits per slot;
// rx_antennas (M) and noise_variance set the γ box D_max = M·log2(1 + P_peak/σ²).
struct WpcnConfig {
  double p_avg = 0.03;
  double p_peak = 2.0;
  double d_min = 0.0;
  double v = 1e2;
  double noise_variance = 1e-13;
  std::size_t rx_antennas = 1;
  Utility utility = Utility::sum();

  double d_max() const;
  void validate() const;
};

struct WpcnQueueSet {
  std::vector<double> fairness;   // G_i
  std::vector<double> min_rate;   // Z_i
  double avg_power = 0.0;         // Z_AP

  // G_i = Z_i = d_min, Z_AP = 0.
  static WpcnQueueSet initial(std::size_t k, double d_min);
  std::size_t size() const noexcept { return fairness.size(); }
};

// Closed-form per-receiver solution of the slot problem, assuming the whole
// downlink beam serves receiver `index`.
struct ErCandidate {
  std::size_t index = 0;
  bool feasible = false;
  double alpha = 0.0;
  double beta = 0.0;
  double delta = 0.0;       // water level
  double omega = 0.0;       // τ_u / τ_0
  double lambda_w = 0.0;    // top eigenvalue of W_i
  double weight = 0.0;      // G_i + Z_i
  std::vector<double> thetas;  // singular values of √(G_i+Z_i)·H'_i
  std::vector<double> psi;
  CMatrix covariance;       // S_i, M×M
  double tau0 = 0.0;
  double tau_u = 1.0;
  double throughput = 0.0;  // bits
  double objective = 0.0;   // (G_i + Z_i)·D_i
};

ErCandidate er_candidate(std::size_t index, const CMatrix& h_up, const CMatrix& w,
                         const WpcnQueueSet& q, const WpcnConfig& cfg);
// Same, with λ_max(W_i) supplied by the caller.
ErCandidate er_candidate(std::size_t index, const CMatrix& h_up, double lambda_w,
                         const WpcnQueueSet& q, const WpcnConfig& cfg);

// Stationarity defect of the water level for a candidate:
// −log δ + mean(log θ²) − 1 + δ·mean(1/θ²) − ζ/(r·(G+Z)), ζ = (δ·λ − Z_AP)·P_peak.
double candidate_kkt_residual(const ErCandidate& c, double z_ap, double p_peak);

// argmax of the objectives, lowest index on ties; nullopt when all are zero.
std::optional<std::size_t> select_candidate(std::span<const ErCandidate> candidates);

// √p_peak times the top eigenvector of the chosen receiver's Gram matrix.
CVector build_downlink_beam(const CMatrix& w_chosen, double p_peak);

// τ_u·log2 det(I + H'·S·H'ᴴ).
double throughput(const CMatrix& h_up, const CMatrix& s, double tau_u);

std::vector<double> solve_gamma_it(const Utility& utility, double v, std::span<const double> g,
                                   double d_max);

WpcnQueueSet update_wpcn_queues(const WpcnQueueSet& q, std::span<const double> gamma,
                                std::span<const double> rates, double tau0, double tx_power,
                                const WpcnConfig& cfg);

}  // namespace wpcn
