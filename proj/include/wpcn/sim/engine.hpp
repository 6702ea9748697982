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
#include <cstdint>
#include <optional>
#include <span>
#include <string>
#include <vector>

#include "wpcn/channel.hpp"
#include "wpcn/sim/config.hpp"

namespace wpcn::sim {

// Columnar per-slot record. Per-receiver columns are stored slot-major
// (index slot*K + i). Queue columns hold the post-update backlogs.
// For the WPT policies z holds the minimum-power queues, for QGF-IT the
// minimum-rate queues; both are zero where a policy has no such queue.
struct Trace {
  std::size_t receivers = 0;
  std::vector<std::uint8_t> transmit;
  std::vector<double> tx_power;  // ‖x‖²
  std::vector<double> tau0;
  std::vector<double> z_ap;
  std::vector<double> received;  // τ0·η·xᴴW_i x
  std::vector<double> rate;      // bits
  std::vector<double> z;
  std::vector<double> g;

  explicit Trace(std::size_t k = 0) : receivers(k) {}
  std::size_t size() const noexcept { return tx_power.size(); }
  void reserve(std::size_t slots);
};

// Per-slot constraint failures counted over a run.
struct InvariantReport {
  std::size_t peak = 0;        // ‖x‖² > P_peak
  std::size_t two_level = 0;   // tx not in {0, P_peak} (WPT policies)
  std::size_t causality = 0;   // τ_u·Tr(S) > τ0·xᴴWx
  std::size_t tau_sum = 0;     // τ0 + τ_u != 1 on transmit slots
  std::size_t kkt = 0;         // water-level residual above tolerance
  std::size_t queues = 0;      // negative or non-finite backlog
  double max_kkt_residual = 0.0;
  std::size_t kkt_checks = 0;

  std::size_t total() const noexcept {
    return peak + two_level + causality + tau_sum + kkt + queues;
  }
};

inline constexpr double kKktTolerance = 1e-9;

struct RunMetrics {
  std::string policy;  // display name
  PolicyParams params;
  std::size_t horizon = 0;
  std::uint64_t seed = 0;
  std::vector<double> avg_received;    // η applied
  double total_received = 0.0;         // Σ_i avg_received
  double avg_tx_power = 0.0;           // mean of τ0·‖x‖²
  std::vector<double> avg_throughput;  // bits per slot
  std::size_t transmit_slots = 0;
  double final_z_ap = 0.0;
  std::vector<double> final_z;
  std::vector<double> final_g;
  std::optional<std::size_t> convergence_time;  // nullopt: never within tolerance
  double threshold = 0.0;                       // optimal policy only
  double gap_bound = 0.0;                       // B/V for the WPT policies
  InvariantReport invariants;
  std::vector<std::string> warnings;
  std::optional<Trace> trace;
};

struct RunOptions {
  std::size_t horizon = 100000;
  std::uint64_t seed = 1;
  std::size_t calibration_samples = 100000;
  bool record_trace = false;
  double convergence_tolerance = 1e-3;  // fraction of P_avg
};

// Runs every policy over one common channel realisation, slot by slot.
// Results are in input order and identical to running each policy alone
// with the same seed.
std::vector<RunMetrics> run_shared(const Topology& topo, std::span<const PolicyParams> policies,
                                   const RunOptions& opts);

RunMetrics run_scenario(const ScenarioConfig& cfg);

// Smallest prefix length L' (1-based) after which every running average of
// tx stays within tol·P_avg of P_avg; nullopt when the last prefix misses.
std::optional<std::size_t> convergence_time(std::span<const double> tx, double p_avg,
                                            double tol_fraction = 1e-3);

// Incremental form of convergence_time.
class ConvergenceTracker {
 public:
  ConvergenceTracker(double p_avg, double tol_fraction) : p_avg_(p_avg), tol_(tol_fraction) {}
  void push(double tx);
  std::size_t count() const noexcept { return n_; }
  std::optional<std::size_t> result() const;

 private:
  double p_avg_;
  double tol_;
  double sum_ = 0.0;
  std::size_t n_ = 0;
  std::size_t last_miss_ = 0;  // 1-based prefix length, 0 = none
};

}  // namespace wpcn::sim
