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

#include "wpcn/numerics/cmatrix.hpp"
#include "wpcn/rng.hpp"

namespace wpcn {

inline constexpr double kSpeedOfLight = 299792458.0;  // m/s

struct Point2 {
  double x = 0.0;
  double y = 0.0;
  friend bool operator==(const Point2&, const Point2&) = default;
};

double distance(Point2 a, Point2 b);

enum class UplinkModel {
  kReciprocal,   // H'_i = H_iᴴ / σ
  kIndependent,  // fresh CN(0, g_i/σ²) draw, N×M
};

// Network geometry and radio parameters. tx_antennas is the E-AP array size
// (N), rx_antennas the per-receiver array size (M).
struct Topology {
  Point2 eap{};
  std::vector<Point2> receivers;
  std::size_t tx_antennas = 30;
  std::size_t rx_antennas = 4;
  double carrier_hz = 2.4e9;
  double pathloss_exponent = 3.0;
  double noise_variance = 1e-13;  // watts
  double eta = 0.5;
  UplinkModel uplink = UplinkModel::kReciprocal;

  std::size_t num_receivers() const noexcept { return receivers.size(); }
  double receiver_distance(std::size_t i) const { return distance(eap, receivers.at(i)); }
  // Throws ConfigError (or NonPositiveDistance) when the invariants fail.
  void validate() const;
};

// Free-space gain at 1 m, (c / (4π·fc))².
double reference_gain(double carrier_hz);

// Linear power gain G0·d^(-exponent).
double path_loss(double distance_m, const Topology& topo);

std::vector<double> receiver_gains(const Topology& topo);

// One slot of CSI. H[i] is M×N (downlink), H_up[i] is N×M, W[i] = H[i]ᴴ·H[i].
struct SlotCSI {
  std::vector<CMatrix> H;
  std::vector<CMatrix> H_up;
  std::vector<CMatrix> W;
};

SlotCSI sample_slot(const Topology& topo, Rng& rng);

CMatrix reciprocal_uplink(const CMatrix& downlink, double noise_variance);

// η·xᴴ·W·x
double received_power(const CMatrix& w, std::span<const cplx> x, double eta);

// Hot-path sampler: draws exactly the same variates in the same order as
// sample_slot, but skips the Gram matrices. Uplink matrices are only drawn
// (and only needed) for UplinkModel::kIndependent.
class ChannelSampler {
 public:
  explicit ChannelSampler(const Topology& topo);

  void sample(Rng& rng);

  const Topology& topology() const noexcept { return topo_; }
  std::span<const CMatrix> downlink() const noexcept { return h_; }
  // Uplink for receiver i (reciprocal matrices are built on demand).
  CMatrix uplink(std::size_t i) const;
  // All downlinks stacked into one (K·M)×N matrix, refreshed by sample().
  const CMatrix& stacked() const noexcept { return stacked_; }

 private:
  Topology topo_;
  std::vector<double> gains_;
  std::vector<CMatrix> h_;
  std::vector<CMatrix> h_up_;
  CMatrix stacked_;
};

}  // namespace wpcn
