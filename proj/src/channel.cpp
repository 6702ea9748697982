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

#include "wpcn/channel.hpp"

#include <cmath>
#include <numbers>
#include <string>

#include "wpcn/error.hpp"
#include "wpcn/simd/kernels.hpp"

namespace wpcn {
namespace {

// Entries are CN(0, variance): independent real and imaginary parts with
// variance/2 each.
void fill_gaussian(CMatrix& m, double variance, Rng& rng) {
  std::normal_distribution<double> normal(0.0, std::sqrt(variance / 2.0));
  for (auto& v : m.data()) {
    const double re = normal(rng);
    const double im = normal(rng);
    v = {re, im};
  }
}

}  // namespace

double distance(Point2 a, Point2 b) { return std::hypot(a.x - b.x, a.y - b.y); }

void Topology::validate() const {
  if (receivers.empty()) throw Error(ErrorCode::kConfigError, "topology needs at least one receiver");
  if (rx_antennas < 1) throw Error(ErrorCode::kConfigError, "rx_antennas must be >= 1");
  if (tx_antennas <= rx_antennas) {
    throw Error(ErrorCode::kConfigError, "tx_antennas (" + std::to_string(tx_antennas) +
                                             ") must exceed rx_antennas (" +
                                             std::to_string(rx_antennas) + ")");
  }
  if (!(eta >= 0.0 && eta < 1.0)) throw Error(ErrorCode::kConfigError, "eta must be in [0,1)");
  if (!(carrier_hz > 0.0)) throw Error(ErrorCode::kConfigError, "carrier frequency must be positive");
  if (!(noise_variance > 0.0)) throw Error(ErrorCode::kConfigError, "noise variance must be positive");
  if (!std::isfinite(pathloss_exponent) || pathloss_exponent < 0.0) {
    throw Error(ErrorCode::kConfigError, "path-loss exponent must be finite and nonnegative");
  }
  for (std::size_t i = 0; i < receivers.size(); ++i) {
    if (!(receiver_distance(i) > 0.0)) {
      throw Error(ErrorCode::kNonPositiveDistance,
                  "receiver " + std::to_string(i) + " coincides with the E-AP");
    }
  }
}

double reference_gain(double carrier_hz) {
  const double r = kSpeedOfLight / (4.0 * std::numbers::pi * carrier_hz);
  return r * r;
}

double path_loss(double distance_m, const Topology& topo) {
  if (!(distance_m > 0.0)) {
    throw Error(ErrorCode::kNonPositiveDistance, "distance " + std::to_string(distance_m));
  }
  return reference_gain(topo.carrier_hz) * std::pow(distance_m, -topo.pathloss_exponent);
}

std::vector<double> receiver_gains(const Topology& topo) {
  std::vector<double> g(topo.num_receivers());
  for (std::size_t i = 0; i < g.size(); ++i) g[i] = path_loss(topo.receiver_distance(i), topo);
  return g;
}

CMatrix reciprocal_uplink(const CMatrix& downlink, double noise_variance) {
  CMatrix up = downlink.adjoint();
  up *= 1.0 / std::sqrt(noise_variance);
  return up;
}

SlotCSI sample_slot(const Topology& topo, Rng& rng) {
  topo.validate();
  const auto gains = receiver_gains(topo);
  const std::size_t m = topo.rx_antennas;
  const std::size_t n = topo.tx_antennas;
  SlotCSI csi;
  for (std::size_t i = 0; i < gains.size(); ++i) {
    CMatrix h(m, n);
    fill_gaussian(h, gains[i], rng);
    CMatrix up;
    if (topo.uplink == UplinkModel::kIndependent) {
      up = CMatrix(n, m);
      fill_gaussian(up, gains[i] / topo.noise_variance, rng);
    } else {
      up = reciprocal_uplink(h, topo.noise_variance);
    }
    csi.W.push_back(gram_cols(h));
    csi.H.push_back(std::move(h));
    csi.H_up.push_back(std::move(up));
  }
  return csi;
}

double received_power(const CMatrix& w, std::span<const cplx> x, double eta) {
  if (!w.is_square() || w.cols() != x.size()) {
    throw Error(ErrorCode::kDimensionMismatch,
                "W is " + std::to_string(w.rows()) + "x" + std::to_string(w.cols()) +
                    ", x has " + std::to_string(x.size()) + " entries");
  }
  return eta * quadratic_form(w, x);
}

ChannelSampler::ChannelSampler(const Topology& topo) : topo_(topo) {
  topo_.validate();
  gains_ = receiver_gains(topo_);
  const std::size_t m = topo_.rx_antennas;
  const std::size_t n = topo_.tx_antennas;
  h_.assign(gains_.size(), CMatrix(m, n));
  if (topo_.uplink == UplinkModel::kIndependent) h_up_.assign(gains_.size(), CMatrix(n, m));
  stacked_ = CMatrix(gains_.size() * m, n);
}

void ChannelSampler::sample(Rng& rng) {
  const std::size_t m = topo_.rx_antennas;
  for (std::size_t i = 0; i < gains_.size(); ++i) {
    fill_gaussian(h_[i], gains_[i], rng);
    if (topo_.uplink == UplinkModel::kIndependent) {
      fill_gaussian(h_up_[i], gains_[i] / topo_.noise_variance, rng);
    }
    const auto src = h_[i].data();
    std::copy(src.begin(), src.end(), stacked_.row(i * m).begin());
  }
}

CMatrix ChannelSampler::uplink(std::size_t i) const {
  if (topo_.uplink == UplinkModel::kIndependent) return h_up_.at(i);
  return reciprocal_uplink(h_.at(i), topo_.noise_variance);
}

}  // namespace wpcn
