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

#include "wpcn/policy_wpcn.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <numbers>
#include <string>

#include "wpcn/error.hpp"
#include "wpcn/numerics/special.hpp"

namespace wpcn {
namespace {

void require_size(std::size_t got, std::size_t want, const char* what) {
  if (got != want) {
    throw Error(ErrorCode::kDimensionMismatch,
                std::string(what) + ": " + std::to_string(got) + " vs " + std::to_string(want));
  }
}

ErCandidate infeasible(ErCandidate c) {
  c.feasible = false;
  c.tau0 = 0.0;
  c.tau_u = 1.0;
  c.throughput = 0.0;
  c.objective = 0.0;
  c.covariance = CMatrix();
  return c;
}

// Water level solving −log δ + α − β·δ = 0 on the principal branch; returns
// NaN when β·e^α < −1/e (no real solution).
double water_level(double alpha, double beta) {
  if (beta > 0.0) return lambert_w0_of_exp(std::log(beta) + alpha) / beta;
  if (beta == 0.0) return std::exp(alpha);
  if (std::log(-beta) + alpha > -1.0) return std::numeric_limits<double>::quiet_NaN();
  return lambert_w0(beta * std::exp(alpha)) / beta;
}

}  // namespace

double WpcnConfig::d_max() const {
  return static_cast<double>(rx_antennas) * std::log2(1.0 + p_peak / noise_variance);
}

void WpcnConfig::validate() const {
  if (!(p_avg > 0.0 && p_avg <= p_peak)) {
    throw Error(ErrorCode::kConfigError, "need 0 < p_avg <= p_peak");
  }
  if (!(d_min >= 0.0)) throw Error(ErrorCode::kConfigError, "d_min must be nonnegative");
  if (!(v > 0.0)) throw Error(ErrorCode::kConfigError, "V must be positive");
  if (!(noise_variance > 0.0)) throw Error(ErrorCode::kConfigError, "noise variance must be > 0");
  if (rx_antennas < 1) throw Error(ErrorCode::kConfigError, "rx_antennas must be >= 1");
  utility.validate();
}

WpcnQueueSet WpcnQueueSet::initial(std::size_t k, double d_min) {
  WpcnQueueSet q;
  q.fairness.assign(k, d_min);
  q.min_rate.assign(k, d_min);
  q.avg_power = 0.0;
  return q;
}

ErCandidate er_candidate(std::size_t index, const CMatrix& h_up, double lambda_w,
                         const WpcnQueueSet& q, const WpcnConfig& cfg) {
  if (index >= q.size()) throw Error(ErrorCode::kDimensionMismatch, "receiver index out of range");
  ErCandidate c;
  c.index = index;
  c.lambda_w = lambda_w;
  c.weight = q.fairness[index] + q.min_rate[index];
  if (!(c.weight > 0.0)) return infeasible(std::move(c));

  CMatrix scaled = h_up;
  scaled *= std::sqrt(c.weight);
  SvdResult s = svd(scaled);
  if (s.rank == 0) return infeasible(std::move(c));
  c.thetas = s.singulars;

  const double r = static_cast<double>(s.rank);
  double mean_log = 0.0;
  double inv_sum = 0.0;
  for (double t : c.thetas) {
    mean_log += std::log(t * t);
    inv_sum += 1.0 / (t * t);
  }
  mean_log /= r;
  c.alpha = mean_log + q.avg_power * cfg.p_peak / (r * c.weight) - 1.0;
  c.beta = (lambda_w * cfg.p_peak / c.weight - inv_sum) / r;

  c.delta = water_level(c.alpha, c.beta);
  if (!(c.delta > 0.0) || !std::isfinite(c.delta)) return infeasible(std::move(c));

  c.psi = waterfill_alloc(c.thetas, c.delta);
  double psi_sum = 0.0;
  for (double p : c.psi) psi_sum += p;
  if (!(psi_sum > 0.0)) return infeasible(std::move(c));

  c.omega = c.delta * cfg.p_peak * lambda_w / (c.weight * psi_sum);
  if (!(c.omega > 0.0) || !std::isfinite(c.omega)) return infeasible(std::move(c));

  // S = (G+Z)/δ · V·diag(ψ)·Vᴴ
  const std::size_t m = h_up.cols();
  c.covariance = CMatrix(m, m);
  const double scale = c.weight / c.delta;
  for (std::size_t j = 0; j < s.rank; ++j) {
    if (c.psi[j] == 0.0) continue;
    const double w = scale * c.psi[j];
    for (std::size_t a = 0; a < m; ++a) {
      const cplx va = w * s.right(a, j);
      for (std::size_t b = 0; b < m; ++b) c.covariance(a, b) += va * std::conj(s.right(b, j));
    }
  }
  for (std::size_t a = 0; a < m; ++a) c.covariance(a, a) = c.covariance(a, a).real();

  c.tau0 = 1.0 / (1.0 + c.omega);
  c.tau_u = c.omega / (1.0 + c.omega);
  c.feasible = true;
  c.throughput = throughput(h_up, c.covariance, c.tau_u);
  c.objective = c.weight * c.throughput;
  return c;
}

ErCandidate er_candidate(std::size_t index, const CMatrix& h_up, const CMatrix& w,
                         const WpcnQueueSet& q, const WpcnConfig& cfg) {
  if (!w.is_square() || w.rows() != h_up.rows()) {
    throw Error(ErrorCode::kDimensionMismatch, "W_i must be N×N with N = rows of H'_i");
  }
  return er_candidate(index, h_up, std::max(top_eigen(w).value, 0.0), q, cfg);
}

double candidate_kkt_residual(const ErCandidate& c, double z_ap, double p_peak) {
  if (!c.feasible || c.thetas.empty()) return 0.0;
  const double r = static_cast<double>(c.thetas.size());
  double mean_log = 0.0, mean_inv = 0.0;
  for (double t : c.thetas) {
    mean_log += std::log(t * t) / r;
    mean_inv += 1.0 / (t * t) / r;
  }
  const double zeta = (c.delta * c.lambda_w - z_ap) * p_peak;
  return -std::log(c.delta) + mean_log - 1.0 + c.delta * mean_inv - zeta / (r * c.weight);
}

std::optional<std::size_t> select_candidate(std::span<const ErCandidate> candidates) {
  std::optional<std::size_t> best;
  double best_value = 0.0;
  for (std::size_t i = 0; i < candidates.size(); ++i) {
    if (candidates[i].objective > best_value) {
      best_value = candidates[i].objective;
      best = i;
    }
  }
  return best;
}

CVector build_downlink_beam(const CMatrix& w_chosen, double p_peak) {
  return peak_beam(top_eigen(w_chosen).vector, p_peak).x;
}

double throughput(const CMatrix& h_up, const CMatrix& s, double tau_u) {
  if (!(tau_u >= 0.0 && tau_u <= 1.0)) {
    throw Error(ErrorCode::kInvalidArgument, "tau_u must lie in [0,1]");
  }
  if (!s.is_square() || s.rows() != h_up.cols()) {
    throw Error(ErrorCode::kDimensionMismatch, "covariance must be M×M with M = cols of H'");
  }
  if (s.empty() || tau_u == 0.0) return 0.0;
  const EigResult se = hermitian_eig(s);
  const double scale = std::max(1.0, std::abs(se.values.front()));
  if (se.values.back() < -1e-12 * scale) {
    throw Error(ErrorCode::kNonPsdCovariance,
                "smallest eigenvalue " + std::to_string(se.values.back()));
  }
  // det(I + H'·S·H'ᴴ) = det(I + S½·H'ᴴH'·S½)
  const std::size_t m = s.rows();
  CMatrix root(m, m);
  for (std::size_t k = 0; k < m; ++k) {
    const double sq = std::sqrt(std::max(se.values[k], 0.0));
    if (sq == 0.0) continue;
    for (std::size_t a = 0; a < m; ++a) {
      const cplx va = sq * se.vectors(a, k);
      for (std::size_t b = 0; b < m; ++b) root(a, b) += va * std::conj(se.vectors(b, k));
    }
  }
  for (std::size_t a = 0; a < m; ++a) root(a, a) = root(a, a).real();
  CMatrix inner = root * gram_cols(h_up) * root;
  for (std::size_t a = 0; a < m; ++a) {
    inner(a, a) = inner(a, a).real();
    for (std::size_t b = a + 1; b < m; ++b) {
      const cplx avg = 0.5 * (inner(a, b) + std::conj(inner(b, a)));
      inner(a, b) = avg;
      inner(b, a) = std::conj(avg);
    }
  }
  double bits = 0.0;
  for (double kappa : hermitian_eig(inner).values) bits += std::log2(1.0 + std::max(kappa, 0.0));
  return tau_u * bits;
}

std::vector<double> solve_gamma_it(const Utility& utility, double v, std::span<const double> g,
                                   double d_max) {
  return solve_gamma(utility, v, g, d_max);
}

WpcnQueueSet update_wpcn_queues(const WpcnQueueSet& q, std::span<const double> gamma,
                                std::span<const double> rates, double tau0, double tx_power,
                                const WpcnConfig& cfg) {
  require_size(gamma.size(), q.size(), "gamma");
  require_size(rates.size(), q.size(), "rates");
  WpcnQueueSet next;
  next.fairness.resize(q.size());
  next.min_rate.resize(q.size());
  for (std::size_t i = 0; i < q.size(); ++i) {
    next.fairness[i] = std::max(q.fairness[i] + gamma[i] - rates[i], 0.0);
    next.min_rate[i] = std::max(q.min_rate[i] + cfg.d_min - rates[i], 0.0);
  }
  next.avg_power = std::max(q.avg_power + tau0 * tx_power - cfg.p_avg, 0.0);
  return next;
}

}  // namespace wpcn
