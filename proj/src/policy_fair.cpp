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

#include "wpcn/policy_fair.hpp"

#include <algorithm>
#include <cctype>
#include <cmath>
#include <limits>
#include <numeric>
#include <string>

#include "wpcn/error.hpp"

namespace wpcn {
namespace {

void require_same_size(std::size_t a, std::size_t b, const char* what) {
  if (a != b) {
    throw Error(ErrorCode::kDimensionMismatch,
                std::string(what) + ": " + std::to_string(a) + " vs " + std::to_string(b));
  }
}

std::string lower(std::string_view s) {
  std::string out(s);
  std::transform(out.begin(), out.end(), out.begin(),
                 [](unsigned char c) { return static_cast<char>(std::tolower(c)); });
  return out;
}

}  // namespace

Utility Utility::parse(std::string_view name, double alpha) {
  const std::string n = lower(name);
  Utility u;
  if (n == "sum" || n == "none" || n == "no-fairness") {
    u = sum();
  } else if (n == "pf" || n == "proportional" || n == "proportional-fair") {
    u = proportional_fair();
  } else if (n == "mmf" || n == "maxmin" || n == "max-min") {
    u = max_min();
  } else if (n == "alpha" || n == "alpha-fair") {
    u = alpha_fair(alpha);
  } else {
    throw Error(ErrorCode::kInvalidUtility, "unknown utility '" + std::string(name) + "'");
  }
  u.validate();
  return u;
}

std::string Utility::name() const {
  switch (kind) {
    case UtilityKind::kSum: return "sum";
    case UtilityKind::kProportionalFair: return "pf";
    case UtilityKind::kMaxMin: return "mmf";
    case UtilityKind::kAlphaFair: return "alpha";
  }
  return "unknown";
}

void Utility::validate() const {
  if (kind == UtilityKind::kAlphaFair && !(alpha > 0.0 && std::isfinite(alpha))) {
    throw Error(ErrorCode::kInvalidUtility, "alpha-fair utility needs alpha > 0");
  }
}

double Utility::value(std::span<const double> gamma) const {
  constexpr double kNegInf = -std::numeric_limits<double>::infinity();
  switch (kind) {
    case UtilityKind::kSum:
      return std::accumulate(gamma.begin(), gamma.end(), 0.0);
    case UtilityKind::kMaxMin:
      return gamma.empty() ? 0.0 : *std::min_element(gamma.begin(), gamma.end());
    case UtilityKind::kProportionalFair: {
      double s = 0.0;
      for (double x : gamma) s += x > 0.0 ? std::log(x) : kNegInf;
      return s;
    }
    case UtilityKind::kAlphaFair: {
      if (alpha == 1.0) return proportional_fair().value(gamma);
      double s = 0.0;
      for (double x : gamma) {
        if (x <= 0.0) {
          if (alpha > 1.0) return kNegInf;
          continue;
        }
        s += std::pow(x, 1.0 - alpha) / (1.0 - alpha);
      }
      return s;
    }
  }
  throw Error(ErrorCode::kInvalidUtility, "unknown utility kind");
}

void FairConfig::validate() const {
  if (!(p_avg > 0.0 && p_avg <= p_peak)) {
    throw Error(ErrorCode::kConfigError, "need 0 < p_avg <= p_peak");
  }
  if (!(p_min >= 0.0)) throw Error(ErrorCode::kConfigError, "p_min must be nonnegative");
  if (!(v > 0.0)) throw Error(ErrorCode::kConfigError, "V must be positive");
  utility.validate();
}

CMatrix weighted_channel(std::span<const CMatrix> grams, const FairQueueSet& q) {
  require_same_size(grams.size(), q.size(), "weighted_channel receivers");
  if (grams.empty()) throw Error(ErrorCode::kDimensionMismatch, "weighted_channel of nothing");
  const std::size_t n = grams.front().rows();
  CMatrix out(n, n);
  for (std::size_t i = 0; i < grams.size(); ++i) {
    if (grams[i].rows() != n || grams[i].cols() != n) {
      throw Error(ErrorCode::kDimensionMismatch, "Gram matrices differ in size");
    }
    const double w = q.min_power[i] + q.fairness[i];
    if (w == 0.0) continue;
    for (std::size_t k = 0; k < out.size(); ++k) out.data()[k] += w * grams[i].data()[k];
  }
  for (std::size_t d = 0; d < n; ++d) out(d, d) -= q.avg_power;
  return out;
}

BeamDecision qf_decide(const TopEigen& top, double p_peak) {
  if (top.value >= 0.0) return peak_beam(top.vector, p_peak);
  return silent_beam();
}

BeamDecision qf_decide(const CMatrix& w_prime, double p_peak) {
  return qf_decide(top_eigen(w_prime), p_peak);
}

std::vector<double> solve_gamma(const Utility& utility, double v, std::span<const double> g,
                                double upper) {
  utility.validate();
  if (!(upper > 0.0)) throw Error(ErrorCode::kInvalidArgument, "gamma upper bound must be > 0");
  if (!(v > 0.0)) throw Error(ErrorCode::kInvalidArgument, "V must be positive");
  for (double gi : g) {
    if (!(gi >= 0.0)) throw Error(ErrorCode::kInvalidArgument, "queue backlogs must be >= 0");
  }
  std::vector<double> gamma(g.size(), 0.0);
  switch (utility.kind) {
    case UtilityKind::kSum:
      // linear per coordinate: slope G_i − V; ties go to the upper end
      for (std::size_t i = 0; i < g.size(); ++i) gamma[i] = g[i] <= v ? upper : 0.0;
      break;
    case UtilityKind::kProportionalFair:
      for (std::size_t i = 0; i < g.size(); ++i) {
        gamma[i] = g[i] > 0.0 ? std::min(v / g[i], upper) : upper;
      }
      break;
    case UtilityKind::kMaxMin: {
      // coordinates above the minimum cost G_i and add nothing, so all equal a
      // common level t; the objective (ΣG − V)·t is linear in t
      const double total = std::accumulate(g.begin(), g.end(), 0.0);
      std::fill(gamma.begin(), gamma.end(), total <= v ? upper : 0.0);
      break;
    }
    case UtilityKind::kAlphaFair: {
      const double a = utility.alpha;
      for (std::size_t i = 0; i < g.size(); ++i) {
        gamma[i] = g[i] > 0.0 ? std::min(std::pow(v / g[i], 1.0 / a), upper) : upper;
      }
      break;
    }
  }
  return gamma;
}

double gamma_objective(const Utility& utility, double v, std::span<const double> g,
                       std::span<const double> gamma) {
  require_same_size(g.size(), gamma.size(), "gamma_objective");
  double linear = 0.0;
  for (std::size_t i = 0; i < g.size(); ++i) linear += g[i] * gamma[i];
  return -v * utility.value(gamma) + linear;
}

std::vector<double> solve_gamma_generic(const GenericUtility& utility, double v,
                                        std::span<const double> g, double upper) {
  if (!utility.value || !utility.gradient) {
    throw Error(ErrorCode::kInvalidUtility, "generic utility needs value and gradient");
  }
  if (!(upper > 0.0)) throw Error(ErrorCode::kInvalidArgument, "gamma upper bound must be > 0");
  const std::size_t k = g.size();
  auto objective = [&](std::span<const double> x) {
    double s = 0.0;
    for (std::size_t i = 0; i < k; ++i) s += g[i] * x[i];
    return -v * utility.value(x) + s;
  };
  std::vector<double> x(k, 0.5 * upper), grad(k), trial(k);
  double fx = objective(x);
  double step = upper;
  for (int it = 0; it < 10000; ++it) {
    utility.gradient(x, grad);
    for (std::size_t i = 0; i < k; ++i) grad[i] = -v * grad[i] + g[i];
    // backtracking on the projected step
    double ft = fx;
    bool accepted = false;
    for (int bt = 0; bt < 60; ++bt) {
      double decrease = 0.0;
      for (std::size_t i = 0; i < k; ++i) {
        trial[i] = std::clamp(x[i] - step * grad[i], 0.0, upper);
        decrease += grad[i] * (x[i] - trial[i]);
      }
      ft = objective(trial);
      if (std::isfinite(ft) && ft <= fx - 0.5 * decrease) {
        accepted = true;
        break;
      }
      step *= 0.5;
    }
    if (!accepted) break;
    const double change = fx - ft;
    x.swap(trial);
    fx = ft;
    step *= 2.0;
    if (change <= 1e-9 * std::max(1.0, std::abs(fx))) break;
  }
  return x;
}

FairQueueSet update_fair_queues(const FairQueueSet& q, std::span<const double> gamma,
                                std::span<const double> received, double tx_power,
                                const FairConfig& cfg) {
  require_same_size(gamma.size(), q.size(), "gamma");
  require_same_size(received.size(), q.size(), "received power");
  FairQueueSet next(q.size());
  for (std::size_t i = 0; i < q.size(); ++i) {
    next.fairness[i] = std::max(q.fairness[i] + gamma[i] - received[i], 0.0);
    next.min_power[i] = std::max(q.min_power[i] + cfg.p_min - received[i], 0.0);
  }
  next.avg_power = std::max(q.avg_power + tx_power - cfg.p_avg, 0.0);
  return next;
}

}  // namespace wpcn
