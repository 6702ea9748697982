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

#include "wpcn/sim/engine.hpp"

#include <algorithm>
#include <cmath>
#include <memory>
#include <numeric>
#include <string>

#include "wpcn/error.hpp"
#include "wpcn/numerics/linalg.hpp"
#include "wpcn/policy_fair.hpp"
#include "wpcn/policy_wpcn.hpp"
#include "wpcn/policy_wpt.hpp"
#include "wpcn/rng.hpp"
#include "wpcn/simd/kernels.hpp"

namespace wpcn::sim {

void Trace::reserve(std::size_t slots) {
  transmit.reserve(slots);
  tx_power.reserve(slots);
  tau0.reserve(slots);
  z_ap.reserve(slots);
  received.reserve(slots * receivers);
  rate.reserve(slots * receivers);
  z.reserve(slots * receivers);
  g.reserve(slots * receivers);
}

void ConvergenceTracker::push(double tx) {
  sum_ += tx;
  ++n_;
  const double avg = sum_ / static_cast<double>(n_);
  if (std::abs(avg - p_avg_) > tol_ * p_avg_) last_miss_ = n_;
}

std::optional<std::size_t> ConvergenceTracker::result() const {
  if (n_ == 0) throw Error(ErrorCode::kEmptyTrace, "no slots recorded");
  if (last_miss_ == n_) return std::nullopt;
  return last_miss_ + 1;
}

std::optional<std::size_t> convergence_time(std::span<const double> tx, double p_avg,
                                            double tol_fraction) {
  if (tx.empty()) throw Error(ErrorCode::kEmptyTrace, "empty tx trace");
  ConvergenceTracker t(p_avg, tol_fraction);
  for (double v : tx) t.push(v);
  return t.result();
}

namespace {

// Per-slot quantities shared by all policies, computed on first use.
class SlotContext {
 public:
  explicit SlotContext(const ChannelSampler& s)
      : s_(s),
        k_(s.topology().num_receivers()),
        rx_top_(k_),
        rx_top_ready_(k_, 0),
        uplink_(k_),
        uplink_ready_(k_, 0),
        stacked_gain_(k_) {}

  void reset() {
    stacked_ready_ = false;
    std::fill(rx_top_ready_.begin(), rx_top_ready_.end(), 0);
    std::fill(uplink_ready_.begin(), uplink_ready_.end(), 0);
  }

  const ChannelSampler& sampler() const { return s_; }
  std::size_t receivers() const { return k_; }

  // Top eigenpair of Σ_i W_i and ‖H_i u‖² for its eigenvector.
  const TopEigen& stacked_top() {
    if (!stacked_ready_) {
      stacked_top_ = gram_top_eigen(s_.stacked());
      for (std::size_t i = 0; i < k_; ++i) stacked_gain_[i] = beam_gain(i, stacked_top_.vector);
      stacked_ready_ = true;
    }
    return stacked_top_;
  }
  double stacked_gain(std::size_t i) {
    stacked_top();
    return stacked_gain_[i];
  }

  const TopEigen& rx_top(std::size_t i) {
    if (!rx_top_ready_[i]) {
      rx_top_[i] = gram_top_eigen(s_.downlink()[i]);
      rx_top_ready_[i] = 1;
    }
    return rx_top_[i];
  }

  const CMatrix& uplink(std::size_t i) {
    if (!uplink_ready_[i]) {
      uplink_[i] = s_.uplink(i);
      uplink_ready_[i] = 1;
    }
    return uplink_[i];
  }

  // ‖H_i x‖² = xᴴW_i x
  double beam_gain(std::size_t i, std::span<const cplx> x) const {
    const CMatrix& h = s_.downlink()[i];
    double total = 0.0;
    for (std::size_t r = 0; r < h.rows(); ++r) total += std::norm(simd::dotu(h.row(r), x));
    return total;
  }

 private:
  const ChannelSampler& s_;
  std::size_t k_;
  bool stacked_ready_ = false;
  TopEigen stacked_top_;
  std::vector<TopEigen> rx_top_;
  std::vector<std::uint8_t> rx_top_ready_;
  std::vector<CMatrix> uplink_;
  std::vector<std::uint8_t> uplink_ready_;
  std::vector<double> stacked_gain_;
};

struct SlotOutcome {
  bool transmit = false;
  double tx_power = 0.0;
  double tau0 = 1.0;
};

class PolicyRunner {
 public:
  PolicyRunner(const PolicyParams& p, const Topology& topo, const RunOptions& opts,
               double threshold)
      : p_(p),
        k_(topo.num_receivers()),
        eta_(topo.eta),
        threshold_(threshold),
        tracker_(p.p_avg, opts.convergence_tolerance),
        raw_(k_, 0.0),
        rate_(k_, 0.0),
        sum_received_(k_, 0.0),
        sum_rate_(k_, 0.0) {
    p_.validate();
    wpt_cfg_ = WptConfig{p.p_avg, p.p_peak, p.v, topo.eta};
    fair_cfg_ = FairConfig{p.p_avg, p.p_peak, p.p_min, p.v, topo.eta, p.utility};
    wpcn_cfg_.p_avg = p.p_avg;
    wpcn_cfg_.p_peak = p.p_peak;
    wpcn_cfg_.d_min = p.d_min;
    wpcn_cfg_.v = p.v;
    wpcn_cfg_.noise_variance = topo.noise_variance;
    wpcn_cfg_.rx_antennas = topo.rx_antennas;
    wpcn_cfg_.utility = p.utility;
    fair_ = FairQueueSet(k_);
    wpcn_ = WpcnQueueSet::initial(k_, p.d_min);
    if (p.kind == PolicyKind::kQgfIt) {
      wpcn_cfg_.validate();
      candidates_.resize(k_);
      if (topo.tx_antennas < 4 * k_ * topo.rx_antennas) {
        warnings_.push_back("N = " + std::to_string(topo.tx_antennas) + " < 4·K·M = " +
                            std::to_string(4 * k_ * topo.rx_antennas) +
                            "; single-receiver beams may be suboptimal");
      }
    }
    if (p.kind == PolicyKind::kQfWpt) fair_cfg_.validate();
    if (opts.record_trace) {
      trace_.emplace(k_);
      trace_->reserve(opts.horizon);
    }
  }

  void step(SlotContext& ctx) {
    std::fill(raw_.begin(), raw_.end(), 0.0);
    std::fill(rate_.begin(), rate_.end(), 0.0);
    SlotOutcome out;
    switch (p_.kind) {
      case PolicyKind::kOptimal:
      case PolicyKind::kMdpp: out = step_wpt(ctx); break;
      case PolicyKind::kQfWpt: out = step_fair(ctx); break;
      case PolicyKind::kQgfIt: out = step_wpcn(ctx); break;
    }
    check_common(out);
    const double spent = out.tau0 * out.tx_power;
    sum_tx_ += spent;
    tracker_.push(spent);
    if (out.transmit) ++tx_slots_;
    for (std::size_t i = 0; i < k_; ++i) {
      sum_received_[i] += out.tau0 * eta_ * raw_[i];
      sum_rate_[i] += rate_[i];
    }
    if (trace_) record(out);
  }

  RunMetrics finish(std::uint64_t seed) {
    RunMetrics m;
    m.policy = p_.display_name();
    m.params = p_;
    m.horizon = tracker_.count();
    m.seed = seed;
    const double l = static_cast<double>(m.horizon);
    m.avg_received.resize(k_);
    m.avg_throughput.resize(k_);
    for (std::size_t i = 0; i < k_; ++i) {
      m.avg_received[i] = sum_received_[i] / l;
      m.avg_throughput[i] = sum_rate_[i] / l;
    }
    m.total_received = std::accumulate(m.avg_received.begin(), m.avg_received.end(), 0.0);
    m.avg_tx_power = sum_tx_ / l;
    m.transmit_slots = tx_slots_;
    m.final_z_ap = z_ap();
    m.final_z = z_vec();
    m.final_g = g_vec();
    m.convergence_time = tracker_.result();
    m.threshold = threshold_;
    const double b_wpt = 0.5 * p_.p_peak * p_.p_peak;
    if (p_.kind == PolicyKind::kMdpp) m.gap_bound = b_wpt / p_.v;
    if (p_.kind == PolicyKind::kQfWpt) m.gap_bound = static_cast<double>(2 * k_ + 1) * b_wpt / p_.v;
    m.invariants = inv_;
    m.warnings = warnings_;
    m.trace = std::move(trace_);
    return m;
  }

 private:
  SlotOutcome step_wpt(SlotContext& ctx) {
    const TopEigen& top = ctx.stacked_top();
    const BeamDecision d = p_.kind == PolicyKind::kOptimal
                               ? optimal_decide(top, threshold_, p_.p_peak)
                               : mdpp_decide(top, wpt_, wpt_cfg_);
    if (d.transmit) {
      for (std::size_t i = 0; i < k_; ++i) raw_[i] = d.tx_power * ctx.stacked_gain(i);
    }
    wpt_ = update_queue(wpt_, d.tx_power, p_.p_avg);
    check_two_level(d.tx_power);
    return {d.transmit, d.tx_power, 1.0};
  }

  SlotOutcome step_fair(SlotContext& ctx) {
    const CMatrix& stacked = ctx.sampler().stacked();
    if (factor_.rows() != stacked.rows() || factor_.cols() != stacked.cols()) {
      factor_ = CMatrix(stacked.rows(), stacked.cols());
    }
    const std::size_t m = stacked.rows() / std::max<std::size_t>(k_, 1);
    for (std::size_t i = 0; i < k_; ++i) {
      const double w = std::sqrt(fair_.fairness[i] + fair_.min_power[i]);
      for (std::size_t r = i * m; r < (i + 1) * m; ++r) {
        auto src = stacked.row(r);
        auto dst = factor_.row(r);
        for (std::size_t c = 0; c < src.size(); ++c) dst[c] = w * src[c];
      }
    }
    TopEigen top = gram_top_eigen(factor_);
    top.value -= fair_.avg_power;
    const BeamDecision d = qf_decide(top, p_.p_peak);
    if (d.transmit) {
      for (std::size_t i = 0; i < k_; ++i) raw_[i] = ctx.beam_gain(i, d.x);
    }
    const auto gamma = solve_gamma(p_.utility, p_.v, fair_.fairness,
                                   p_.gamma_upper > 0.0 ? p_.gamma_upper : p_.p_peak);
    fair_ = update_fair_queues(fair_, gamma, raw_, d.tx_power, fair_cfg_);
    check_two_level(d.tx_power);
    return {d.transmit, d.tx_power, 1.0};
  }

  SlotOutcome step_wpcn(SlotContext& ctx) {
    for (std::size_t i = 0; i < k_; ++i) {
      candidates_[i] = er_candidate(i, ctx.uplink(i), ctx.rx_top(i).value, wpcn_, wpcn_cfg_);
      if (candidates_[i].feasible) {
        const double res =
            std::abs(candidate_kkt_residual(candidates_[i], wpcn_.avg_power, p_.p_peak));
        ++inv_.kkt_checks;
        inv_.max_kkt_residual = std::max(inv_.max_kkt_residual, res);
        if (!(res <= kKktTolerance)) ++inv_.kkt;
      }
    }
    SlotOutcome out{false, 0.0, 0.0};
    if (const auto pick = select_candidate(candidates_)) {
      const ErCandidate& c = candidates_[*pick];
      const BeamDecision d = peak_beam(ctx.rx_top(*pick).vector, p_.p_peak);
      out = {true, d.tx_power, c.tau0};
      for (std::size_t i = 0; i < k_; ++i) raw_[i] = ctx.beam_gain(i, d.x);
      rate_[*pick] = c.throughput;
      if (std::abs(c.tau0 + c.tau_u - 1.0) > 1e-12) ++inv_.tau_sum;
      const double spent = c.tau_u * c.covariance.trace_real();
      const double harvested = c.tau0 * raw_[*pick];
      if (spent > harvested + 1e-9 * std::max(1.0, harvested)) ++inv_.causality;
    }
    const auto gamma = solve_gamma_it(p_.utility, p_.v, wpcn_.fairness, wpcn_cfg_.d_max());
    wpcn_ = update_wpcn_queues(wpcn_, gamma, rate_, out.tau0, out.tx_power, wpcn_cfg_);
    return out;
  }

  void check_two_level(double tx) {
    if (!(tx == 0.0 || std::abs(tx - p_.p_peak) <= 1e-9 * p_.p_peak)) ++inv_.two_level;
  }

  void check_common(const SlotOutcome& out) {
    if (!(out.tx_power <= p_.p_peak * (1.0 + 1e-12))) ++inv_.peak;
    const auto bad = [](double v) { return !(v >= 0.0) || !std::isfinite(v); };
    bool neg = bad(z_ap());
    for (double v : z_vec()) neg = neg || bad(v);
    for (double v : g_vec()) neg = neg || bad(v);
    if (neg) ++inv_.queues;
  }

  double z_ap() const {
    switch (p_.kind) {
      case PolicyKind::kOptimal: return 0.0;
      case PolicyKind::kMdpp: return wpt_.backlog;
      case PolicyKind::kQfWpt: return fair_.avg_power;
      case PolicyKind::kQgfIt: return wpcn_.avg_power;
    }
    return 0.0;
  }
  std::vector<double> z_vec() const {
    if (p_.kind == PolicyKind::kQfWpt) return fair_.min_power;
    if (p_.kind == PolicyKind::kQgfIt) return wpcn_.min_rate;
    return std::vector<double>(k_, 0.0);
  }
  std::vector<double> g_vec() const {
    if (p_.kind == PolicyKind::kQfWpt) return fair_.fairness;
    if (p_.kind == PolicyKind::kQgfIt) return wpcn_.fairness;
    return std::vector<double>(k_, 0.0);
  }

  void record(const SlotOutcome& out) {
    Trace& t = *trace_;
    t.transmit.push_back(out.transmit ? 1 : 0);
    t.tx_power.push_back(out.tx_power);
    t.tau0.push_back(out.tau0);
    t.z_ap.push_back(z_ap());
    const auto z = z_vec();
    const auto g = g_vec();
    for (std::size_t i = 0; i < k_; ++i) {
      t.received.push_back(out.tau0 * eta_ * raw_[i]);
      t.rate.push_back(rate_[i]);
      t.z.push_back(z[i]);
      t.g.push_back(g[i]);
    }
  }

  PolicyParams p_;
  std::size_t k_;
  double eta_;
  double threshold_;
  WptConfig wpt_cfg_;
  FairConfig fair_cfg_;
  WpcnConfig wpcn_cfg_;
  WptQueue wpt_;
  FairQueueSet fair_;
  WpcnQueueSet wpcn_;
  CMatrix factor_;
  std::vector<ErCandidate> candidates_;
  ConvergenceTracker tracker_;
  std::vector<double> raw_;
  std::vector<double> rate_;
  std::vector<double> sum_received_;
  std::vector<double> sum_rate_;
  double sum_tx_ = 0.0;
  std::size_t tx_slots_ = 0;
  InvariantReport inv_;
  std::vector<std::string> warnings_;
  std::optional<Trace> trace_;
};

}  // namespace

std::vector<RunMetrics> run_shared(const Topology& topo, std::span<const PolicyParams> policies,
                                   const RunOptions& opts) {
  topo.validate();
  if (opts.horizon < 1) throw Error(ErrorCode::kConfigError, "horizon must be >= 1");
  if (policies.empty()) throw Error(ErrorCode::kConfigError, "no policies given");

  // One set of λ_max samples serves every optimal-policy budget.
  std::vector<double> lambdas;
  const bool need_cal = std::any_of(policies.begin(), policies.end(), [](const PolicyParams& p) {
    return p.kind == PolicyKind::kOptimal;
  });
  if (need_cal) {
    if (opts.calibration_samples < kMinCalibrationSamples) {
      throw Error(ErrorCode::kConfigError, "calibration_samples must be >= " +
                                               std::to_string(kMinCalibrationSamples));
    }
    Rng cal = make_rng(opts.seed, Stream::kCalibration);
    lambdas = sample_lambda_max(topo, opts.calibration_samples, cal);
  }

  std::vector<std::unique_ptr<PolicyRunner>> runners;
  for (const PolicyParams& p : policies) {
    p.validate();
    const double thr = p.kind == PolicyKind::kOptimal
                           ? threshold_from_samples(lambdas, p.p_avg, p.p_peak)
                           : 0.0;
    runners.push_back(std::make_unique<PolicyRunner>(p, topo, opts, thr));
  }

  Rng rng = make_rng(opts.seed, Stream::kChannel);
  ChannelSampler sampler(topo);
  SlotContext ctx(sampler);
  for (std::size_t slot = 0; slot < opts.horizon; ++slot) {
    sampler.sample(rng);
    ctx.reset();
    for (std::size_t j = 0; j < runners.size(); ++j) {
      try {
        runners[j]->step(ctx);
      } catch (const Error& e) {
        throw Error(e.code(), "slot " + std::to_string(slot) + " (" +
                                  policies[j].display_name() + "): " + e.detail());
      }
    }
  }

  std::vector<RunMetrics> out;
  out.reserve(runners.size());
  for (auto& r : runners) out.push_back(r->finish(opts.seed));
  return out;
}

RunMetrics run_scenario(const ScenarioConfig& cfg) {
  cfg.validate();
  RunOptions opts;
  opts.horizon = cfg.horizon;
  opts.seed = cfg.seed;
  opts.calibration_samples = cfg.calibration_samples;
  opts.record_trace = cfg.record_trace;
  const PolicyParams p[] = {cfg.policy};
  return std::move(run_shared(cfg.topology, p, opts).front());
}

}  // namespace wpcn::sim
