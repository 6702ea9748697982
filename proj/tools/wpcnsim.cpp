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

// wpcnsim: command-line front end for the simulator.
//
// Exit codes: 0 success, 1 invariant violation, 2 usage/config error,
// 3 numerical or I/O failure.

#include <CLI11.hpp>

#include <cstdio>
#include <filesystem>
#include <iostream>
#include <map>
#include <optional>
#include <sstream>
#include <string>
#include <vector>

#include "wpcn/error.hpp"
#include "wpcn/policy_wpt.hpp"
#include "wpcn/rng.hpp"
#include "wpcn/sim/config.hpp"
#include "wpcn/sim/engine.hpp"
#include "wpcn/sim/export.hpp"
#include "wpcn/sim/stats.hpp"
#include "wpcn/simd/kernels.hpp"

namespace {

using namespace wpcn;
using namespace wpcn::sim;
using nlohmann::json;

struct Common {
  std::string config;
  std::optional<std::uint64_t> seed;
  std::optional<std::size_t> horizon;
  std::string out;
  std::size_t seeds = 1;
  bool trace = false;
};

void add_common(CLI::App* app, Common& c) {
  app->add_option("--seed", c.seed, "Base seed (replicates use seed, seed+1, ...)");
  app->add_option("--horizon", c.horizon, "Number of slots")->check(CLI::PositiveNumber);
  app->add_option("--out", c.out, "Output base path (.json summary, .csv trace)");
  app->add_option("--seeds", c.seeds, "Monte-Carlo replicates")->check(CLI::PositiveNumber);
}

// A path, or preset:a / preset:b / preset:c.
ScenarioConfig load(const std::string& source) {
  if (source.rfind("preset:", 0) == 0) return preset(source.substr(7));
  return load_config(source);
}

ScenarioConfig resolve(const Common& c, const std::string& fallback) {
  ScenarioConfig cfg = load(c.config.empty() ? fallback : c.config);
  if (c.seed) cfg.seed = *c.seed;
  if (c.horizon) cfg.horizon = *c.horizon;
  if (!c.out.empty()) cfg.output_path = c.out;
  // accept either a base path or the summary file name
  if (cfg.output_path.ends_with(".json")) cfg.output_path.resize(cfg.output_path.size() - 5);
  cfg.validate();
  return cfg;
}

RunOptions options_for(const ScenarioConfig& cfg, std::uint64_t seed, bool trace) {
  RunOptions o;
  o.horizon = cfg.horizon;
  o.seed = seed;
  o.calibration_samples = cfg.calibration_samples;
  o.record_trace = trace;
  return o;
}

std::vector<double> column(const std::vector<RunMetrics>& runs, double (*f)(const RunMetrics&)) {
  std::vector<double> v;
  for (const auto& r : runs) v.push_back(f(r));
  return v;
}

json aggregate(const std::vector<RunMetrics>& runs) {
  const auto s_total = summarize(column(runs, [](const RunMetrics& m) { return m.total_received; }));
  const auto s_tx = summarize(column(runs, [](const RunMetrics& m) { return m.avg_tx_power; }));
  json j = {{"replicates", runs.size()},
            {"total_received", {{"mean", s_total.mean}, {"stderr", s_total.stderr_},
                                {"ci95", {s_total.ci_low, s_total.ci_high}}}},
            {"avg_tx_power", {{"mean", s_tx.mean}, {"stderr", s_tx.stderr_},
                              {"ci95", {s_tx.ci_low, s_tx.ci_high}}}}};
  const std::size_t k = runs.front().avg_received.size();
  json per = json::array();
  json thr = json::array();
  for (std::size_t i = 0; i < k; ++i) {
    std::vector<double> q, d;
    for (const auto& r : runs) {
      q.push_back(r.avg_received[i]);
      d.push_back(r.avg_throughput[i]);
    }
    per.push_back(mean(q));
    thr.push_back(mean(d));
  }
  j["avg_received"] = per;
  j["avg_throughput"] = thr;
  std::vector<double> conv;
  std::size_t converged = 0;
  for (const auto& r : runs) {
    conv.push_back(static_cast<double>(r.convergence_time.value_or(r.horizon)));
    converged += r.convergence_time.has_value();
  }
  j["convergence_time_mean"] = mean(conv);
  j["converged_runs"] = converged;
  std::size_t violations = 0;
  for (const auto& r : runs) violations += r.invariants.total();
  j["invariant_violations"] = violations;
  return j;
}

std::size_t violations(const std::vector<RunMetrics>& runs) {
  std::size_t v = 0;
  for (const auto& r : runs) v += r.invariants.total();
  return v;
}

void print_header() {
  std::printf("%-18s %-10s %6s %14s %14s %12s %12s %6s\n", "policy", "point", "seeds", "Q_total",
              "Q_stderr", "tx_avg", "conv_time", "viol");
}

void print_row(const std::string& name, const std::string& point,
               const std::vector<RunMetrics>& runs) {
  const json a = aggregate(runs);
  std::printf("%-18s %-10s %6zu %14.6e %14.3e %12.6f %12.0f %6zu\n", name.c_str(), point.c_str(),
              runs.size(), a["total_received"]["mean"].get<double>(),
              a["total_received"]["stderr"].get<double>(),
              a["avg_tx_power"]["mean"].get<double>(), a["convergence_time_mean"].get<double>(),
              violations(runs));
  for (const auto& w : runs.front().warnings) std::fprintf(stderr, "warning: %s\n", w.c_str());
  for (const auto& r : runs) {
    const auto& inv = r.invariants;
    if (inv.total() == 0) continue;
    std::fprintf(stderr,
                 "invariant failure [%s seed %llu]: peak=%zu two_level=%zu causality=%zu "
                 "tau_sum=%zu kkt=%zu (max %.3e) queues=%zu\n",
                 r.policy.c_str(), static_cast<unsigned long long>(r.seed), inv.peak,
                 inv.two_level, inv.causality, inv.tau_sum, inv.kkt, inv.max_kkt_residual,
                 inv.queues);
  }
}

// Runs `policies` over `seeds` replicates; result[p][s].
std::vector<std::vector<RunMetrics>> replicate(const Topology& topo,
                                               const std::vector<PolicyParams>& policies,
                                               const ScenarioConfig& cfg, std::size_t seeds,
                                               bool trace) {
  std::vector<std::vector<RunMetrics>> out(policies.size());
  for (std::size_t s = 0; s < seeds; ++s) {
    auto runs = run_shared(topo, policies, options_for(cfg, cfg.seed + s, trace));
    for (std::size_t p = 0; p < runs.size(); ++p) out[p].push_back(std::move(runs[p]));
  }
  return out;
}

json runs_json(const std::vector<RunMetrics>& runs) {
  json arr = json::array();
  for (const auto& r : runs) arr.push_back(metrics_to_json(r));
  return arr;
}

json config_json(const ScenarioConfig& cfg) {
  return {{"name", cfg.name},
          {"seed", cfg.seed},
          {"horizon", cfg.horizon},
          {"calibration_samples", cfg.calibration_samples},
          {"topology", topology_to_json(cfg.topology)},
          {"policy", params_to_json(cfg.policy)}};
}

void write_outputs(const std::string& base, const json& summary) {
  if (base.empty()) return;
  const std::filesystem::path p(base + ".json");
  if (p.has_parent_path()) std::filesystem::create_directories(p.parent_path());
  write_summary_json(summary, p);
  std::fprintf(stderr, "wrote %s\n", p.string().c_str());
}

int cmd_run(const Common& c) {
  const ScenarioConfig cfg = resolve(c, "");
  const bool trace = c.trace || cfg.record_trace;
  const std::vector<PolicyParams> policies{cfg.policy};
  auto runs = replicate(cfg.topology, policies, cfg, c.seeds, trace && !cfg.output_path.empty());
  print_header();
  print_row(cfg.policy.display_name(), "-", runs[0]);
  const auto& m = runs[0].front();
  std::printf("avg_received:");
  for (double q : m.avg_received) std::printf(" %.6e", q);
  std::printf("\navg_throughput:");
  for (double d : m.avg_throughput) std::printf(" %.6f", d);
  std::printf("\n");
  if (!cfg.output_path.empty()) {
    write_outputs(cfg.output_path, {{"command", "run"},
                                    {"config", config_json(cfg)},
                                    {"runs", runs_json(runs[0])},
                                    {"aggregate", aggregate(runs[0])}});
    for (const auto& r : runs[0]) {
      if (!r.trace) continue;
      const std::string suffix = c.seeds > 1 ? ".seed" + std::to_string(r.seed) : "";
      write_trace_csv(*r.trace, cfg.output_path + suffix + ".csv");
    }
  }
  return violations(runs[0]) ? 1 : 0;
}

std::vector<double> parse_values(const std::vector<std::string>& raw) {
  std::vector<double> out;
  for (const auto& item : raw) {
    std::stringstream ss(item);
    std::string tok;
    while (std::getline(ss, tok, ',')) {
      if (tok.empty()) continue;
      std::size_t used = 0;
      double v = 0.0;
      try {
        v = std::stod(tok, &used);
      } catch (const std::exception&) {
        used = 0;
      }
      if (used != tok.size()) throw Error(ErrorCode::kConfigError, "bad value '" + tok + "'");
      out.push_back(v);
    }
  }
  if (out.empty()) throw Error(ErrorCode::kConfigError, "--values is empty");
  return out;
}

int cmd_sweep(const Common& c, const std::string& param, const std::vector<std::string>& raw) {
  const ScenarioConfig cfg = resolve(c, "preset:a");
  const auto values = parse_values(raw);
  print_header();
  json points = json::array();
  std::size_t bad = 0;
  for (double v : values) {
    ScenarioConfig point = cfg;
    if (param == "V") {
      point.policy.v = v;
    } else {
      point.topology = with_distance_ratio(point.topology, v);
    }
    point.validate();
    auto runs = replicate(point.topology, {point.policy}, point, c.seeds, false);
    std::ostringstream label;
    label << param << '=' << v;
    print_row(point.policy.display_name(), label.str(), runs[0]);
    bad += violations(runs[0]);
    points.push_back({{"param", param}, {"value", v}, {"aggregate", aggregate(runs[0])},
                      {"runs", runs_json(runs[0])}});
  }
  write_outputs(cfg.output_path,
                {{"command", "sweep"}, {"config", config_json(cfg)}, {"points", points}});
  return bad ? 1 : 0;
}

int cmd_calibrate(const Common& c, std::size_t samples) {
  ScenarioConfig cfg = resolve(c, "preset:a");
  if (samples < kMinCalibrationSamples) {
    throw Error(ErrorCode::kConfigError,
                "--samples must be >= " + std::to_string(kMinCalibrationSamples));
  }
  Rng rng = make_rng(cfg.seed, Stream::kCalibration);
  auto lambdas = sample_lambda_max(cfg.topology, samples, rng);
  const double thr = threshold_from_samples(lambdas, cfg.policy.p_avg, cfg.policy.p_peak);
  std::size_t above = 0;
  for (double l : lambdas) above += l >= thr;
  const double duty = static_cast<double>(above) / static_cast<double>(samples);
  std::printf("threshold %.9e\nduty_cycle %.6f\nexpected_tx_power %.6f\n", thr, duty,
              duty * cfg.policy.p_peak);
  write_outputs(cfg.output_path, {{"command", "calibrate"},
                                  {"config", config_json(cfg)},
                                  {"samples", samples},
                                  {"threshold", thr},
                                  {"duty_cycle", duty}});
  return 0;
}

// kind[:utility[:alpha]], e.g. qf-wpt:mmf or qgf-it:alpha:2
PolicyParams parse_policy_arg(const std::string& arg, const PolicyParams& base) {
  PolicyParams p = base;
  std::vector<std::string> parts;
  std::stringstream ss(arg);
  std::string tok;
  while (std::getline(ss, tok, ':')) parts.push_back(tok);
  if (parts.empty()) throw Error(ErrorCode::kConfigError, "empty --policies entry");
  p.kind = parse_policy(parts[0]);
  p.label.clear();
  if (parts.size() >= 2) {
    const double alpha = parts.size() >= 3 ? std::stod(parts[2]) : 1.0;
    p.utility = Utility::parse(parts[1], alpha);
  }
  if (parts.size() > 3) throw Error(ErrorCode::kConfigError, "bad --policies entry '" + arg + "'");
  p.validate();
  return p;
}

int cmd_compare(const Common& c, const std::vector<std::string>& specs) {
  const ScenarioConfig cfg = resolve(c, "preset:a");
  std::vector<PolicyParams> policies;
  for (const auto& item : specs) {
    std::stringstream ss(item);
    std::string tok;
    while (std::getline(ss, tok, ',')) {
      if (!tok.empty()) policies.push_back(parse_policy_arg(tok, cfg.policy));
    }
  }
  if (policies.empty()) throw Error(ErrorCode::kConfigError, "--policies is empty");
  auto runs = replicate(cfg.topology, policies, cfg, c.seeds, false);
  print_header();
  json results = json::array();
  std::size_t bad = 0;
  for (std::size_t p = 0; p < policies.size(); ++p) {
    print_row(policies[p].display_name(), "-", runs[p]);
    bad += violations(runs[p]);
    results.push_back({{"policy", policies[p].display_name()},
                       {"aggregate", aggregate(runs[p])},
                       {"runs", runs_json(runs[p])}});
  }
  write_outputs(cfg.output_path,
                {{"command", "compare"}, {"config", config_json(cfg)}, {"policies", results}});
  return bad ? 1 : 0;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"Wireless power transfer / WPCN scheduling simulator"};
  app.require_subcommand(1);
  bool show_backend = false;
  app.add_flag("--simd-info", show_backend, "Print the selected kernel backend");

  Common run_c, sweep_c, cal_c, cmp_c;
  auto* run = app.add_subcommand("run", "Run one scenario");
  run->add_option("config", run_c.config, "YAML file or preset:a|b|c")->required();
  add_common(run, run_c);
  run->add_flag("--trace", run_c.trace, "Write the per-slot CSV trace next to --out");

  std::string param;
  std::vector<std::string> values;
  auto* sweep = app.add_subcommand("sweep", "Sweep V or the distance ratio");
  sweep->add_option("--config", sweep_c.config, "YAML file or preset (default preset:a)");
  sweep->add_option("--param", param, "V or dr")->required()->check(CLI::IsMember({"V", "dr"}));
  sweep->add_option("--values", values, "Comma-separated values")->required();
  add_common(sweep, sweep_c);

  std::size_t samples = 200000;
  auto* cal = app.add_subcommand("calibrate", "Estimate the optimal-policy threshold");
  cal->add_option("--config", cal_c.config, "YAML file or preset (default preset:a)");
  cal->add_option("--samples", samples, "Channel draws");
  add_common(cal, cal_c);

  std::vector<std::string> specs;
  auto* cmp = app.add_subcommand("compare", "Run several policies on common channels");
  cmp->add_option("--config", cmp_c.config, "YAML file or preset (default preset:a)");
  cmp->add_option("--policies", specs, "kind[:utility[:alpha]], comma-separated")->required();
  add_common(cmp, cmp_c);

  CLI11_PARSE(app, argc, argv);
  if (show_backend) {
    std::fprintf(stderr, "simd backend: %s\n",
                 std::string(wpcn::simd::backend_name(wpcn::simd::active_backend())).c_str());
  }

  try {
    if (*run) return cmd_run(run_c);
    if (*sweep) return cmd_sweep(sweep_c, param, values);
    if (*cal) return cmd_calibrate(cal_c, samples);
    if (*cmp) return cmd_compare(cmp_c, specs);
  } catch (const wpcn::Error& e) {
    std::fprintf(stderr, "error: %s\n", e.what());
    const auto code = e.code();
    return code == wpcn::ErrorCode::kConfigError || code == wpcn::ErrorCode::kInvalidArgument
               ? 2
               : 3;
  } catch (const std::exception& e) {
    std::fprintf(stderr, "error: %s\n", e.what());
    return 3;
  }
  return 0;
}
