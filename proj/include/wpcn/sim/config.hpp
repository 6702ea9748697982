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
#include <filesystem>
#include <string>
#include <string_view>

#include "wpcn/channel.hpp"
#include "wpcn/policy_fair.hpp"

namespace wpcn::sim {

enum class PolicyKind { kOptimal, kMdpp, kQfWpt, kQgfIt };

// optimal, mdpp, qf-wpt (qf), qgf-it (qgf)
PolicyKind parse_policy(std::string_view name);
std::string policy_name(PolicyKind kind);

// Union of the parameters used by the four policies. Powers in watts, d_min
// in bits per slot. p_min is compared with raw (pre-η) received power.
struct PolicyParams {
  PolicyKind kind = PolicyKind::kMdpp;
  double v = 1e4;
  double p_avg = 0.4;
  double p_peak = 2.0;
  double p_min = 0.0;
  double d_min = 0.0;
  Utility utility = Utility::sum();
  // Box bound for the QF-WPT auxiliary variables; 0 means p_peak.
  double gamma_upper = 0.0;
  std::string label;  // defaults to the policy name

  std::string display_name() const;
  void validate() const;
};

struct ScenarioConfig {
  std::string name = "scenario";
  Topology topology;
  PolicyParams policy;
  std::size_t horizon = 100000;
  std::size_t calibration_samples = 100000;
  std::uint64_t seed = 1;
  std::string output_path;  // base path; ".csv" / ".json" get appended
  bool record_trace = false;

  void validate() const;
};

// YAML text. Errors are ConfigError with "<source>:<line>:<col>: ..." prefixes.
ScenarioConfig parse_config(std::string_view text, std::string_view source = "<config>");
ScenarioConfig load_config(const std::filesystem::path& path);

// "a": two receivers at (1.2,1.2) and (2√2,0), N=30, M=4, MDPP.
// "b": preset a under max-min QF-WPT with the far receiver at 2x the near distance.
// "c": ten single-antenna receivers at 3 m, QGF-IT with sum utility.
ScenarioConfig preset(std::string_view name);

// Moves the farther receiver along its bearing so that it sits at `ratio`
// times the distance of the nearer one. Needs exactly two receivers.
Topology with_distance_ratio(Topology topo, double ratio);

// "-100 dBm", "30 mW", "0.4 W", "0.4" (watts).
double parse_power(std::string_view text);
double dbm_to_watts(double dbm);

}  // namespace wpcn::sim
