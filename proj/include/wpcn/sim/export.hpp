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

#include <filesystem>
#include <iosfwd>
#include <string>

#include <json.hpp>

#include "wpcn/sim/config.hpp"
#include "wpcn/sim/engine.hpp"

namespace wpcn::sim {

// CSV schema (one row per slot, receivers indexed from 1):
//   slot,transmit,tx_power,tau0,Z_AP,Q_1..Q_K,D_1..D_K,Z_1..Z_K,G_1..G_K
// Q is η-scaled harvested power, D bits, queue columns post-update.
std::string trace_csv_header(std::size_t receivers);
void write_trace_csv(const Trace& trace, std::ostream& out);
void write_trace_csv(const Trace& trace, const std::filesystem::path& path);

nlohmann::json params_to_json(const PolicyParams& p);
nlohmann::json topology_to_json(const Topology& t);
// Aggregates only; the trace is never embedded.
nlohmann::json metrics_to_json(const RunMetrics& m);
RunMetrics metrics_from_json(const nlohmann::json& j);

void write_summary_json(const nlohmann::json& summary, const std::filesystem::path& path);
nlohmann::json read_summary_json(const std::filesystem::path& path);

}  // namespace wpcn::sim
