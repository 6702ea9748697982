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

#include "wpcn/sim/export.hpp"

#include <fstream>
#include <iomanip>
#include <limits>
#include <ostream>
#include <sstream>

#include "wpcn/error.hpp"

namespace wpcn::sim {

using nlohmann::json;

std::string trace_csv_header(std::size_t k) {
  std::ostringstream os;
  os << "slot,transmit,tx_power,tau0,Z_AP";
  for (const char* col : {"Q", "D", "Z", "G"}) {
    for (std::size_t i = 1; i <= k; ++i) os << ',' << col << '_' << i;
  }
  return os.str();
}

void write_trace_csv(const Trace& t, std::ostream& out) {
  const std::size_t k = t.receivers;
  out << trace_csv_header(k) << '\n';
  out << std::setprecision(std::numeric_limits<double>::max_digits10);
  for (std::size_t s = 0; s < t.size(); ++s) {
    out << s << ',' << int{t.transmit[s]} << ',' << t.tx_power[s] << ',' << t.tau0[s] << ','
        << t.z_ap[s];
    for (const auto* col : {&t.received, &t.rate, &t.z, &t.g}) {
      for (std::size_t i = 0; i < k; ++i) out << ',' << (*col)[s * k + i];
    }
    out << '\n';
  }
  if (!out) throw Error(ErrorCode::kIoError, "failed writing trace");
}

void write_trace_csv(const Trace& trace, const std::filesystem::path& path) {
  std::ofstream out(path);
  if (!out) throw Error(ErrorCode::kIoError, "cannot open " + path.string());
  write_trace_csv(trace, out);
}

json params_to_json(const PolicyParams& p) {
  return {{"kind", policy_name(p.kind)}, {"label", p.display_name()}, {"v", p.v},
          {"p_avg", p.p_avg},           {"p_peak", p.p_peak},        {"p_min", p.p_min},
          {"d_min", p.d_min},           {"utility", p.utility.name()},
          {"alpha", p.utility.alpha},   {"gamma_upper", p.gamma_upper}};
}

json topology_to_json(const Topology& t) {
  json recv = json::array();
  for (const Point2& p : t.receivers) recv.push_back({p.x, p.y});
  return {{"eap", {t.eap.x, t.eap.y}},
          {"receivers", recv},
          {"tx_antennas", t.tx_antennas},
          {"rx_antennas", t.rx_antennas},
          {"carrier_hz", t.carrier_hz},
          {"pathloss_exponent", t.pathloss_exponent},
          {"noise_variance", t.noise_variance},
          {"eta", t.eta},
          {"uplink", t.uplink == UplinkModel::kReciprocal ? "reciprocal" : "independent"}};
}

json metrics_to_json(const RunMetrics& m) {
  const InvariantReport& inv = m.invariants;
  json j = {{"policy", m.policy},
            {"params", params_to_json(m.params)},
            {"horizon", m.horizon},
            {"seed", m.seed},
            {"avg_received", m.avg_received},
            {"total_received", m.total_received},
            {"avg_tx_power", m.avg_tx_power},
            {"avg_throughput", m.avg_throughput},
            {"transmit_slots", m.transmit_slots},
            {"final_z_ap", m.final_z_ap},
            {"final_z", m.final_z},
            {"final_g", m.final_g},
            {"threshold", m.threshold},
            {"gap_bound", m.gap_bound},
            {"warnings", m.warnings},
            {"invariants",
             {{"peak", inv.peak},
              {"two_level", inv.two_level},
              {"causality", inv.causality},
              {"tau_sum", inv.tau_sum},
              {"kkt", inv.kkt},
              {"queues", inv.queues},
              {"kkt_checks", inv.kkt_checks},
              {"max_kkt_residual", inv.max_kkt_residual},
              {"total", inv.total()}}}};
  j["convergence_time"] = m.convergence_time ? json(*m.convergence_time) : json(nullptr);
  j["converged"] = m.convergence_time.has_value();
  return j;
}

RunMetrics metrics_from_json(const json& j) {
  try {
    RunMetrics m;
    m.policy = j.at("policy").get<std::string>();
    const json& p = j.at("params");
    m.params.kind = parse_policy(p.at("kind").get<std::string>());
    m.params.label = p.at("label").get<std::string>();
    m.params.v = p.at("v").get<double>();
    m.params.p_avg = p.at("p_avg").get<double>();
    m.params.p_peak = p.at("p_peak").get<double>();
    m.params.p_min = p.at("p_min").get<double>();
    m.params.d_min = p.at("d_min").get<double>();
    m.params.utility = Utility::parse(p.at("utility").get<std::string>(), p.at("alpha").get<double>());
    m.params.gamma_upper = p.at("gamma_upper").get<double>();
    m.horizon = j.at("horizon").get<std::size_t>();
    m.seed = j.at("seed").get<std::uint64_t>();
    m.avg_received = j.at("avg_received").get<std::vector<double>>();
    m.total_received = j.at("total_received").get<double>();
    m.avg_tx_power = j.at("avg_tx_power").get<double>();
    m.avg_throughput = j.at("avg_throughput").get<std::vector<double>>();
    m.transmit_slots = j.at("transmit_slots").get<std::size_t>();
    m.final_z_ap = j.at("final_z_ap").get<double>();
    m.final_z = j.at("final_z").get<std::vector<double>>();
    m.final_g = j.at("final_g").get<std::vector<double>>();
    m.threshold = j.at("threshold").get<double>();
    m.gap_bound = j.at("gap_bound").get<double>();
    m.warnings = j.at("warnings").get<std::vector<std::string>>();
    if (!j.at("convergence_time").is_null()) {
      m.convergence_time = j.at("convergence_time").get<std::size_t>();
    }
    const json& inv = j.at("invariants");
    m.invariants.peak = inv.at("peak").get<std::size_t>();
    m.invariants.two_level = inv.at("two_level").get<std::size_t>();
    m.invariants.causality = inv.at("causality").get<std::size_t>();
    m.invariants.tau_sum = inv.at("tau_sum").get<std::size_t>();
    m.invariants.kkt = inv.at("kkt").get<std::size_t>();
    m.invariants.queues = inv.at("queues").get<std::size_t>();
    m.invariants.kkt_checks = inv.at("kkt_checks").get<std::size_t>();
    m.invariants.max_kkt_residual = inv.at("max_kkt_residual").get<double>();
    return m;
  } catch (const json::exception& e) {
    throw Error(ErrorCode::kIoError, std::string("malformed summary: ") + e.what());
  }
}

void write_summary_json(const json& summary, const std::filesystem::path& path) {
  std::ofstream out(path);
  if (!out) throw Error(ErrorCode::kIoError, "cannot open " + path.string());
  out << summary.dump(2) << '\n';
  if (!out) throw Error(ErrorCode::kIoError, "failed writing " + path.string());
}

json read_summary_json(const std::filesystem::path& path) {
  std::ifstream in(path);
  if (!in) throw Error(ErrorCode::kIoError, "cannot open " + path.string());
  try {
    return json::parse(in);
  } catch (const json::exception& e) {
    throw Error(ErrorCode::kIoError, path.string() + ": " + e.what());
  }
}

}  // namespace wpcn::sim
