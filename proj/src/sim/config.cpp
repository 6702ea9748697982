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

#include "wpcn/sim/config.hpp"

#include <yaml-cpp/yaml.h>

#include <algorithm>
#include <array>
#include <cctype>
#include <charconv>
#include <cmath>
#include <fstream>
#include <numbers>
#include <set>
#include <sstream>

#include "wpcn/error.hpp"

namespace wpcn::sim {
namespace {

std::string lower(std::string_view s) {
  std::string out(s);
  std::transform(out.begin(), out.end(), out.begin(),
                 [](unsigned char c) { return static_cast<char>(std::tolower(c)); });
  return out;
}

std::string_view trim(std::string_view s) {
  while (!s.empty() && std::isspace(static_cast<unsigned char>(s.front()))) s.remove_prefix(1);
  while (!s.empty() && std::isspace(static_cast<unsigned char>(s.back()))) s.remove_suffix(1);
  return s;
}

bool parse_double(std::string_view s, double& out) {
  s = trim(s);
  if (s.empty()) return false;
  // from_chars rejects a leading '+'
  if (s.front() == '+') s.remove_prefix(1);
  const auto res = std::from_chars(s.data(), s.data() + s.size(), out);
  return res.ec == std::errc() && res.ptr == s.data() + s.size() && std::isfinite(out);
}

class Reader {
 public:
  explicit Reader(std::string source) : source_(std::move(source)) {}

  [[noreturn]] void fail(const YAML::Node& node, const std::string& msg) const {
    const YAML::Mark m = node.Mark();
    std::ostringstream os;
    os << source_;
    if (m.line >= 0) os << ':' << m.line + 1 << ':' << m.column + 1;
    os << ": " << msg;
    throw Error(ErrorCode::kConfigError, os.str());
  }

  void expect_map(const YAML::Node& node, const char* what) const {
    if (!node.IsMap()) fail(node, std::string(what) + " must be a mapping");
  }

  void check_keys(const YAML::Node& node, std::initializer_list<std::string_view> allowed) const {
    for (const auto& kv : node) {
      const auto key = kv.first.as<std::string>();
      if (std::find(allowed.begin(), allowed.end(), key) == allowed.end()) {
        fail(kv.first, "unknown key '" + key + "'");
      }
    }
  }

  std::string scalar(const YAML::Node& node, const char* what) const {
    if (!node.IsScalar()) fail(node, std::string(what) + " must be a scalar");
    return node.Scalar();
  }

  double number(const YAML::Node& node, const char* what) const {
    double v = 0.0;
    if (!parse_double(scalar(node, what), v)) fail(node, std::string(what) + " must be a number");
    return v;
  }

  double positive(const YAML::Node& node, const char* what) const {
    const double v = number(node, what);
    if (!(v > 0.0)) fail(node, std::string(what) + " must be positive");
    return v;
  }

  std::uint64_t count(const YAML::Node& node, const char* what) const {
    const std::string s = scalar(node, what);
    std::uint64_t v = 0;
    const auto res = std::from_chars(s.data(), s.data() + s.size(), v);
    if (res.ec == std::errc() && res.ptr == s.data() + s.size()) return v;
    // allow 1e6 style
    double d = 0.0;
    if (parse_double(s, d) && d >= 0.0 && d == std::floor(d) && d < 1.8e19) {
      return static_cast<std::uint64_t>(d);
    }
    fail(node, std::string(what) + " must be a nonnegative integer");
  }

  double power(const YAML::Node& node, const char* what) const {
    try {
      return parse_power(scalar(node, what));
    } catch (const Error& e) {
      fail(node, std::string(what) + ": " + e.detail());
    }
  }

  bool flag(const YAML::Node& node, const char* what) const {
    const std::string s = lower(scalar(node, what));
    if (s == "true" || s == "yes" || s == "on") return true;
    if (s == "false" || s == "no" || s == "off") return false;
    fail(node, std::string(what) + " must be a boolean");
  }

  Point2 point(const YAML::Node& node, const char* what) const {
    if (!node.IsSequence() || node.size() != 2) fail(node, std::string(what) + " must be [x, y]");
    return {number(node[0], what), number(node[1], what)};
  }

 private:
  std::string source_;
};

Topology read_topology(const Reader& r, const YAML::Node& node, Topology topo) {
  r.expect_map(node, "topology");
  r.check_keys(node, {"eap", "receivers", "tx_antennas", "rx_antennas", "carrier_hz",
                      "pathloss_exponent", "noise", "eta", "uplink", "distance_ratio"});
  if (node["eap"]) topo.eap = r.point(node["eap"], "eap");
  if (const auto recv = node["receivers"]) {
    if (!recv.IsSequence() || recv.size() == 0) r.fail(recv, "receivers must be a non-empty list");
    topo.receivers.clear();
    for (const auto& p : recv) topo.receivers.push_back(r.point(p, "receiver"));
  }
  if (node["tx_antennas"]) {
    topo.tx_antennas = r.count(node["tx_antennas"], "tx_antennas");
    if (topo.tx_antennas == 0) r.fail(node["tx_antennas"], "tx_antennas must be >= 1");
  }
  if (node["rx_antennas"]) {
    topo.rx_antennas = r.count(node["rx_antennas"], "rx_antennas");
    if (topo.rx_antennas == 0) r.fail(node["rx_antennas"], "rx_antennas must be >= 1");
  }
  if (node["carrier_hz"]) topo.carrier_hz = r.positive(node["carrier_hz"], "carrier_hz");
  if (node["pathloss_exponent"]) {
    topo.pathloss_exponent = r.positive(node["pathloss_exponent"], "pathloss_exponent");
  }
  if (node["noise"]) {
    topo.noise_variance = r.power(node["noise"], "noise");
    if (!(topo.noise_variance > 0.0)) r.fail(node["noise"], "noise must be positive");
  }
  if (node["eta"]) {
    topo.eta = r.number(node["eta"], "eta");
    if (!(topo.eta >= 0.0 && topo.eta < 1.0)) r.fail(node["eta"], "eta must lie in [0, 1)");
  }
  if (const auto up = node["uplink"]) {
    const std::string s = lower(r.scalar(up, "uplink"));
    if (s == "reciprocal") {
      topo.uplink = UplinkModel::kReciprocal;
    } else if (s == "independent") {
      topo.uplink = UplinkModel::kIndependent;
    } else {
      r.fail(up, "uplink must be 'reciprocal' or 'independent'");
    }
  }
  if (const auto dr = node["distance_ratio"]) {
    try {
      topo = with_distance_ratio(std::move(topo), r.positive(dr, "distance_ratio"));
    } catch (const Error& e) {
      r.fail(dr, e.detail());
    }
  }
  return topo;
}

PolicyParams read_policy(const Reader& r, const YAML::Node& node, PolicyParams p) {
  r.expect_map(node, "policy");
  r.check_keys(node, {"kind", "v", "p_avg", "p_peak", "p_min", "d_min", "utility", "alpha",
                      "gamma_upper", "label"});
  if (const auto k = node["kind"]) {
    try {
      p.kind = parse_policy(r.scalar(k, "kind"));
    } catch (const Error& e) {
      r.fail(k, e.detail());
    }
  }
  if (node["v"]) p.v = r.positive(node["v"], "v");
  if (node["p_avg"]) p.p_avg = r.power(node["p_avg"], "p_avg");
  if (node["p_peak"]) p.p_peak = r.power(node["p_peak"], "p_peak");
  if (node["p_min"]) p.p_min = r.power(node["p_min"], "p_min");
  if (node["d_min"]) {
    p.d_min = r.number(node["d_min"], "d_min");
    if (p.d_min < 0.0) r.fail(node["d_min"], "d_min must be nonnegative");
  }
  double alpha = p.utility.alpha;
  if (node["alpha"]) alpha = r.positive(node["alpha"], "alpha");
  if (const auto u = node["utility"]) {
    try {
      p.utility = Utility::parse(r.scalar(u, "utility"), alpha);
    } catch (const Error& e) {
      r.fail(u, e.detail());
    }
  } else if (node["alpha"]) {
    p.utility.alpha = alpha;
  }
  if (node["gamma_upper"]) p.gamma_upper = r.power(node["gamma_upper"], "gamma_upper");
  if (node["label"]) p.label = r.scalar(node["label"], "label");
  try {
    p.validate();
  } catch (const Error& e) {
    r.fail(node, e.detail());
  }
  return p;
}

}  // namespace

PolicyKind parse_policy(std::string_view name) {
  const std::string s = lower(trim(name));
  if (s == "optimal" || s == "opt") return PolicyKind::kOptimal;
  if (s == "mdpp") return PolicyKind::kMdpp;
  if (s == "qf-wpt" || s == "qf" || s == "qfwpt") return PolicyKind::kQfWpt;
  if (s == "qgf-it" || s == "qgf" || s == "qgfit") return PolicyKind::kQgfIt;
  throw Error(ErrorCode::kConfigError, "unknown policy '" + std::string(name) + "'");
}

std::string policy_name(PolicyKind kind) {
  switch (kind) {
    case PolicyKind::kOptimal: return "optimal";
    case PolicyKind::kMdpp: return "mdpp";
    case PolicyKind::kQfWpt: return "qf-wpt";
    case PolicyKind::kQgfIt: return "qgf-it";
  }
  return "unknown";
}

std::string PolicyParams::display_name() const {
  if (!label.empty()) return label;
  if (kind == PolicyKind::kQfWpt || kind == PolicyKind::kQgfIt) {
    return policy_name(kind) + "-" + utility.name();
  }
  return policy_name(kind);
}

void PolicyParams::validate() const {
  if (!(p_avg > 0.0 && p_avg <= p_peak)) {
    throw Error(ErrorCode::kConfigError, "need 0 < p_avg <= p_peak");
  }
  if (!(v > 0.0) || !std::isfinite(v)) throw Error(ErrorCode::kConfigError, "V must be positive");
  if (!(p_min >= 0.0)) throw Error(ErrorCode::kConfigError, "p_min must be nonnegative");
  if (!(d_min >= 0.0)) throw Error(ErrorCode::kConfigError, "d_min must be nonnegative");
  if (!(gamma_upper >= 0.0)) throw Error(ErrorCode::kConfigError, "gamma_upper must be >= 0");
  utility.validate();
}

void ScenarioConfig::validate() const {
  if (horizon < 1) throw Error(ErrorCode::kConfigError, "horizon must be >= 1");
  topology.validate();
  policy.validate();
  if (policy.kind == PolicyKind::kOptimal && calibration_samples < kMinCalibrationSamples) {
    throw Error(ErrorCode::kConfigError, "calibration_samples must be >= " +
                                             std::to_string(kMinCalibrationSamples));
  }
}

ScenarioConfig parse_config(std::string_view text, std::string_view source) {
  const Reader r{std::string(source)};
  YAML::Node root;
  try {
    root = YAML::Load(std::string(text));
  } catch (const YAML::Exception& e) {
    std::ostringstream os;
    os << source << ':' << e.mark.line + 1 << ':' << e.mark.column + 1 << ": " << e.msg;
    throw Error(ErrorCode::kConfigError, os.str());
  }
  if (!root.IsMap()) r.fail(root, "top level must be a mapping");
  r.check_keys(root, {"preset", "name", "seed", "horizon", "calibration_samples", "output",
                      "trace", "topology", "policy"});

  ScenarioConfig cfg;
  if (const auto p = root["preset"]) {
    try {
      cfg = preset(r.scalar(p, "preset"));
    } catch (const Error& e) {
      r.fail(p, e.detail());
    }
  }
  if (root["name"]) cfg.name = r.scalar(root["name"], "name");
  if (root["seed"]) cfg.seed = r.count(root["seed"], "seed");
  if (root["horizon"]) {
    cfg.horizon = r.count(root["horizon"], "horizon");
    if (cfg.horizon < 1) r.fail(root["horizon"], "horizon must be >= 1");
  }
  if (root["calibration_samples"]) {
    cfg.calibration_samples = r.count(root["calibration_samples"], "calibration_samples");
  }
  if (root["output"]) cfg.output_path = r.scalar(root["output"], "output");
  if (root["trace"]) cfg.record_trace = r.flag(root["trace"], "trace");
  if (root["topology"]) cfg.topology = read_topology(r, root["topology"], cfg.topology);
  if (root["policy"]) cfg.policy = read_policy(r, root["policy"], cfg.policy);
  try {
    cfg.validate();
  } catch (const Error& e) {
    r.fail(root, e.detail());
  }
  return cfg;
}

ScenarioConfig load_config(const std::filesystem::path& path) {
  std::ifstream in(path);
  if (!in) throw Error(ErrorCode::kIoError, "cannot open " + path.string());
  std::ostringstream buf;
  buf << in.rdbuf();
  return parse_config(buf.str(), path.string());
}

ScenarioConfig preset(std::string_view name) {
  const std::string s = lower(trim(name));
  ScenarioConfig cfg;
  cfg.topology.eap = {0.0, 0.0};
  cfg.topology.tx_antennas = 30;
  cfg.topology.rx_antennas = 4;
  cfg.topology.carrier_hz = 2.4e9;
  cfg.topology.noise_variance = dbm_to_watts(-100.0);
  cfg.topology.eta = 0.5;
  cfg.topology.receivers = {{1.2, 1.2}, {2.0 * std::numbers::sqrt2, 0.0}};
  cfg.policy.p_peak = 2.0;
  cfg.policy.p_avg = 0.4;
  if (s == "a") {
    cfg.name = "preset-a";
    cfg.policy.kind = PolicyKind::kMdpp;
    cfg.policy.v = 1e4;
    return cfg;
  }
  if (s == "b") {
    cfg.name = "preset-b";
    cfg.topology = with_distance_ratio(cfg.topology, 2.0);
    cfg.policy.kind = PolicyKind::kQfWpt;
    cfg.policy.utility = Utility::max_min();
    cfg.policy.v = 1e2;
    return cfg;
  }
  if (s == "c") {
    cfg.name = "preset-c";
    cfg.topology.tx_antennas = 40;
    cfg.topology.rx_antennas = 1;
    cfg.topology.receivers.clear();
    for (int i = 0; i < 10; ++i) {
      const double a = 2.0 * std::numbers::pi * i / 10.0;
      cfg.topology.receivers.push_back({3.0 * std::cos(a), 3.0 * std::sin(a)});
    }
    cfg.policy.kind = PolicyKind::kQgfIt;
    cfg.policy.p_avg = 0.03;
    cfg.policy.v = 1e2;
    cfg.policy.utility = Utility::sum();
    return cfg;
  }
  throw Error(ErrorCode::kConfigError, "unknown preset '" + std::string(name) + "' (a, b, c)");
}

Topology with_distance_ratio(Topology topo, double ratio) {
  if (topo.receivers.size() != 2) {
    throw Error(ErrorCode::kConfigError, "distance ratio needs exactly two receivers");
  }
  if (!(ratio >= 1.0)) throw Error(ErrorCode::kConfigError, "distance ratio must be >= 1");
  const double d0 = topo.receiver_distance(0);
  const double d1 = topo.receiver_distance(1);
  if (!(d0 > 0.0 && d1 > 0.0)) {
    throw Error(ErrorCode::kNonPositiveDistance, "receiver coincides with the access point");
  }
  const std::size_t near = d0 <= d1 ? 0 : 1;
  const std::size_t far = 1 - near;
  const double target = ratio * std::min(d0, d1);
  const double scale = target / std::max(d0, d1);
  Point2& p = topo.receivers[far];
  p = {topo.eap.x + (p.x - topo.eap.x) * scale, topo.eap.y + (p.y - topo.eap.y) * scale};
  return topo;
}

double dbm_to_watts(double dbm) { return std::pow(10.0, (dbm - 30.0) / 10.0); }

double parse_power(std::string_view text) {
  std::string_view s = trim(text);
  const std::string l = lower(s);
  double scale = 1.0;
  bool dbm = false;
  std::size_t cut = l.size();
  if (l.ends_with("dbm")) {
    dbm = true;
    cut -= 3;
  } else if (l.ends_with("mw")) {
    scale = 1e-3;
    cut -= 2;
  } else if (l.ends_with("w")) {
    cut -= 1;
  }
  double v = 0.0;
  if (!parse_double(s.substr(0, cut), v)) {
    throw Error(ErrorCode::kConfigError, "bad power value '" + std::string(text) + "'");
  }
  if (dbm) return dbm_to_watts(v);
  if (v < 0.0) throw Error(ErrorCode::kConfigError, "power must be nonnegative");
  return v * scale;
}

}  // namespace wpcn::sim
