// Copyright 2026 The mdicert Authors
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

#include "mdicert/experiments/config.hpp"

#include <algorithm>
#include <cmath>
#include <fstream>
#include <set>
#include <sstream>

namespace mdicert::experiments {

using nlohmann::json;

namespace {

[[noreturn]] void fail(const std::string& message) { throw ConfigError(message); }

void reject_unknown(const json& obj, const std::set<std::string>& allowed, const std::string& where) {
  for (const auto& item : obj.items()) {
    if (!allowed.count(item.key())) fail(where + ": unknown key '" + item.key() + "'");
  }
}

double get_number(const json& obj, const std::string& key, const std::string& where) {
  const json& v = obj.at(key);
  if (!v.is_number()) fail(where + "." + key + ": expected a number");
  return v.get<double>();
}

double number_or(const json& obj, const std::string& key, double fallback, const std::string& where) {
  return obj.contains(key) ? get_number(obj, key, where) : fallback;
}

int int_or(const json& obj, const std::string& key, int fallback, const std::string& where) {
  if (!obj.contains(key)) return fallback;
  const json& v = obj.at(key);
  if (!v.is_number_integer()) fail(where + "." + key + ": expected an integer");
  const auto value = v.get<std::int64_t>();
  if (value < std::numeric_limits<int>::min() || value > std::numeric_limits<int>::max()) {
    fail(where + "." + key + ": integer out of range");
  }
  return static_cast<int>(value);
}

std::string string_or(const json& obj, const std::string& key, const std::string& fallback, const std::string& where) {
  if (!obj.contains(key)) return fallback;
  const json& v = obj.at(key);
  if (!v.is_string()) fail(where + "." + key + ": expected a string");
  return v.get<std::string>();
}

PriorSpec parse_prior(const json& v, const std::string& where) {
  if (!v.is_object()) fail(where + ": expected an object with sigma_x and sigma_p");
  reject_unknown(v, {"sigma_x", "sigma_p"}, where);
  if (!v.contains("sigma_x") || !v.contains("sigma_p")) fail(where + ": sigma_x and sigma_p are required");
  return {get_number(v, "sigma_x", where), get_number(v, "sigma_p", where)};
}

json prior_json(const PriorSpec& p) { return json{{"sigma_x", p.sigma_x}, {"sigma_p", p.sigma_p}}; }

SweepAxis default_axis(const std::string& parameter) {
  if (parameter == "epsilon") return {parameter, 0.0, 1.5, 151, false};
  if (parameter == "sigma_star") return {parameter, 0.0, 4.0, 161, false};
  if (parameter == "r") return {parameter, 0.0, 1.5, 151, false};
  if (parameter == "eta") return {parameter, 0.05, 1.0, 96, false};
  if (parameter == "xi") return {parameter, 0.0, 1.0, 101, false};
  return {parameter, 0.0, 1.0, 101, false};
}

SweepAxis parse_axis(const json& v, const std::string& where, bool allow_defaults) {
  if (!v.is_object()) fail(where + ": expected an axis object");
  reject_unknown(v, {"parameter", "min", "max", "steps", "scale"}, where);
  if (!v.contains("parameter") || !v.at("parameter").is_string()) fail(where + ".parameter: expected a string");
  SweepAxis axis = default_axis(v.at("parameter").get<std::string>());
  if (!allow_defaults) {
    for (const char* key : {"min", "max", "steps"}) {
      if (!v.contains(key)) fail(where + ": '" + key + "' is required");
    }
  }
  axis.min = number_or(v, "min", axis.min, where);
  axis.max = number_or(v, "max", axis.max, where);
  axis.steps = int_or(v, "steps", axis.steps, where);
  const std::string scale = string_or(v, "scale", "linear", where);
  if (scale != "linear" && scale != "log") fail(where + ".scale: expected 'linear' or 'log'");
  axis.log = scale == "log";
  if (axis.steps < 2) fail(where + ".steps: must be >= 2");
  if (!std::isfinite(axis.min) || !std::isfinite(axis.max)) fail(where + ": bounds must be finite");
  if (axis.log && !(axis.min > 0.0 && axis.max > 0.0)) fail(where + ": log axis needs positive bounds");
  return axis;
}

json axis_json(const SweepAxis& a) {
  return json{{"parameter", a.parameter}, {"min", a.min}, {"max", a.max}, {"steps", a.steps},
              {"scale", a.log ? "log" : "linear"}};
}

std::string convention_name(JointConvention c) {
  return c == JointConvention::kDifferenceSum ? "difference-sum" : "sum-difference";
}

std::string matching_name(BetaMatching m) { return m == BetaMatching::kDisplacement ? "displacement" : "amplifier"; }

bool contains(const std::vector<std::string>& list, const std::string& name) {
  return std::find(list.begin(), list.end(), name) != list.end();
}

}  // namespace

std::string to_string(Protocol protocol) {
  switch (protocol) {
    case Protocol::kEw:
      return "ew";
    case Protocol::kMemory:
      return "memory";
    case Protocol::kSimonDuan:
      return "simon-duan";
  }
  return "unknown";
}

std::vector<double> SweepAxis::values() const {
  std::vector<double> out(static_cast<std::size_t>(steps));
  for (int k = 0; k < steps; ++k) {
    const double t = static_cast<double>(k) / static_cast<double>(steps - 1);
    out[static_cast<std::size_t>(k)] =
        log ? std::exp(std::log(min) + t * (std::log(max) - std::log(min))) : min + t * (max - min);
  }
  // Pin the end points exactly.
  out.front() = min;
  out.back() = max;
  return out;
}

const std::vector<std::string>& sweepable_parameters(Protocol protocol) {
  static const std::vector<std::string> ew{"r",          "eta",         "eta_A",       "eta_B",      "epsilon",
                                           "sigma_star", "phase_var",   "phase_var_1", "phase_var_2", "phase_var_3"};
  static const std::vector<std::string> memory{"eta", "xi", "nu", "sigma_star"};
  static const std::vector<std::string> simon_duan{"r", "eta", "epsilon"};
  switch (protocol) {
    case Protocol::kEw:
      return ew;
    case Protocol::kMemory:
      return memory;
    case Protocol::kSimonDuan:
      return simon_duan;
  }
  return ew;
}

const std::vector<std::string>& region_parameters(Protocol protocol) {
  static const std::vector<std::string> ew{"epsilon", "sigma_star", "r", "eta"};
  static const std::vector<std::string> memory{"eta", "xi", "sigma_star"};
  static const std::vector<std::string> none{};
  switch (protocol) {
    case Protocol::kEw:
      return ew;
    case Protocol::kMemory:
      return memory;
    case Protocol::kSimonDuan:
      return none;
  }
  return none;
}

RunConfig parse_run_config(const json& doc) {
  if (!doc.is_object()) fail("config: top level must be a JSON object");
  if (!doc.contains("protocol") || !doc.at("protocol").is_string()) fail("config.protocol: required string");
  RunConfig cfg;
  const std::string protocol = doc.at("protocol").get<std::string>();
  const std::string where = "config";

  std::set<std::string> allowed{"protocol", "seed", "output", "violation_k", "sweep", "region"};
  if (protocol == "ew") {
    cfg.protocol = Protocol::kEw;
    allowed.insert({"r", "eta_A", "eta_B", "epsilon", "phase_var_1", "phase_var_2", "phase_var_3", "sigma", "priorA",
                    "priorB", "n_alphabet", "n_copies"});
  } else if (protocol == "memory") {
    cfg.protocol = Protocol::kMemory;
    allowed.insert({"eta", "xi", "nu", "sigma", "prior", "mdiep_variant", "joint_convention", "beta_matching",
                    "n_alphabet", "n_copies"});
  } else if (protocol == "simon-duan") {
    cfg.protocol = Protocol::kSimonDuan;
    allowed.insert({"r", "eta", "epsilon", "n_rounds"});
  } else {
    fail("config.protocol: expected 'ew', 'memory' or 'simon-duan', got '" + protocol + "'");
  }
  reject_unknown(doc, allowed, where);

  if (doc.contains("seed")) {
    const json& s = doc.at("seed");
    if (s.is_number_unsigned()) {
      cfg.seed = s.get<std::uint64_t>();
    } else if (s.is_number_integer() && s.get<std::int64_t>() >= 0) {
      cfg.seed = static_cast<std::uint64_t>(s.get<std::int64_t>());
    } else {
      fail("config.seed: expected a non-negative integer");
    }
  }
  cfg.output = string_or(doc, "output", cfg.output, where);
  cfg.violation_k = number_or(doc, "violation_k", cfg.violation_k, where);
  if (!(cfg.violation_k >= 0.0) || !std::isfinite(cfg.violation_k)) fail("config.violation_k: must be >= 0");

  auto parse_priors = [&](const char* single_key, std::vector<PriorSpec*> targets, std::vector<const char*> keys) {
    const bool has_sigma = doc.contains("sigma");
    bool has_explicit = false;
    for (const char* k : keys) has_explicit = has_explicit || doc.contains(k);
    if (has_sigma && has_explicit) fail("config: give either 'sigma' or explicit priors, not both");
    if (has_sigma) {
      const double s = get_number(doc, "sigma", where);
      for (PriorSpec* p : targets) *p = PriorSpec::symmetric(s);
    } else {
      for (std::size_t i = 0; i < keys.size(); ++i) {
        if (doc.contains(keys[i])) *targets[i] = parse_prior(doc.at(keys[i]), where + "." + keys[i]);
      }
    }
    (void)single_key;
  };

  switch (cfg.protocol) {
    case Protocol::kEw: {
      EwConfig& ew = cfg.ew;
      ew.r = number_or(doc, "r", ew.r, where);
      ew.eta_A = number_or(doc, "eta_A", ew.eta_A, where);
      ew.eta_B = number_or(doc, "eta_B", ew.eta_B, where);
      if (doc.contains("epsilon")) {
        const json& e = doc.at("epsilon");
        if (e.is_string()) {
          if (e.get<std::string>() != "opt") fail("config.epsilon: expected a number or \"opt\"");
          cfg.epsilon_opt = true;
        } else {
          ew.epsilon = get_number(doc, "epsilon", where);
        }
      }
      ew.phase_noise.theta1 = number_or(doc, "phase_var_1", 0.0, where);
      ew.phase_noise.theta2 = number_or(doc, "phase_var_2", 0.0, where);
      ew.phase_noise.theta3 = number_or(doc, "phase_var_3", 0.0, where);
      parse_priors("sigma", {&ew.priorA, &ew.priorB}, {"priorA", "priorB"});
      ew.n_alphabet = int_or(doc, "n_alphabet", ew.n_alphabet, where);
      ew.n_copies = int_or(doc, "n_copies", ew.n_copies, where);
      break;
    }
    case Protocol::kMemory: {
      MemoryConfig& m = cfg.memory;
      m.eta = number_or(doc, "eta", m.eta, where);
      m.xi = number_or(doc, "xi", m.xi, where);
      m.nu = number_or(doc, "nu", m.nu, where);
      parse_priors("sigma", {&m.prior}, {"prior"});
      try {
        cfg.mdiep_variant = parse_mdiep_variant(string_or(doc, "mdiep_variant", "plus", where));
      } catch (const std::invalid_argument& e) {
        fail(std::string("config.mdiep_variant: ") + e.what());
      }
      const std::string conv = string_or(doc, "joint_convention", "difference-sum", where);
      if (conv == "difference-sum") {
        m.convention = JointConvention::kDifferenceSum;
      } else if (conv == "sum-difference") {
        m.convention = JointConvention::kSumDifference;
      } else {
        fail("config.joint_convention: expected 'difference-sum' or 'sum-difference'");
      }
      const std::string match = string_or(doc, "beta_matching", "displacement", where);
      if (match == "displacement") {
        m.matching = BetaMatching::kDisplacement;
      } else if (match == "amplifier") {
        m.matching = BetaMatching::kAmplifier;
      } else {
        fail("config.beta_matching: expected 'displacement' or 'amplifier'");
      }
      m.n_alphabet = int_or(doc, "n_alphabet", m.n_alphabet, where);
      m.n_copies = int_or(doc, "n_copies", m.n_copies, where);
      break;
    }
    case Protocol::kSimonDuan: {
      SimonDuanConfig& sd = cfg.simon_duan;
      sd.r = number_or(doc, "r", sd.r, where);
      sd.eta = number_or(doc, "eta", sd.eta, where);
      sd.epsilon = number_or(doc, "epsilon", sd.epsilon, where);
      if (doc.contains("n_rounds")) {
        const json& n = doc.at("n_rounds");
        if (!n.is_number_integer() || n.get<std::int64_t>() < 0) fail("config.n_rounds: expected a positive integer");
        sd.n_rounds = n.get<std::uint64_t>();
      }
      break;
    }
  }

  if (doc.contains("sweep")) {
    const json& sweep = doc.at("sweep");
    if (!sweep.is_array()) fail("config.sweep: expected an array of axes");
    std::set<std::string> seen;
    for (std::size_t i = 0; i < sweep.size(); ++i) {
      const std::string w = "config.sweep[" + std::to_string(i) + "]";
      SweepAxis axis = parse_axis(sweep[i], w, false);
      if (!contains(sweepable_parameters(cfg.protocol), axis.parameter)) {
        fail(w + ".parameter: '" + axis.parameter + "' cannot be swept for protocol " + protocol);
      }
      if (!seen.insert(axis.parameter).second) fail(w + ".parameter: '" + axis.parameter + "' swept twice");
      if (axis.parameter == "epsilon" && cfg.epsilon_opt) fail(w + ": cannot sweep epsilon when epsilon is \"opt\"");
      cfg.sweep.push_back(axis);
    }
  }

  if (doc.contains("region")) {
    const json& region = doc.at("region");
    if (!region.is_object()) fail("config.region: expected an object");
    reject_unknown(region, {"axis1", "axis2", "spot_checks"}, "config.region");
    if (!region.contains("axis1") || !region.contains("axis2")) fail("config.region: axis1 and axis2 are required");
    RegionSpec spec;
    spec.axis1 = parse_axis(region.at("axis1"), "config.region.axis1", true);
    spec.axis2 = parse_axis(region.at("axis2"), "config.region.axis2", true);
    for (const SweepAxis* axis : {&spec.axis1, &spec.axis2}) {
      if (!contains(region_parameters(cfg.protocol), axis->parameter)) {
        fail("config.region: '" + axis->parameter + "' is not a region axis for protocol " + protocol);
      }
    }
    if (spec.axis1.parameter == spec.axis2.parameter) fail("config.region: axes must differ");
    if (region.contains("spot_checks")) {
      const json& spots = region.at("spot_checks");
      if (!spots.is_array()) fail("config.region.spot_checks: expected an array of [i, j]");
      for (const json& s : spots) {
        if (!s.is_array() || s.size() != 2 || !s[0].is_number_integer() || !s[1].is_number_integer()) {
          fail("config.region.spot_checks: each entry must be [i, j]");
        }
        const int i = s[0].get<int>();
        const int j = s[1].get<int>();
        if (i < 0 || i >= spec.axis1.steps || j < 0 || j >= spec.axis2.steps) {
          fail("config.region.spot_checks: cell index out of range");
        }
        spec.spot_checks.emplace_back(i, j);
      }
    }
    cfg.region = spec;
  }

  finalize(cfg);
  return cfg;
}

RunConfig load_run_config(const std::filesystem::path& path) {
  std::ifstream in(path);
  if (!in) throw ConfigError("cannot open config file '" + path.string() + "'");
  json doc;
  try {
    doc = json::parse(in);
  } catch (const json::parse_error& e) {
    // e.byte is an offset into the stream; translate to line/column.
    std::ifstream again(path);
    std::string text((std::istreambuf_iterator<char>(again)), std::istreambuf_iterator<char>());
    std::size_t line = 1;
    std::size_t col = 1;
    for (std::size_t i = 0; i + 1 < e.byte && i < text.size(); ++i) {
      if (text[i] == '\n') {
        ++line;
        col = 1;
      } else {
        ++col;
      }
    }
    throw ConfigError(path.string() + ":" + std::to_string(line) + ":" + std::to_string(col) +
                      ": JSON syntax error: " + e.what());
  }
  return parse_run_config(doc);
}

json to_json(const RunConfig& c) {
  json doc;
  doc["protocol"] = to_string(c.protocol);
  doc["seed"] = c.seed;
  doc["output"] = c.output;
  doc["violation_k"] = c.violation_k;
  switch (c.protocol) {
    case Protocol::kEw:
      doc["r"] = c.ew.r;
      doc["eta_A"] = c.ew.eta_A;
      doc["eta_B"] = c.ew.eta_B;
      if (c.epsilon_opt) {
        doc["epsilon"] = "opt";
      } else {
        doc["epsilon"] = c.ew.epsilon;
      }
      doc["phase_var_1"] = c.ew.phase_noise.theta1;
      doc["phase_var_2"] = c.ew.phase_noise.theta2;
      doc["phase_var_3"] = c.ew.phase_noise.theta3;
      doc["priorA"] = prior_json(c.ew.priorA);
      doc["priorB"] = prior_json(c.ew.priorB);
      doc["n_alphabet"] = c.ew.n_alphabet;
      doc["n_copies"] = c.ew.n_copies;
      break;
    case Protocol::kMemory:
      doc["eta"] = c.memory.eta;
      doc["xi"] = c.memory.xi;
      doc["nu"] = c.memory.nu;
      doc["prior"] = prior_json(c.memory.prior);
      doc["mdiep_variant"] = std::string(mdicert::to_string(c.mdiep_variant));
      doc["joint_convention"] = convention_name(c.memory.convention);
      doc["beta_matching"] = matching_name(c.memory.matching);
      doc["n_alphabet"] = c.memory.n_alphabet;
      doc["n_copies"] = c.memory.n_copies;
      break;
    case Protocol::kSimonDuan:
      doc["r"] = c.simon_duan.r;
      doc["eta"] = c.simon_duan.eta;
      doc["epsilon"] = c.simon_duan.epsilon;
      doc["n_rounds"] = c.simon_duan.n_rounds;
      break;
  }
  if (!c.sweep.empty()) {
    json sweep = json::array();
    for (const auto& a : c.sweep) sweep.push_back(axis_json(a));
    doc["sweep"] = sweep;
  }
  if (c.region) {
    json spots = json::array();
    for (const auto& [i, j] : c.region->spot_checks) spots.push_back(json::array({i, j}));
    doc["region"] = json{{"axis1", axis_json(c.region->axis1)}, {"axis2", axis_json(c.region->axis2)},
                         {"spot_checks", spots}};
  }
  return doc;
}

void apply_parameter(RunConfig& c, const std::string& name, double value) {
  if (!contains(sweepable_parameters(c.protocol), name)) {
    fail("parameter '" + name + "' does not apply to protocol " + to_string(c.protocol));
  }
  switch (c.protocol) {
    case Protocol::kEw:
      if (name == "r") c.ew.r = value;
      if (name == "eta") c.ew.eta_A = c.ew.eta_B = value;
      if (name == "eta_A") c.ew.eta_A = value;
      if (name == "eta_B") c.ew.eta_B = value;
      if (name == "epsilon") c.ew.epsilon = value;
      if (name == "sigma_star") c.ew.priorA = c.ew.priorB = PriorSpec::symmetric(value);
      if (name == "phase_var") c.ew.phase_noise = {value, value, value};
      if (name == "phase_var_1") c.ew.phase_noise.theta1 = value;
      if (name == "phase_var_2") c.ew.phase_noise.theta2 = value;
      if (name == "phase_var_3") c.ew.phase_noise.theta3 = value;
      break;
    case Protocol::kMemory:
      if (name == "eta") c.memory.eta = value;
      if (name == "xi") c.memory.xi = value;
      if (name == "nu") c.memory.nu = value;
      if (name == "sigma_star") c.memory.prior = PriorSpec::symmetric(value);
      break;
    case Protocol::kSimonDuan:
      if (name == "r") c.simon_duan.r = value;
      if (name == "eta") c.simon_duan.eta = value;
      if (name == "epsilon") c.simon_duan.epsilon = value;
      break;
  }
}

double parameter_value(const RunConfig& c, const std::string& name) {
  switch (c.protocol) {
    case Protocol::kEw:
      if (name == "r") return c.ew.r;
      if (name == "eta" || name == "eta_A") return c.ew.eta_A;
      if (name == "eta_B") return c.ew.eta_B;
      if (name == "epsilon") return c.ew.epsilon;
      if (name == "sigma_star") return locc_threshold(c.ew.priorA, c.ew.priorB).sigma_star;
      if (name == "phase_var" || name == "phase_var_1") return c.ew.phase_noise.theta1;
      if (name == "phase_var_2") return c.ew.phase_noise.theta2;
      if (name == "phase_var_3") return c.ew.phase_noise.theta3;
      break;
    case Protocol::kMemory:
      if (name == "eta") return c.memory.eta;
      if (name == "xi") return c.memory.xi;
      if (name == "nu") return c.memory.nu;
      if (name == "sigma_star") return locc_threshold(c.memory.prior, c.memory.prior).sigma_star;
      break;
    case Protocol::kSimonDuan:
      if (name == "r") return c.simon_duan.r;
      if (name == "eta") return c.simon_duan.eta;
      if (name == "epsilon") return c.simon_duan.epsilon;
      break;
  }
  fail("parameter '" + name + "' does not apply to protocol " + to_string(c.protocol));
}

void finalize(RunConfig& c) {
  c.ew.seed = c.seed;
  c.memory.seed = c.seed;
  c.simon_duan.seed = c.seed;
  try {
    switch (c.protocol) {
      case Protocol::kEw:
        if (c.epsilon_opt) {
          c.ew.epsilon = epsilon_opt(locc_threshold(c.ew.priorA, c.ew.priorB).sigma_star, c.ew.r);
        }
        c.ew.validate();
        break;
      case Protocol::kMemory:
        c.memory.validate();
        break;
      case Protocol::kSimonDuan:
        if (!(c.simon_duan.eta > 0.0 && c.simon_duan.eta <= 1.0) || !(c.simon_duan.r >= 0.0) ||
            !(c.simon_duan.epsilon >= 0.0) || c.simon_duan.n_rounds < 4) {
          throw std::invalid_argument("simon-duan: need r >= 0, eta in (0, 1], epsilon >= 0, n_rounds >= 4");
        }
        break;
    }
  } catch (const std::invalid_argument& e) {
    throw InfeasibleError(e.what());
  } catch (const std::domain_error& e) {
    throw InfeasibleError(e.what());
  }
}

std::vector<RunConfig> expand_sweep(const RunConfig& base) {
  std::vector<RunConfig> points{base};
  for (const SweepAxis& axis : base.sweep) {
    std::vector<RunConfig> next;
    const auto values = axis.values();
    next.reserve(points.size() * values.size());
    for (const RunConfig& p : points) {
      for (double v : values) {
        RunConfig q = p;
        apply_parameter(q, axis.parameter, v);
        next.push_back(std::move(q));
      }
    }
    points = std::move(next);
  }
  for (RunConfig& p : points) finalize(p);
  return points;
}

}  // namespace mdicert::experiments
