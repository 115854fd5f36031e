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

#pragma once

// Run configuration: a single JSON document per run. See SCHEMA.md for the
// key list. Unknown keys are rejected.

#include <cstdint>
#include <filesystem>
#include <optional>
#include <stdexcept>
#include <string>
#include <vector>

#include <json.hpp>

#include "mdicert/metrology.hpp"
#include "mdicert/protocols.hpp"

namespace mdicert::experiments {

/// Malformed configuration (CLI exit code 2).
class ConfigError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

/// Well-formed configuration describing an unphysical or unsupported
/// parameter point (CLI exit code 3).
class InfeasibleError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

enum class Protocol { kEw, kMemory, kSimonDuan };

std::string to_string(Protocol protocol);

struct SweepAxis {
  std::string parameter;
  double min = 0.0;
  double max = 1.0;
  int steps = 2;
  bool log = false;

  std::vector<double> values() const;
};

struct RegionSpec {
  SweepAxis axis1;
  SweepAxis axis2;
  std::vector<std::pair<int, int>> spot_checks;
};

struct RunConfig {
  Protocol protocol = Protocol::kEw;
  EwConfig ew;
  MemoryConfig memory;
  SimonDuanConfig simon_duan;
  /// Replace epsilon by epsilon_opt(sigma*, r) at every point.
  bool epsilon_opt = false;
  MdiepVariant mdiep_variant = MdiepVariant::kPlus;
  std::vector<SweepAxis> sweep;
  std::optional<RegionSpec> region;
  std::string output = "out";
  std::uint64_t seed = 1;
  double violation_k = 3.0;
};

/// Parameters that may be swept or used as region axes for a protocol.
const std::vector<std::string>& sweepable_parameters(Protocol protocol);
const std::vector<std::string>& region_parameters(Protocol protocol);

RunConfig parse_run_config(const nlohmann::json& doc);
/// Reads and parses a config file; JSON syntax errors carry line/column.
RunConfig load_run_config(const std::filesystem::path& path);

/// Canonical form: every field explicit. parse_run_config(to_json(c))
/// reproduces c.
nlohmann::json to_json(const RunConfig& config);

/// Sets a named parameter. Throws ConfigError for unknown names.
void apply_parameter(RunConfig& config, const std::string& name, double value);
/// Current value of a named parameter.
double parameter_value(const RunConfig& config, const std::string& name);

/// Every sweep point (Cartesian product, first axis outermost) as a fully
/// resolved configuration. Without sweep axes, the base config alone.
std::vector<RunConfig> expand_sweep(const RunConfig& config);

/// Applies the seed to every protocol block and resolves epsilon = "opt".
void finalize(RunConfig& config);

}  // namespace mdicert::experiments
