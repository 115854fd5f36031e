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

#include <filesystem>
#include <iosfwd>
#include <string>
#include <vector>

#include <json.hpp>

#include "mdicert/experiments/config.hpp"
#include "mdicert/experiments/region.hpp"

namespace mdicert::experiments {

struct PointResult {
  RunConfig config;
  WitnessEstimate estimate;
  double expected = 0.0;
};

/// Closed-form expectation of the witness a run estimates.
double expected_witness(const RunConfig& config);

PointResult run_point(const RunConfig& config, int threads);
std::vector<PointResult> run_sweep(const RunConfig& config, int threads);

extern const char* const kResultsHeader;
extern const char* const kRegionHeader;
extern const char* const kContourHeader;
extern const char* const kSpotCheckHeader;
extern const char* const kOracleHeader;
extern const char* const kCalibrationHeader;

std::string format_double(double value);

void write_results_csv(std::ostream& out, const std::vector<PointResult>& results);

struct OracleComparison {
  WitnessEstimate engine;
  WitnessEstimate oracle;
  double combined_se = 0.0;
  double z = 0.0;
  bool pass = false;
  // Memory only: oracle z-scores against both closed-form variants.
  double z_plus = 0.0;
  double z_minus = 0.0;
  std::string matched_variant;
  double variant_separation = 0.0;
};

OracleComparison compare_with_oracle(const RunConfig& config, int threads, double n_se = 4.0);

// Subcommands. Each writes its files under out_dir and returns the exit code.
int cmd_run(RunConfig config, const std::filesystem::path& out_dir, int threads);
int cmd_region(RunConfig config, const std::filesystem::path& out_dir, int threads);
int cmd_oracle_check(RunConfig config, const std::filesystem::path& out_dir, int threads);
int cmd_calibrate(const nlohmann::json& config, const std::filesystem::path& out_dir);

}  // namespace mdicert::experiments
