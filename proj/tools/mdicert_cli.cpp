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

#include <cstdint>
#include <cstdlib>
#include <exception>
#include <filesystem>
#include <fstream>
#include <iostream>
#include <optional>
#include <string>

#include <CLI11.hpp>
#include <json.hpp>

#include "mdicert/experiments/config.hpp"
#include "mdicert/experiments/runner.hpp"
#include "mdicert/kernels.hpp"

namespace {

namespace ex = mdicert::experiments;

constexpr int kExitOk = 0;
constexpr int kExitConfig = 2;
constexpr int kExitInfeasible = 3;
constexpr int kExitInternal = 4;

struct Common {
  std::string config;
  std::string out;
  std::optional<std::uint64_t> seed;
  std::optional<double> k;
  int threads = 1;
  std::string isa = "auto";
};

void add_common(CLI::App* cmd, Common& c, bool with_k) {
  cmd->add_option("--config", c.config, "JSON configuration file")->required();
  cmd->add_option("--out", c.out, "output directory (overrides MDICERT_OUTPUT_DIR and the config)");
  cmd->add_option("--seed", c.seed, "override the config seed");
  cmd->add_option("--threads", c.threads, "worker threads")->check(CLI::Range(1, 1024));
  if (with_k) cmd->add_option("--k", c.k, "violation margin in standard errors")->check(CLI::NonNegativeNumber);
  cmd->add_option("--isa", c.isa, "kernel variant")->check(CLI::IsMember({"auto", "scalar", "avx2"}));
}

std::filesystem::path output_dir(const Common& c, const std::string& from_config) {
  if (!c.out.empty()) return c.out;
  if (const char* env = std::getenv("MDICERT_OUTPUT_DIR"); env != nullptr && *env != '\0') return env;
  return from_config;
}

void select_isa(const std::string& isa) {
  if (isa == "scalar") mdicert::kernels::select(mdicert::kernels::Isa::kScalar);
  if (isa == "avx2") {
    try {
      mdicert::kernels::select(mdicert::kernels::Isa::kAvx2);
    } catch (const std::exception& e) {
      throw ex::ConfigError(std::string("--isa avx2: ") + e.what());
    }
  }
}

ex::RunConfig load(const Common& c) {
  ex::RunConfig cfg = ex::load_run_config(c.config);
  if (c.seed) cfg.seed = *c.seed;
  if (c.k) cfg.violation_k = *c.k;
  cfg.output = output_dir(c, cfg.output).string();
  ex::finalize(cfg);
  return cfg;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"Measurement-device-independent certification of CV entanglement and quantum memories"};
  app.require_subcommand(1);
  Common run_opts, region_opts, oracle_opts, cal_opts;
  CLI::App* run = app.add_subcommand("run", "estimate witnesses over a parameter sweep");
  CLI::App* region = app.add_subcommand("region", "closed-form violation region with zero contour");
  CLI::App* oracle = app.add_subcommand("oracle-check", "compare the engine with the independent oracle");
  CLI::App* calibrate = app.add_subcommand("calibrate", "fit the modulator response");
  add_common(run, run_opts, true);
  add_common(region, region_opts, true);
  add_common(oracle, oracle_opts, true);
  add_common(calibrate, cal_opts, false);

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    const int code = app.exit(e);
    return code == 0 ? kExitOk : kExitConfig;
  }

  try {
    if (*run) {
      select_isa(run_opts.isa);
      const auto cfg = load(run_opts);
      return ex::cmd_run(cfg, cfg.output, run_opts.threads);
    }
    if (*region) {
      select_isa(region_opts.isa);
      const auto cfg = load(region_opts);
      return ex::cmd_region(cfg, cfg.output, region_opts.threads);
    }
    if (*oracle) {
      select_isa(oracle_opts.isa);
      const auto cfg = load(oracle_opts);
      return ex::cmd_oracle_check(cfg, cfg.output, oracle_opts.threads);
    }
    if (*calibrate) {
      std::ifstream in(cal_opts.config);
      if (!in) throw ex::ConfigError("cannot open config file '" + cal_opts.config + "'");
      nlohmann::json doc;
      try {
        doc = nlohmann::json::parse(in);
      } catch (const nlohmann::json::parse_error& e) {
        throw ex::ConfigError(cal_opts.config + ": JSON syntax error: " + e.what());
      }
      if (cal_opts.seed && doc.is_object()) doc["seed"] = *cal_opts.seed;
      std::string from_config = "out";
      if (doc.is_object() && doc.contains("output") && doc["output"].is_string()) {
        from_config = doc["output"].get<std::string>();
      }
      return ex::cmd_calibrate(doc, output_dir(cal_opts, from_config));
    }
  } catch (const ex::ConfigError& e) {
    std::cerr << "config error: " << e.what() << '\n';
    return kExitConfig;
  } catch (const ex::InfeasibleError& e) {
    std::cerr << "infeasible parameters: " << e.what() << '\n';
    return kExitInfeasible;
  } catch (const std::exception& e) {
    std::cerr << "internal error: " << e.what() << '\n';
    return kExitInternal;
  }
  return kExitInternal;
}
