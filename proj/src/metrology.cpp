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

#include "mdicert/metrology.hpp"

#include <cmath>
#include <stdexcept>

namespace mdicert {

namespace {

void require(bool ok, const char* message) {
  if (!ok) throw std::invalid_argument(message);
}

bool finite_nonneg(double x) { return std::isfinite(x) && x >= 0.0; }

void check_eta(double eta) { require(std::isfinite(eta) && eta > 0.0 && eta <= 1.0, "eta must lie in (0, 1]"); }

}  // namespace

void PriorSpec::validate() const {
  require(std::isfinite(sigma_x) && sigma_x > 0.0, "PriorSpec: sigma_x must be finite and > 0");
  require(std::isfinite(sigma_p) && sigma_p > 0.0, "PriorSpec: sigma_p must be finite and > 0");
}

double min_error_bound(const PriorSpec& prior) {
  prior.validate();
  return 1.0 / (1.0 + 0.5 / (prior.sigma_x * prior.sigma_x) + 0.5 / (prior.sigma_p * prior.sigma_p));
}

BoundReport locc_threshold(const PriorSpec& alice, const PriorSpec& bob) {
  BoundReport report;
  report.v_alice = min_error_bound(alice);
  report.v_bob = min_error_bound(bob);
  report.threshold = report.v_alice + report.v_bob;
  if (!(report.threshold > 0.0 && report.threshold < 2.0)) {
    throw std::domain_error("locc_threshold: threshold outside (0, 2)");
  }
  report.sigma_star = std::sqrt(report.threshold / (2.0 - report.threshold));
  return report;
}

double symmetric_threshold(double sigma) {
  require(finite_nonneg(sigma), "sigma must be finite and >= 0");
  const double s2 = sigma * sigma;
  return 2.0 * s2 / (1.0 + s2);
}

double mdiew_expected(double r, double eta) {
  require(finite_nonneg(r), "r must be finite and >= 0");
  check_eta(eta);
  return 2.0 + eta * std::expm1(-2.0 * r);
}

bool ew_detectable(double r, double eta, double sigma) {
  require(finite_nonneg(r), "r must be finite and >= 0");
  check_eta(eta);
  require(sigma > 0.0 && !std::isnan(sigma), "sigma must be > 0");
  return eta * -std::expm1(-2.0 * r) > 2.0 / (1.0 + sigma * sigma);
}

double rescaled_error_expected(double epsilon, double sigma_star, double r) {
  require(finite_nonneg(epsilon), "epsilon must be finite and >= 0");
  require(finite_nonneg(sigma_star), "sigma* must be finite and >= 0");
  require(finite_nonneg(r), "r must be finite and >= 0");
  const double e2 = epsilon * epsilon;
  const double bias = epsilon - 1.0;
  return e2 * std::exp(-2.0 * r) + e2 + 2.0 * bias * bias * sigma_star * sigma_star;
}

double epsilon_opt(double sigma_star, double r) {
  require(sigma_star >= 0.0 && !std::isnan(sigma_star), "sigma* must be >= 0");
  require(finite_nonneg(r), "r must be finite and >= 0");
  if (std::isinf(sigma_star)) return 1.0;
  const double s2 = 2.0 * sigma_star * sigma_star;
  return s2 / (s2 + std::exp(-2.0 * r) + 1.0);
}

double simon_duan_rescaled(double epsilon) {
  require(finite_nonneg(epsilon), "epsilon must be finite and >= 0");
  return 2.0 * epsilon * epsilon;
}

std::string_view to_string(MdiepVariant variant) { return variant == MdiepVariant::kPlus ? "plus" : "minus"; }

MdiepVariant parse_mdiep_variant(std::string_view name) {
  if (name == "plus") return MdiepVariant::kPlus;
  if (name == "minus") return MdiepVariant::kMinus;
  throw std::invalid_argument("unknown mdiep variant '" + std::string(name) + "' (expected plus or minus)");
}

double mdiep_expected(double eta, double xi, MdiepVariant variant) {
  check_eta(eta);
  require(finite_nonneg(xi), "xi must be finite and >= 0");
  const double cross = variant == MdiepVariant::kPlus ? eta * xi : -eta * xi;
  return (2.0 + xi + cross) / (2.0 * eta);
}

bool ep_detectable(double eta, double xi, double sigma, MdiepVariant variant) {
  require(sigma > 0.0 && !std::isnan(sigma), "sigma must be > 0");
  const double threshold = std::isinf(sigma) ? 2.0 : symmetric_threshold(sigma);
  return mdiep_expected(eta, xi, variant) < threshold;
}

double phase_noise_error_expected(double epsilon, double r, double eta, const PhaseNoiseVariances& noise,
                                  double sigma) {
  require(finite_nonneg(epsilon), "epsilon must be finite and >= 0");
  require(finite_nonneg(r), "r must be finite and >= 0");
  check_eta(eta);
  require(finite_nonneg(noise.theta1) && finite_nonneg(noise.theta2) && finite_nonneg(noise.theta3),
          "phase-noise variances must be finite and >= 0");
  require(finite_nonneg(sigma), "sigma must be finite and >= 0");
  const double ch = std::cosh(2.0 * r);
  const double sh = std::sinh(2.0 * r);
  const double d1 = std::exp(-2.0 * noise.theta1);
  const double d3 = std::exp(-0.5 * noise.theta3);
  const double d2 = std::exp(-0.5 * noise.theta2);
  const double e2 = epsilon * epsilon;
  const double tmsv_part = 0.5 * (1.0 + d1) * (ch - d3 * sh) + 0.5 * (1.0 - d1) * (ch + d3 * sh);
  return e2 * eta * tmsv_part + (1.0 - eta) * e2 + e2 + 2.0 * sigma * sigma * (1.0 + e2 - 2.0 * epsilon * d2);
}

OpoVariances opo_variances(double cavity_bandwidth, double sideband, double pump_ratio, double eta) {
  require(std::isfinite(cavity_bandwidth) && cavity_bandwidth > 0.0, "cavity bandwidth must be > 0");
  require(std::isfinite(sideband) && sideband > 0.0, "sideband frequency must be > 0");
  require(std::isfinite(pump_ratio) && pump_ratio >= 0.0, "pump ratio must be >= 0");
  if (pump_ratio >= 1.0) throw std::domain_error("opo_variances: pump ratio >= 1 is above threshold");
  require(std::isfinite(eta) && eta >= 0.0 && eta <= 1.0, "eta must lie in [0, 1]");
  const double zeta = cavity_bandwidth * std::sqrt(pump_ratio);
  const double w2 = sideband * sideband;
  const double num = 2.0 * eta * cavity_bandwidth * zeta;
  const double plus = cavity_bandwidth + zeta;
  const double minus = cavity_bandwidth - zeta;
  return {0.5 - num / (plus * plus + w2), 0.5 + num / (minus * minus + w2)};
}

EfficiencyBudget efficiency_budget(std::vector<EfficiencyStage> stages) {
  EfficiencyBudget budget;
  budget.total = 1.0;
  for (const auto& stage : stages) {
    if (!(stage.efficiency > 0.0 && stage.efficiency <= 1.0)) {
      throw std::invalid_argument("efficiency_budget: stage '" + stage.name + "' outside (0, 1]");
    }
    budget.total *= stage.efficiency;
  }
  budget.stages = std::move(stages);
  return budget;
}

EfficiencyBudget reference_setup_budget(bool extra_loss) {
  std::vector<EfficiencyStage> stages{
      {"opo_escape", 0.975},
      {"fiber_coupling", 0.87},
      {"transmission", 0.22},
  };
  if (extra_loss) stages.push_back({"unexplained_loss", 0.8});
  return efficiency_budget(std::move(stages));
}

}  // namespace mdicert
