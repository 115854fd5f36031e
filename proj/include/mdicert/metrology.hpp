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

// Closed-form estimation bounds, witness expectations and hardware-budget
// formulas. Everything here is a pure function of its arguments.
//
// Alphabet widths are the density parameters of
//   P(alpha) ~ exp(-alpha_x^2 / sigma_x^2 - alpha_p^2 / sigma_p^2),
// so alpha_x has variance sigma_x^2 / 2 and the quadrature mean
// sqrt(2) alpha_x has variance sigma_x^2.

#include <string>
#include <string_view>
#include <utility>
#include <vector>

namespace mdicert {

/// Gaussian alphabet of one trusted coherent-state source.
struct PriorSpec {
  double sigma_x = 1.0;
  double sigma_p = 1.0;

  static PriorSpec symmetric(double sigma) { return {sigma, sigma}; }
  /// Throws std::invalid_argument unless both widths are finite and > 0.
  void validate() const;
};

struct BoundReport {
  double v_alice = 0.0;
  double v_bob = 0.0;
  double threshold = 0.0;
  double sigma_star = 0.0;
};

/// Minimum summed squared error for estimating (alpha_x, alpha_p):
/// (1 + 1/(2 sigma_x^2) + 1/(2 sigma_p^2))^-1.
double min_error_bound(const PriorSpec& prior);

/// Joint-variable bound for 1-LOCC strategies and the symmetric width that
/// reproduces it.
BoundReport locc_threshold(const PriorSpec& alice, const PriorSpec& bob);

/// 2 v(sigma, sigma) = 2 sigma^2 / (1 + sigma^2)
double symmetric_threshold(double sigma);

/// Expected MDI entanglement witness for a lossy TMSV: 2 + eta (e^{-2r} - 1).
double mdiew_expected(double r, double eta);

/// eta (1 - e^{-2r}) > 2 / (1 + sigma^2), strict.
bool ew_detectable(double r, double eta, double sigma);

/// Witness under a common outcome rescaling epsilon (lossless, no phase noise):
/// eps^2 e^{-2r} + eps^2 + 2 (eps - 1)^2 sigma*^2
double rescaled_error_expected(double epsilon, double sigma_star, double r);

/// Rescaling that minimises rescaled_error_expected.
double epsilon_opt(double sigma_star, double r);

/// Device-dependent Simon-Duan value of a rescaled vacuum: 2 eps^2.
double simon_duan_rescaled(double epsilon);

/// Which of the two published forms of the memory witness to evaluate:
/// kPlus gives (2 + xi + eta xi) / (2 eta), kMinus (2 + xi - eta xi) / (2 eta).
enum class MdiepVariant { kPlus, kMinus };

std::string_view to_string(MdiepVariant variant);
MdiepVariant parse_mdiep_variant(std::string_view name);

double mdiep_expected(double eta, double xi, MdiepVariant variant = MdiepVariant::kPlus);

/// mdiep_expected(eta, xi, variant) < 2 sigma^2 / (1 + sigma^2), strict.
bool ep_detectable(double eta, double xi, double sigma, MdiepVariant variant = MdiepVariant::kPlus);

struct PhaseNoiseVariances {
  double theta1 = 0.0;  // TMSV relative to detectors
  double theta2 = 0.0;  // coherent states relative to detectors
  double theta3 = 0.0;  // between the two squeezers
};

/// Rescaled witness averaged over Gaussian phase noise, equal arm losses.
double phase_noise_error_expected(double epsilon, double r, double eta, const PhaseNoiseVariances& noise,
                                  double sigma);

struct OpoVariances {
  double squeezed = 0.5;
  double antisqueezed = 0.5;
};

/// Sideband variances of a below-threshold OPO with total efficiency eta:
///   1/2 -/+ 2 eta Omega zeta / ((Omega +/- zeta)^2 + omega^2),  zeta = Omega sqrt(P / P_thr).
/// Frequencies share any unit.
OpoVariances opo_variances(double cavity_bandwidth, double sideband, double pump_ratio, double eta);

struct EfficiencyStage {
  std::string name;
  double efficiency;
};

struct EfficiencyBudget {
  std::vector<EfficiencyStage> stages;
  double total = 1.0;
};

/// Product of stage efficiencies, each required to lie in (0, 1].
EfficiencyBudget efficiency_budget(std::vector<EfficiencyStage> stages);

/// Stage values of the entanglement-witness setup (OPO 1 escape, fiber
/// coupling, transmission to the best homodyne). With `extra_loss` the
/// unexplained 20 % loss is appended as a further stage.
EfficiencyBudget reference_setup_budget(bool extra_loss);

}  // namespace mdicert
