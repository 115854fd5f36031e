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

// Monte Carlo simulation of the two MDI protocols on the Gaussian engine.
//
// Entanglement witness (EW): Alice's coherent state |alpha> and TMSV mode A
// meet on a balanced splitter; x is read on one port and p on the other.
// Bob does the same with |beta> and mode B. Outcomes (a1, a2, b1, b2) are
// signed so that a1 - b1 estimates alpha_x - beta_x and a2 + b2 estimates
// alpha_p + beta_p.
//
// Memory (EP): |alpha> passes a lossy, noisy memory and Eve's amplifier,
// |beta> is rescaled to match, and the two are Bell-measured.
//
// Randomness: pair i of a run draws its alphabet from sub-stream
// ("alphabet", i), its homodyne noise from ("quantum", i) and its phase noise
// from ("phase", i) of the configured seed. Results do not depend on the
// number of worker threads.

#include <array>
#include <complex>
#include <cstdint>
#include <utility>

#include "mdicert/gaussian_state.hpp"
#include "mdicert/metrology.hpp"
#include "mdicert/random.hpp"

namespace mdicert {

struct EwConfig {
  double r = 0.0;
  double eta_A = 1.0;
  double eta_B = 1.0;
  PriorSpec priorA;
  PriorSpec priorB;
  double epsilon = 1.0;
  PhaseNoiseVariances phase_noise;
  int n_alphabet = 1000;
  int n_copies = 100;
  std::uint64_t seed = 1;

  void validate() const;
};

/// Which joint variables the memory Bell measurement targets.
enum class JointConvention {
  kDifferenceSum,  // gamma = (alpha_x - beta_x, alpha_p + beta_p)
  kSumDifference,  // gamma = (alpha_x + beta_x, alpha_p - beta_p)
};

/// How |beta> is brought to the amplitude sqrt(nu eta) beta of the stored
/// state. Both coincide with a pure-loss channel while nu * eta <= 1.
enum class BetaMatching {
  kDisplacement,  // coherent state of amplitude sqrt(nu eta) beta
  kAmplifier,     // phase-insensitive amplifier of gain nu * eta above 1
};

struct MemoryConfig {
  double eta = 1.0;
  double xi = 0.0;
  double nu = 1.0;
  PriorSpec prior;
  JointConvention convention = JointConvention::kDifferenceSum;
  BetaMatching matching = BetaMatching::kDisplacement;
  int n_alphabet = 1000;
  int n_copies = 100;
  std::uint64_t seed = 1;

  void validate() const;
};

struct EstimateOptions {
  int threads = 1;
  double violation_k = 3.0;
};

struct WitnessEstimate {
  double value = 0.0;
  double std_error = 0.0;
  double threshold = 0.0;
  double sigma_star = 0.0;
  double k = 3.0;
  std::uint64_t n_total = 0;

  bool violated() const { return value + k * std_error < threshold; }
};

struct EwOutcomes {
  double a1, a2, b1, b2;
};

struct JointTargets {
  double x, p;
};

/// Independent draws alpha ~ priorA, beta ~ priorB.
std::pair<std::complex<double>, std::complex<double>> sample_pair(const PriorSpec& priorA, const PriorSpec& priorB,
                                                                  RandomStream& rng);

/// Four-mode state right before the station detectors, for given phases.
/// Mode order: 0 = Alice port (a+A)/sqrt2, 1 = (A-a)/sqrt2, 2 = (B-b)/sqrt2,
/// 3 = Bob port (b+B)/sqrt2.
GaussianState ew_detector_state(const EwConfig& cfg, std::complex<double> alpha, std::complex<double> beta,
                                double theta1, double theta2, double theta3);

/// One round, including freshly sampled phase noise.
EwOutcomes run_ew_round(const EwConfig& cfg, std::complex<double> alpha, std::complex<double> beta,
                        RandomStream& rng);

WitnessEstimate estimate_mdiew(const EwConfig& cfg, const EstimateOptions& options = {});

/// Closed form of the simulated EW model: arbitrary arm losses, phase noise,
/// rescaling, and asymmetric priors.
double ew_model_expected(const EwConfig& cfg);

/// Per-quadrature prior variance of the joint variables, averaged over x
/// and p. Equals sigma^2 for symmetric identical priors.
double joint_prior_variance(const PriorSpec& priorA, const PriorSpec& priorB);

/// Two-mode state at the Bell-measurement splitter output.
/// Mode 0 = (a+b)/sqrt2, mode 1 = (b-a)/sqrt2.
GaussianState memory_detector_state(const MemoryConfig& cfg, std::complex<double> alpha, std::complex<double> beta);

JointTargets memory_targets(JointConvention convention, std::complex<double> alpha, std::complex<double> beta);

/// (g_x, g_p) for one round.
std::pair<double, double> run_memory_round(const MemoryConfig& cfg, std::complex<double> alpha,
                                           std::complex<double> beta, RandomStream& rng);

WitnessEstimate estimate_mdiep(const MemoryConfig& cfg, const EstimateOptions& options = {});

struct SimonDuanConfig {
  double r = 0.0;
  double eta = 1.0;
  double epsilon = 1.0;
  std::uint64_t n_rounds = 100000;
  std::uint64_t seed = 1;
};

struct SimonDuanEstimate {
  double value = 0.0;
  double std_error = 0.0;
  double var_x_difference = 0.0;
  double var_p_sum = 0.0;
  std::uint64_t n_total = 0;
};

/// Device-dependent Simon-Duan witness from direct homodyne on the lossy
/// TMSV: half the rounds read (x_A, x_B), the other half (p_A, p_B).
SimonDuanEstimate estimate_simon_duan(const SimonDuanConfig& cfg, int threads = 1);

}  // namespace mdicert
