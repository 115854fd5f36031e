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

#include "mdicert/protocols.hpp"

#include <algorithm>
#include <cmath>
#include <stdexcept>
#include <string>
#include <vector>

#include "mdicert/kernels.hpp"
#include "mdicert/statistics.hpp"

namespace mdicert {

namespace {

constexpr double kHalf = 0.5;

void require(bool ok, const std::string& message) {
  if (!ok) throw std::invalid_argument(message);
}

bool finite_nonneg(double x) { return std::isfinite(x) && x >= 0.0; }
bool valid_eta(double eta) { return std::isfinite(eta) && eta > 0.0 && eta <= 1.0; }

bool has_phase_noise(const PhaseNoiseVariances& v) { return v.theta1 > 0.0 || v.theta2 > 0.0 || v.theta3 > 0.0; }

struct Phases {
  double theta1, theta2, theta3;
};

Phases draw_phases(const PhaseNoiseVariances& v, RandomStream& rng) {
  const double z1 = rng.normal();
  const double z2 = rng.normal();
  const double z3 = rng.normal();
  return {std::sqrt(v.theta1) * z1, std::sqrt(v.theta2) * z2, std::sqrt(v.theta3) * z3};
}

// Readout order (x on Alice port, p on Alice's other port, x on Bob port,
// p on Bob's other port); see ew_detector_state for the mode layout.
const QuadratureSelection& ew_selection() {
  static const QuadratureSelection selection{
      {0, Quadrature::kX}, {1, Quadrature::kP}, {3, Quadrature::kX}, {2, Quadrature::kP}};
  return selection;
}

struct EwWeights {
  std::array<double, 4> x;
  std::array<double, 4> p;
};

// a1 = eps*y0, a2 = -eps*y1, b1 = eps*y2, b2 = -eps*y3.
EwWeights ew_weights(double epsilon) {
  return {{epsilon, 0.0, -epsilon, 0.0}, {0.0, -epsilon, 0.0, -epsilon}};
}

struct MemoryReadout {
  QuadratureSelection selection;
  double sign_x;
  double sign_p;
};

MemoryReadout memory_readout(JointConvention convention) {
  // Port 0 carries (a+b)/sqrt2, port 1 carries (b-a)/sqrt2.
  if (convention == JointConvention::kSumDifference) {
    return {QuadratureSelection{{0, Quadrature::kX}, {1, Quadrature::kP}}, 1.0, -1.0};
  }
  return {QuadratureSelection{{1, Quadrature::kX}, {0, Quadrature::kP}}, -1.0, 1.0};
}

}  // namespace

void EwConfig::validate() const {
  require(finite_nonneg(r), "EwConfig: r must be finite and >= 0");
  require(valid_eta(eta_A), "EwConfig: eta_A must lie in (0, 1]");
  require(valid_eta(eta_B), "EwConfig: eta_B must lie in (0, 1]");
  priorA.validate();
  priorB.validate();
  require(finite_nonneg(epsilon), "EwConfig: epsilon must be finite and >= 0");
  require(finite_nonneg(phase_noise.theta1) && finite_nonneg(phase_noise.theta2) &&
              finite_nonneg(phase_noise.theta3),
          "EwConfig: phase-noise variances must be finite and >= 0");
  require(n_alphabet >= 1, "EwConfig: n_alphabet must be >= 1");
  require(n_copies >= 1, "EwConfig: n_copies must be >= 1");
}

void MemoryConfig::validate() const {
  require(valid_eta(eta), "MemoryConfig: eta must lie in (0, 1]");
  require(finite_nonneg(xi), "MemoryConfig: xi must be finite and >= 0");
  require(std::isfinite(nu) && nu >= 1.0, "MemoryConfig: nu must be finite and >= 1");
  prior.validate();
  require(n_alphabet >= 1, "MemoryConfig: n_alphabet must be >= 1");
  require(n_copies >= 1, "MemoryConfig: n_copies must be >= 1");
}

std::pair<std::complex<double>, std::complex<double>> sample_pair(const PriorSpec& priorA, const PriorSpec& priorB,
                                                                  RandomStream& rng) {
  priorA.validate();
  priorB.validate();
  const double ax = rng.normal(0.0, priorA.sigma_x / std::sqrt(2.0));
  const double ap = rng.normal(0.0, priorA.sigma_p / std::sqrt(2.0));
  const double bx = rng.normal(0.0, priorB.sigma_x / std::sqrt(2.0));
  const double bp = rng.normal(0.0, priorB.sigma_p / std::sqrt(2.0));
  return {{ax, ap}, {bx, bp}};
}

GaussianState ew_detector_state(const EwConfig& cfg, std::complex<double> alpha, std::complex<double> beta,
                                double theta1, double theta2, double theta3) {
  // Source layout: 0 = a (|alpha>), 1 = A, 2 = B, 3 = b (|beta>).
  GaussianState state = tensor(tensor(coherent(alpha), tmsv(cfg.r)), coherent(beta));
  if (theta3 != 0.0) state = apply_phase(state, 2, theta3);
  if (theta1 != 0.0) {
    state = apply_phase(state, 1, theta1);
    state = apply_phase(state, 2, theta1);
  }
  if (theta2 != 0.0) {
    state = apply_phase(state, 0, theta2);
    state = apply_phase(state, 3, theta2);
  }
  state = apply_loss(state, 1, cfg.eta_A);
  state = apply_loss(state, 2, cfg.eta_B);
  state = apply_beamsplitter(state, 0, 1, kHalf);
  state = apply_beamsplitter(state, 3, 2, kHalf);
  return state;
}

EwOutcomes run_ew_round(const EwConfig& cfg, std::complex<double> alpha, std::complex<double> beta,
                        RandomStream& rng) {
  cfg.validate();
  const Phases phases = draw_phases(cfg.phase_noise, rng);
  const GaussianState state = ew_detector_state(cfg, alpha, beta, phases.theta1, phases.theta2, phases.theta3);
  const Eigen::VectorXd y = sample_quadratures(state, ew_selection(), rng);
  const double e = cfg.epsilon;
  return {e * y(0), -e * y(1), e * y(2), -e * y(3)};
}

double joint_prior_variance(const PriorSpec& priorA, const PriorSpec& priorB) {
  const double var_x = 0.5 * (priorA.sigma_x * priorA.sigma_x + priorB.sigma_x * priorB.sigma_x);
  const double var_p = 0.5 * (priorA.sigma_p * priorA.sigma_p + priorB.sigma_p * priorB.sigma_p);
  return 0.5 * (var_x + var_p);
}

double ew_model_expected(const EwConfig& cfg) {
  cfg.validate();
  const double ch = std::cosh(2.0 * cfg.r);
  const double sh = std::sinh(2.0 * cfg.r);
  const double dephase = std::exp(-2.0 * cfg.phase_noise.theta1 - 0.5 * cfg.phase_noise.theta3);
  const double eta_sum = cfg.eta_A + cfg.eta_B;
  const double e = cfg.epsilon;
  const double e2 = e * e;
  // Half the summed variances of x_A - x_B and p_A + p_B after loss.
  const double source = 0.5 * (eta_sum * ch - 2.0 * std::sqrt(cfg.eta_A * cfg.eta_B) * dephase * sh + 2.0 - eta_sum);
  const double bias = 2.0 * joint_prior_variance(cfg.priorA, cfg.priorB) *
                      (1.0 + e2 - 2.0 * e * std::exp(-0.5 * cfg.phase_noise.theta2));
  return e2 * source + e2 + bias;
}

WitnessEstimate estimate_mdiew(const EwConfig& cfg, const EstimateOptions& options) {
  cfg.validate();
  const BoundReport bound = locc_threshold(cfg.priorA, cfg.priorB);
  const std::size_t n_pairs = static_cast<std::size_t>(cfg.n_alphabet);
  const std::size_t n = static_cast<std::size_t>(cfg.n_copies);
  const bool noisy = has_phase_noise(cfg.phase_noise);
  const EwWeights w = ew_weights(cfg.epsilon);
  std::vector<double> pair_means(n_pairs);

  parallel_blocks(n_pairs, options.threads, [&](std::size_t begin, std::size_t end) {
    std::vector<double> y(4 * n);
    std::vector<double> scratch(4 * n);
    const auto& kern = kernels::active();
    for (std::size_t i = begin; i < end; ++i) {
      RandomStream alphabet(cfg.seed, "alphabet", i);
      RandomStream quantum(cfg.seed, "quantum", i);
      const auto [alpha, beta] = sample_pair(cfg.priorA, cfg.priorB, alphabet);
      if (!noisy) {
        const QuadratureSampler sampler(ew_detector_state(cfg, alpha, beta, 0.0, 0.0, 0.0), ew_selection());
        sampler.draw_batch(quantum, n, y, scratch);
      } else {
        RandomStream phase(cfg.seed, "phase", i);
        for (std::size_t k = 0; k < n; ++k) {
          const Phases ph = draw_phases(cfg.phase_noise, phase);
          const QuadratureSampler sampler(ew_detector_state(cfg, alpha, beta, ph.theta1, ph.theta2, ph.theta3),
                                          ew_selection());
          const Eigen::VectorXd draw = sampler.draw(quantum);
          for (std::size_t d = 0; d < 4; ++d) y[d * n + k] = draw(static_cast<Eigen::Index>(d));
        }
      }
      const double tx = alpha.real() - beta.real();
      const double tp = alpha.imag() + beta.imag();
      pair_means[i] = kern.squared_error_sum(y.data(), 4, n, w.x.data(), tx, w.p.data(), tp) / static_cast<double>(n);
    }
  });

  const MeanAccumulator acc = accumulate(pair_means);
  WitnessEstimate est;
  est.value = acc.mean();
  est.std_error = acc.std_error();
  est.threshold = bound.threshold;
  est.sigma_star = bound.sigma_star;
  est.k = options.violation_k;
  est.n_total = static_cast<std::uint64_t>(n_pairs) * n;
  return est;
}

GaussianState memory_detector_state(const MemoryConfig& cfg, std::complex<double> alpha, std::complex<double> beta) {
  cfg.validate();
  GaussianState stored = apply_amplifier(apply_loss(coherent(alpha), 0, cfg.eta, cfg.xi), 0, cfg.nu);
  const double match = cfg.nu * cfg.eta;
  GaussianState reference = coherent(beta);
  if (match <= 1.0) {
    reference = apply_loss(reference, 0, match);
  } else if (cfg.matching == BetaMatching::kAmplifier) {
    reference = apply_amplifier(reference, 0, match);
  } else {
    reference = coherent(std::sqrt(match) * beta);
  }
  return apply_beamsplitter(tensor(stored, reference), 0, 1, kHalf);
}

JointTargets memory_targets(JointConvention convention, std::complex<double> alpha, std::complex<double> beta) {
  if (convention == JointConvention::kSumDifference) {
    return {alpha.real() + beta.real(), alpha.imag() - beta.imag()};
  }
  return {alpha.real() - beta.real(), alpha.imag() + beta.imag()};
}

std::pair<double, double> run_memory_round(const MemoryConfig& cfg, std::complex<double> alpha,
                                           std::complex<double> beta, RandomStream& rng) {
  const MemoryReadout readout = memory_readout(cfg.convention);
  const Eigen::VectorXd y = sample_quadratures(memory_detector_state(cfg, alpha, beta), readout.selection, rng);
  const double scale = 1.0 / std::sqrt(cfg.nu * cfg.eta);
  return {readout.sign_x * scale * y(0), readout.sign_p * scale * y(1)};
}

WitnessEstimate estimate_mdiep(const MemoryConfig& cfg, const EstimateOptions& options) {
  cfg.validate();
  const BoundReport bound = locc_threshold(cfg.prior, cfg.prior);
  const std::size_t n_pairs = static_cast<std::size_t>(cfg.n_alphabet);
  const std::size_t n = static_cast<std::size_t>(cfg.n_copies);
  const MemoryReadout readout = memory_readout(cfg.convention);
  const double scale = 1.0 / std::sqrt(cfg.nu * cfg.eta);
  const std::array<double, 2> wx{readout.sign_x * scale, 0.0};
  const std::array<double, 2> wp{0.0, readout.sign_p * scale};
  std::vector<double> pair_means(n_pairs);

  parallel_blocks(n_pairs, options.threads, [&](std::size_t begin, std::size_t end) {
    std::vector<double> y(2 * n);
    std::vector<double> scratch(2 * n);
    const auto& kern = kernels::active();
    for (std::size_t i = begin; i < end; ++i) {
      RandomStream alphabet(cfg.seed, "alphabet", i);
      RandomStream quantum(cfg.seed, "quantum", i);
      const auto [alpha, beta] = sample_pair(cfg.prior, cfg.prior, alphabet);
      const QuadratureSampler sampler(memory_detector_state(cfg, alpha, beta), readout.selection);
      sampler.draw_batch(quantum, n, y, scratch);
      const JointTargets t = memory_targets(cfg.convention, alpha, beta);
      pair_means[i] = kern.squared_error_sum(y.data(), 2, n, wx.data(), t.x, wp.data(), t.p) / static_cast<double>(n);
    }
  });

  const MeanAccumulator acc = accumulate(pair_means);
  WitnessEstimate est;
  est.value = acc.mean();
  est.std_error = acc.std_error();
  est.threshold = bound.threshold;
  est.sigma_star = bound.sigma_star;
  est.k = options.violation_k;
  est.n_total = static_cast<std::uint64_t>(n_pairs) * n;
  return est;
}

SimonDuanEstimate estimate_simon_duan(const SimonDuanConfig& cfg, int threads) {
  require(finite_nonneg(cfg.r), "SimonDuanConfig: r must be finite and >= 0");
  require(valid_eta(cfg.eta), "SimonDuanConfig: eta must lie in (0, 1]");
  require(finite_nonneg(cfg.epsilon), "SimonDuanConfig: epsilon must be finite and >= 0");
  require(cfg.n_rounds >= 4, "SimonDuanConfig: need at least 4 rounds");

  constexpr std::size_t kChunk = 8192;
  const GaussianState source = apply_loss(apply_loss(tmsv(cfg.r), 0, cfg.eta), 1, cfg.eta);
  const QuadratureSampler x_reader(source, QuadratureSelection{{0, Quadrature::kX}, {1, Quadrature::kX}});
  const QuadratureSampler p_reader(source, QuadratureSelection{{0, Quadrature::kP}, {1, Quadrature::kP}});
  const std::array<double, 2> w_diff{cfg.epsilon, -cfg.epsilon};
  const std::array<double, 2> w_sum{cfg.epsilon, cfg.epsilon};

  const std::size_t n_x = static_cast<std::size_t>(cfg.n_rounds / 2);
  const std::size_t n_p = static_cast<std::size_t>(cfg.n_rounds) - n_x;
  const std::size_t chunks_x = (n_x + kChunk - 1) / kChunk;
  const std::size_t chunks_p = (n_p + kChunk - 1) / kChunk;
  std::vector<MeanAccumulator> parts(chunks_x + chunks_p);

  parallel_blocks(parts.size(), threads, [&](std::size_t begin, std::size_t end) {
    std::vector<double> y(2 * kChunk);
    std::vector<double> scratch(2 * kChunk);
    const auto& kern = kernels::active();
    for (std::size_t c = begin; c < end; ++c) {
      const bool is_x = c < chunks_x;
      const std::size_t local = is_x ? c : c - chunks_x;
      const std::size_t total = is_x ? n_x : n_p;
      const std::size_t count = std::min(kChunk, total - local * kChunk);
      RandomStream quantum(cfg.seed, "quantum", c);
      (is_x ? x_reader : p_reader).draw_batch(quantum, count, std::span<double>(y).first(2 * count),
                                             std::span<double>(scratch).first(2 * count));
      double sum = 0.0;
      double sum_sq = 0.0;
      kern.linear_moments(y.data(), 2, count, (is_x ? w_diff : w_sum).data(), &sum, &sum_sq);
      const double mean = sum / static_cast<double>(count);
      parts[c] = MeanAccumulator::from_moments(count, mean, std::max(0.0, sum_sq - sum * mean));
    }
  });

  MeanAccumulator x_acc;
  MeanAccumulator p_acc;
  for (std::size_t c = 0; c < parts.size(); ++c) (c < chunks_x ? x_acc : p_acc).merge(parts[c]);

  SimonDuanEstimate est;
  est.var_x_difference = x_acc.variance();
  est.var_p_sum = p_acc.variance();
  est.value = est.var_x_difference + est.var_p_sum;
  // Sampling variance of a Gaussian sample variance: 2 s^4 / (n - 1).
  est.std_error = std::sqrt(2.0 * est.var_x_difference * est.var_x_difference / static_cast<double>(n_x - 1) +
                            2.0 * est.var_p_sum * est.var_p_sum / static_cast<double>(n_p - 1));
  est.n_total = cfg.n_rounds;
  return est;
}

}  // namespace mdicert
