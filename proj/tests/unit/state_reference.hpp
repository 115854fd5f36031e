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

// Exact witness expectations computed from the Gaussian state itself, used as
// references for the closed forms. The estimators are linear in the alphabet
// (alpha_x, alpha_p, beta_x, beta_p), so the prior average of the squared bias
// follows from four unit-amplitude evaluations.

#include <array>
#include <cmath>
#include <complex>
#include <functional>
#include <vector>

#include <Eigen/Dense>

#include "mdicert/protocols.hpp"

namespace mdicert::testing {

/// Gauss-Hermite nodes and weights for E[f(Z)], Z ~ N(0, 1).
inline std::pair<std::vector<double>, std::vector<double>> gauss_hermite(int n) {
  Eigen::MatrixXd jacobi = Eigen::MatrixXd::Zero(n, n);
  for (int k = 1; k < n; ++k) jacobi(k, k - 1) = jacobi(k - 1, k) = std::sqrt(k / 2.0);
  Eigen::SelfAdjointEigenSolver<Eigen::MatrixXd> es(jacobi);
  std::vector<double> x(n), w(n);
  for (int k = 0; k < n; ++k) {
    x[k] = std::sqrt(2.0) * es.eigenvalues()(k);
    const double v0 = es.eigenvectors()(0, k);
    w[k] = v0 * v0;
  }
  return {x, w};
}

// Error of one estimator pair for a fixed state family.
// state_at(alpha, beta) builds the detector state; fx, fp are phase-space weights.
inline double witness_from_states(const std::function<GaussianState(std::complex<double>, std::complex<double>)>& state_at,
                                  const Eigen::VectorXd& fx, const Eigen::VectorXd& fp,
                                  const std::function<std::array<double, 2>(std::complex<double>, std::complex<double>)>&
                                      target,
                                  const PriorSpec& priorA, const PriorSpec& priorB) {
  const GaussianState zero = state_at(0.0, 0.0);
  double value = fx.dot(zero.cov() * fx) + fp.dot(zero.cov() * fp);
  const double bx0 = fx.dot(zero.mean());
  const double bp0 = fp.dot(zero.mean());
  value += bx0 * bx0 + bp0 * bp0;
  const std::array<std::pair<std::complex<double>, std::complex<double>>, 4> units{
      {{{1.0, 0.0}, 0.0}, {{0.0, 1.0}, 0.0}, {0.0, {1.0, 0.0}}, {0.0, {0.0, 1.0}}}};
  const std::array<double, 4> var{priorA.sigma_x * priorA.sigma_x / 2, priorA.sigma_p * priorA.sigma_p / 2,
                                  priorB.sigma_x * priorB.sigma_x / 2, priorB.sigma_p * priorB.sigma_p / 2};
  for (int k = 0; k < 4; ++k) {
    const auto [a, b] = units[k];
    const GaussianState s = state_at(a, b);
    const auto t = target(a, b);
    const double lx = fx.dot(s.mean()) - bx0 - t[0];
    const double lp = fp.dot(s.mean()) - bp0 - t[1];
    value += var[k] * (lx * lx + lp * lp);
  }
  return value;
}

inline double ew_witness_exact(const EwConfig& cfg, double theta1, double theta2, double theta3) {
  Eigen::VectorXd fx = Eigen::VectorXd::Zero(8), fp = Eigen::VectorXd::Zero(8);
  fx(0) = cfg.epsilon;   // a1 = eps x_0
  fx(6) = -cfg.epsilon;  // -b1 = -eps x_3
  fp(3) = -cfg.epsilon;  // a2 = -eps p_1
  fp(5) = -cfg.epsilon;  // b2 = -eps p_2
  return witness_from_states(
      [&](std::complex<double> a, std::complex<double> b) { return ew_detector_state(cfg, a, b, theta1, theta2, theta3); },
      fx, fp,
      [](std::complex<double> a, std::complex<double> b) {
        return std::array<double, 2>{a.real() - b.real(), a.imag() + b.imag()};
      },
      cfg.priorA, cfg.priorB);
}

/// Phase-averaged witness by tensor Gauss-Hermite quadrature over the three phases.
inline double ew_witness_phase_averaged(const EwConfig& cfg, int nodes = 12) {
  const auto [x, w] = gauss_hermite(nodes);
  const auto& v = cfg.phase_noise;
  double total = 0.0;
  for (int i = 0; i < nodes; ++i) {
    for (int j = 0; j < nodes; ++j) {
      for (int k = 0; k < nodes; ++k) {
        total += w[i] * w[j] * w[k] *
                 ew_witness_exact(cfg, std::sqrt(v.theta1) * x[i], std::sqrt(v.theta2) * x[j],
                                  std::sqrt(v.theta3) * x[k]);
      }
    }
  }
  return total;
}

inline double memory_witness_exact(const MemoryConfig& cfg) {
  const double scale = 1.0 / std::sqrt(cfg.nu * cfg.eta);
  Eigen::VectorXd fx = Eigen::VectorXd::Zero(4), fp = Eigen::VectorXd::Zero(4);
  if (cfg.convention == JointConvention::kDifferenceSum) {
    fx(2) = -scale;
    fp(1) = scale;
  } else {
    fx(0) = scale;
    fp(3) = -scale;
  }
  return witness_from_states(
      [&](std::complex<double> a, std::complex<double> b) { return memory_detector_state(cfg, a, b); }, fx, fp,
      [&](std::complex<double> a, std::complex<double> b) {
        const JointTargets t = memory_targets(cfg.convention, a, b);
        return std::array<double, 2>{t.x, t.p};
      },
      cfg.prior, cfg.prior);
}

}  // namespace mdicert::testing
