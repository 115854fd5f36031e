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

#include "mdicert/oracle.hpp"

#include <cmath>
#include <vector>

#include "mdicert/statistics.hpp"

namespace mdicert {

namespace {

const double kRootHalf = std::sqrt(0.5);
const double kRootTwo = std::sqrt(2.0);

PhaseSpaceSample coherent_point(double ax, double ap, RandomStream& rng) {
  return {rng.normal(kRootTwo * ax, kRootHalf), rng.normal(kRootTwo * ap, kRootHalf)};
}

PhaseSpaceSample thermal_point(double variance, RandomStream& rng) {
  const double sd = std::sqrt(variance);
  return {rng.normal(0.0, sd), rng.normal(0.0, sd)};
}

PhaseSpaceSample rotate(PhaseSpaceSample s, double theta) {
  const double c = std::cos(theta);
  const double sn = std::sin(theta);
  return {c * s.x + sn * s.p, c * s.p - sn * s.x};
}

// x -> sqrt(eta) x + sqrt(1-eta) x_env,  p -> sqrt(eta) p - sqrt(1-eta) p_env
PhaseSpaceSample attenuate(PhaseSpaceSample s, double eta, const PhaseSpaceSample& env) {
  const double keep = std::sqrt(eta);
  const double leak = std::sqrt(1.0 - eta);
  return {keep * s.x + leak * env.x, keep * s.p - leak * env.p};
}

// x -> sqrt(g) x + sqrt(g-1) x_idler,  p -> sqrt(g) p - sqrt(g-1) p_idler
PhaseSpaceSample amplify(PhaseSpaceSample s, double gain, const PhaseSpaceSample& idler) {
  const double a = std::sqrt(gain);
  const double b = std::sqrt(gain - 1.0);
  return {a * s.x + b * idler.x, a * s.p - b * idler.p};
}

struct Alphabet {
  double ax, ap, bx, bp;
};

Alphabet draw_alphabet(const PriorSpec& a, const PriorSpec& b, RandomStream& rng) {
  return {rng.normal(0.0, a.sigma_x * kRootHalf), rng.normal(0.0, a.sigma_p * kRootHalf),
          rng.normal(0.0, b.sigma_x * kRootHalf), rng.normal(0.0, b.sigma_p * kRootHalf)};
}

// Two single-mode squeezers (x squeezed in one, p in the other) combined on
// a balanced splitter give the TMSV pair.
std::pair<PhaseSpaceSample, PhaseSpaceSample> tmsv_points(double r, RandomStream& rng) {
  const double wide = std::exp(r) * kRootHalf;
  const double narrow = std::exp(-r) * kRootHalf;
  const double u1x = rng.normal(0.0, wide);
  const double u1p = rng.normal(0.0, narrow);
  const double u2x = rng.normal(0.0, narrow);
  const double u2p = rng.normal(0.0, wide);
  return {{(u1x + u2x) * kRootHalf, (u1p + u2p) * kRootHalf}, {(u1x - u2x) * kRootHalf, (u1p - u2p) * kRootHalf}};
}

WitnessEstimate finish(const std::vector<double>& pair_means, const PriorSpec& a, const PriorSpec& b,
                       const EstimateOptions& options, std::uint64_t n_total) {
  const BoundReport bound = locc_threshold(a, b);
  const MeanAccumulator acc = accumulate(pair_means);
  WitnessEstimate est;
  est.value = acc.mean();
  est.std_error = acc.std_error();
  est.threshold = bound.threshold;
  est.sigma_star = bound.sigma_star;
  est.k = options.violation_k;
  est.n_total = n_total;
  return est;
}

}  // namespace

WitnessEstimate oracle_ew_witness(const EwConfig& cfg, const EstimateOptions& options) {
  cfg.validate();
  const std::size_t n_pairs = static_cast<std::size_t>(cfg.n_alphabet);
  const int n = cfg.n_copies;
  const double sd1 = std::sqrt(cfg.phase_noise.theta1);
  const double sd2 = std::sqrt(cfg.phase_noise.theta2);
  const double sd3 = std::sqrt(cfg.phase_noise.theta3);
  const double e = cfg.epsilon;
  std::vector<double> pair_means(n_pairs);

  parallel_blocks(n_pairs, options.threads, [&](std::size_t begin, std::size_t end) {
    for (std::size_t i = begin; i < end; ++i) {
      RandomStream rng(cfg.seed, "oracle", i);
      const Alphabet al = draw_alphabet(cfg.priorA, cfg.priorB, rng);
      const double gx = al.ax - al.bx;
      const double gp = al.ap + al.bp;
      double sum = 0.0;
      for (int k = 0; k < n; ++k) {
        const double theta1 = sd1 * rng.normal();
        const double theta2 = sd2 * rng.normal();
        const double theta3 = sd3 * rng.normal();
        PhaseSpaceSample a = coherent_point(al.ax, al.ap, rng);
        PhaseSpaceSample b = coherent_point(al.bx, al.bp, rng);
        auto [mode_a, mode_b] = tmsv_points(cfg.r, rng);
        mode_b = rotate(mode_b, theta3);
        mode_a = rotate(mode_a, theta1);
        mode_b = rotate(mode_b, theta1);
        a = rotate(a, theta2);
        b = rotate(b, theta2);
        mode_a = attenuate(mode_a, cfg.eta_A, thermal_point(0.5, rng));
        mode_b = attenuate(mode_b, cfg.eta_B, thermal_point(0.5, rng));
        const double a1 = e * (a.x + mode_a.x) * kRootHalf;
        const double a2 = e * (a.p - mode_a.p) * kRootHalf;
        const double b1 = e * (b.x + mode_b.x) * kRootHalf;
        const double b2 = e * (b.p - mode_b.p) * kRootHalf;
        const double ex = a1 - b1 - gx;
        const double ep = a2 + b2 - gp;
        sum += ex * ex + ep * ep;
      }
      pair_means[i] = sum / n;
    }
  });
  return finish(pair_means, cfg.priorA, cfg.priorB, options, static_cast<std::uint64_t>(n_pairs) * n);
}

WitnessEstimate oracle_memory_witness(const MemoryConfig& cfg, const EstimateOptions& options) {
  cfg.validate();
  const std::size_t n_pairs = static_cast<std::size_t>(cfg.n_alphabet);
  const int n = cfg.n_copies;
  const double match = cfg.nu * cfg.eta;
  const double norm = 1.0 / std::sqrt(2.0 * match);
  const bool sum_difference = cfg.convention == JointConvention::kSumDifference;
  std::vector<double> pair_means(n_pairs);

  parallel_blocks(n_pairs, options.threads, [&](std::size_t begin, std::size_t end) {
    for (std::size_t i = begin; i < end; ++i) {
      RandomStream rng(cfg.seed, "oracle", i);
      const Alphabet al = draw_alphabet(cfg.prior, cfg.prior, rng);
      const double gx = sum_difference ? al.ax + al.bx : al.ax - al.bx;
      const double gp = sum_difference ? al.ap - al.bp : al.ap + al.bp;
      double sum = 0.0;
      for (int k = 0; k < n; ++k) {
        PhaseSpaceSample a = coherent_point(al.ax, al.ap, rng);
        a = attenuate(a, cfg.eta, thermal_point(0.5 * (1.0 + cfg.xi), rng));
        a = amplify(a, cfg.nu, thermal_point(0.5, rng));
        PhaseSpaceSample b;
        if (match <= 1.0) {
          b = attenuate(coherent_point(al.bx, al.bp, rng), match, thermal_point(0.5, rng));
        } else if (cfg.matching == BetaMatching::kAmplifier) {
          b = amplify(coherent_point(al.bx, al.bp, rng), match, thermal_point(0.5, rng));
        } else {
          const double scale = std::sqrt(match);
          b = coherent_point(scale * al.bx, scale * al.bp, rng);
        }
        const double g_x = sum_difference ? (a.x + b.x) * norm : (a.x - b.x) * norm;
        const double g_p = sum_difference ? (a.p - b.p) * norm : (a.p + b.p) * norm;
        const double ex = g_x - gx;
        const double ep = g_p - gp;
        sum += ex * ex + ep * ep;
      }
      pair_means[i] = sum / n;
    }
  });
  return finish(pair_means, cfg.prior, cfg.prior, options, static_cast<std::uint64_t>(n_pairs) * n);
}

}  // namespace mdicert
