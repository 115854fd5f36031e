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

#include <cmath>
#include <vector>

#include <doctest.h>

#include "mdicert/oracle.hpp"

using namespace mdicert;

TEST_CASE("oracle and engine agree on the entanglement witness") {
  struct Case {
    double r, etaA, etaB, sigma, eps;
    PhaseNoiseVariances noise;
  };
  const std::vector<Case> cases{{0.0, 1.0, 1.0, 1.0, 1.0, {}},   {0.3, 0.8, 0.8, 1.76, 1.0, {}},
                                {0.6, 0.9, 0.5, 3.0, 0.7, {}},   {0.2, 0.7, 0.7, 0.5, 1.2, {}},
                                {0.3, 0.9, 0.9, 2.0, 1.0, {0.01, 0.01, 0.01}}};
  for (const auto& c : cases) {
    EwConfig cfg;
    cfg.r = c.r;
    cfg.eta_A = c.etaA;
    cfg.eta_B = c.etaB;
    cfg.priorA = cfg.priorB = PriorSpec::symmetric(c.sigma);
    cfg.epsilon = c.eps;
    cfg.phase_noise = c.noise;
    cfg.n_alphabet = 300;
    cfg.n_copies = 100;
    cfg.seed = 77;
    const WitnessEstimate engine = estimate_mdiew(cfg);
    const WitnessEstimate oracle = oracle_ew_witness(cfg);
    CAPTURE(c.r);
    CAPTURE(c.etaB);
    CAPTURE(c.eps);
    CHECK(std::abs(engine.value - oracle.value) < 4.0 * std::hypot(engine.std_error, oracle.std_error));
    CHECK(std::abs(oracle.value - ew_model_expected(cfg)) < 4.0 * oracle.std_error);
    CHECK(engine.value != oracle.value);
    CHECK(oracle.threshold == doctest::Approx(engine.threshold));
  }
}

TEST_CASE("oracle and engine agree on the memory witness") {
  for (double xi : {0.0, 0.3}) {
    for (double nu : {1.0, 2.5}) {
      for (auto conv : {JointConvention::kDifferenceSum, JointConvention::kSumDifference}) {
        MemoryConfig cfg;
        cfg.eta = 0.7;
        cfg.xi = xi;
        cfg.nu = nu;
        cfg.prior = PriorSpec::symmetric(2.0);
        cfg.convention = conv;
        cfg.n_alphabet = 300;
        cfg.seed = 4;
        const WitnessEstimate engine = estimate_mdiep(cfg);
        const WitnessEstimate oracle = oracle_memory_witness(cfg);
        CAPTURE(xi);
        CAPTURE(nu);
        CHECK(std::abs(engine.value - oracle.value) < 4.0 * std::hypot(engine.std_error, oracle.std_error));
      }
    }
  }
}

TEST_CASE("oracle is deterministic in the seed") {
  EwConfig cfg;
  cfg.r = 0.4;
  cfg.n_alphabet = 50;
  cfg.seed = 3;
  CHECK(oracle_ew_witness(cfg).value == oracle_ew_witness(cfg, {4, 3.0}).value);
  cfg.seed = 4;
  const double other = oracle_ew_witness(cfg).value;
  cfg.seed = 3;
  CHECK(oracle_ew_witness(cfg).value != other);
}
