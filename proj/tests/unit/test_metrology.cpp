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
#include <limits>

#include <doctest.h>

#include "mdicert/metrology.hpp"
#include "state_reference.hpp"

using namespace mdicert;

namespace {

// Golden-section minimum of f on [lo, hi].
template <class F>
double argmin(F f, double lo, double hi) {
  const double g = (std::sqrt(5.0) - 1.0) / 2.0;
  double a = lo, b = hi;
  for (int it = 0; it < 200; ++it) {
    const double c = b - g * (b - a);
    const double d = a + g * (b - a);
    if (f(c) < f(d)) {
      b = d;
    } else {
      a = c;
    }
  }
  return 0.5 * (a + b);
}

}  // namespace

TEST_CASE("minimum estimation error") {
  CHECK(min_error_bound(PriorSpec::symmetric(1.0)) == doctest::Approx(0.5));
  CHECK(min_error_bound({2.0, 0.5}) == doctest::Approx(1.0 / (1.0 + 0.125 + 2.0)));
  CHECK_THROWS_AS(min_error_bound({0.0, 1.0}), std::invalid_argument);
  CHECK_THROWS_AS(min_error_bound({-1.0, 1.0}), std::invalid_argument);
  const double inf = std::numeric_limits<double>::infinity();
  CHECK_THROWS_AS(min_error_bound({inf, inf}), std::invalid_argument);
  CHECK(min_error_bound(PriorSpec::symmetric(1e6)) == doctest::Approx(1.0));
}

TEST_CASE("threshold and effective width") {
  const BoundReport rep = locc_threshold({1.0, 2.0}, {3.0, 0.7});
  CHECK(rep.threshold == doctest::Approx(rep.v_alice + rep.v_bob));
  CHECK(symmetric_threshold(rep.sigma_star) == doctest::Approx(rep.threshold).epsilon(1e-12));
  for (double s : {0.1, 1.0, 1.76, 5.0}) {
    const BoundReport sym = locc_threshold(PriorSpec::symmetric(s), PriorSpec::symmetric(s));
    CHECK(sym.sigma_star == doctest::Approx(s).epsilon(1e-12));
    CHECK(sym.threshold == doctest::Approx(2 * s * s / (1 + s * s)));
  }
}

TEST_CASE("entanglement witness expectation from the state") {
  for (double r : {0.0, 0.2, 0.9}) {
    for (double eta : {0.3, 0.8, 1.0}) {
      EwConfig cfg;
      cfg.r = r;
      cfg.eta_A = cfg.eta_B = eta;
      cfg.priorA = cfg.priorB = PriorSpec::symmetric(1.7);
      CHECK(mdiew_expected(r, eta) == doctest::Approx(testing::ew_witness_exact(cfg, 0, 0, 0)).epsilon(1e-12));
    }
  }
  CHECK(mdiew_expected(0.0, 0.5) == doctest::Approx(2.0));
}

TEST_CASE("detectability matches the strict inequality") {
  for (double r = 0.0; r < 1.5; r += 0.1) {
    for (double eta = 0.1; eta <= 1.0; eta += 0.1) {
      for (double s = 0.2; s < 5; s += 0.4) {
        CHECK(ew_detectable(r, eta, s) == (mdiew_expected(r, eta) < symmetric_threshold(s)));
      }
    }
  }
  CHECK_FALSE(ew_detectable(0.0, 1.0, 100.0));
}

TEST_CASE("optimal rescaling factor") {
  CHECK(epsilon_opt(1.0, 0.0) == 0.5);
  CHECK(epsilon_opt(std::numeric_limits<double>::infinity(), 0.3) == 1.0);
  for (double s : {0.3, 1.0, 2.5}) {
    for (double r : {0.0, 0.4, 1.0}) {
      const auto f = [&](double e) { return rescaled_error_expected(e, s, r); };
      CHECK(epsilon_opt(s, r) == doctest::Approx(argmin(f, 0.0, 2.0)).epsilon(1e-6));
      const double h = 1e-5;
      const double e = epsilon_opt(s, r);
      CHECK(std::abs((f(e + h) - f(e - h)) / (2 * h)) < 1e-8);
    }
  }
}

TEST_CASE("rescaling attack never beats the threshold without squeezing") {
  for (int i = 0; i < 50; ++i) {
    for (int j = 0; j < 50; ++j) {
      for (int k = 0; k < 50; ++k) {
        const double eps = 1.5 * i / 49.0;
        const double s = 0.01 + 4.0 * j / 49.0;
        const double r = 1.5 * k / 49.0;
        const double diff = rescaled_error_expected(eps, s, r) - symmetric_threshold(s);
        if (r == 0.0) CHECK(diff >= -1e-12);
      }
    }
  }
  for (double s : {0.01, 0.5, 3.0, 100.0}) {
    CHECK(rescaled_error_expected(epsilon_opt(s, 0.0), s, 0.0) ==
          doctest::Approx(symmetric_threshold(s)).epsilon(1e-12));
  }
}

TEST_CASE("rescaled expectation agrees with the state at matched parameters") {
  for (double eps : {0.5, 0.9, 1.2}) {
    for (double r : {0.0, 0.3}) {
      EwConfig cfg;
      cfg.r = r;
      cfg.epsilon = eps;
      cfg.priorA = cfg.priorB = PriorSpec::symmetric(1.3);
      // Each party's alphabet contributes sigma^2 / 2 per quadrature; the witness sees both.
      CHECK(rescaled_error_expected(eps, 1.3, r) ==
            doctest::Approx(testing::ew_witness_exact(cfg, 0, 0, 0)).epsilon(1e-12));
    }
  }
  CHECK(simon_duan_rescaled(0.9) == doctest::Approx(1.62));
}

TEST_CASE("memory witness variants") {
  CHECK(mdiep_expected(0.8, 0.0) == doctest::Approx(1.25));
  CHECK(mdiep_expected(0.8, 0.2, MdiepVariant::kPlus) == doctest::Approx(1.475));
  CHECK(mdiep_expected(0.8, 0.2, MdiepVariant::kMinus) == doctest::Approx(1.275));
  CHECK(parse_mdiep_variant("minus") == MdiepVariant::kMinus);
  CHECK(to_string(MdiepVariant::kPlus) == "plus");
  CHECK_THROWS_AS(parse_mdiep_variant("both"), std::invalid_argument);
  CHECK_THROWS_AS(mdiep_expected(0.0, 0.1), std::invalid_argument);
  CHECK(ep_detectable(0.8, 0.0, 3.0));
  CHECK_FALSE(ep_detectable(0.8, 0.0, 1.0));
  CHECK(ep_detectable(0.8, 0.0, std::numeric_limits<double>::infinity()));
}

TEST_CASE("memory closed form against the state") {
  for (double eta : {0.3, 0.8, 1.0}) {
    for (double xi : {0.0, 0.2, 0.7}) {
      for (double nu : {1.0, 1.5, 3.0}) {
        MemoryConfig cfg;
        cfg.eta = eta;
        cfg.xi = xi;
        cfg.nu = nu;
        cfg.prior = PriorSpec::symmetric(2.0);
        CAPTURE(eta);
        CAPTURE(xi);
        CAPTURE(nu);
        const double exact = testing::memory_witness_exact(cfg);
        CHECK(exact == doctest::Approx(mdiep_expected(eta, xi, MdiepVariant::kMinus)).epsilon(1e-12));
        cfg.convention = JointConvention::kSumDifference;
        CHECK(testing::memory_witness_exact(cfg) == doctest::Approx(exact).epsilon(1e-12));
      }
    }
  }
}

TEST_CASE("phase-noise average against quadrature over the state") {
  EwConfig cfg;
  cfg.r = 0.3;
  cfg.eta_A = cfg.eta_B = 0.9;
  cfg.priorA = cfg.priorB = PriorSpec::symmetric(2.0);
  cfg.phase_noise = {0.01, 0.02, 0.03};
  for (double eps : {1.0, 0.8}) {
    cfg.epsilon = eps;
    const double want = testing::ew_witness_phase_averaged(cfg);
    // The quadrature sees sigma^2/2 per component; the closed form takes sigma.
    CHECK(phase_noise_error_expected(eps, 0.3, 0.9, cfg.phase_noise, 2.0) == doctest::Approx(want).epsilon(1e-10));
  }
  cfg.phase_noise = {0.2, 0.1, 0.3};
  cfg.epsilon = 1.0;
  CHECK(phase_noise_error_expected(1.0, 0.3, 0.9, cfg.phase_noise, 2.0) ==
        doctest::Approx(testing::ew_witness_phase_averaged(cfg, 20)).epsilon(1e-9));
  CHECK(phase_noise_error_expected(1.0, 0.3, 0.9, {}, 2.0) == doctest::Approx(mdiew_expected(0.3, 0.9)));
}

TEST_CASE("OPO spectrum") {
  const OpoVariances lossless = opo_variances(8.35, 3.1, 0.4, 1.0);
  // Pure state at unit efficiency.
  CHECK(lossless.squeezed * lossless.antisqueezed == doctest::Approx(0.25).epsilon(1e-12));
  const OpoVariances none = opo_variances(8.35, 3.1, 0.0, 0.7);
  CHECK(none.squeezed == doctest::Approx(0.5));
  CHECK(none.antisqueezed == doctest::Approx(0.5));
  CHECK_THROWS_AS(opo_variances(8.35, 3.1, 1.0, 0.5), std::domain_error);
  CHECK_THROWS_AS(opo_variances(8.35, 3.1, 0.4, 1.5), std::invalid_argument);
  // Loss mixes towards vacuum linearly in eta.
  const OpoVariances half = opo_variances(8.35, 3.1, 0.4, 0.5);
  CHECK(half.squeezed == doctest::Approx(0.5 * lossless.squeezed + 0.25));
  CHECK(half.antisqueezed == doctest::Approx(0.5 * lossless.antisqueezed + 0.25));
}

TEST_CASE("efficiency budget") {
  const auto base = reference_setup_budget(false);
  const auto extra = reference_setup_budget(true);
  CHECK(base.total == doctest::Approx(0.975 * 0.87 * 0.22));
  CHECK(extra.total == doctest::Approx(base.total * 0.8));
  CHECK(extra.stages.size() == base.stages.size() + 1);
  CHECK_THROWS_AS(efficiency_budget({{"bad", 1.2}}), std::invalid_argument);
}
