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

// Independent phase-space check of the protocol simulations.
//
// Every state in these protocols is Gaussian, so its Wigner function is a
// genuine probability density. For a Gaussian state and any linear optical
// network with Gaussian noise channels, the Wigner function of the output is
// the pushforward of the input Wigner density under the linear input-output
// relations (with noise modes drawn from their own Wigner densities). Reading
// one quadrature per output port means only commuting observables are
// sampled, and their joint homodyne distribution is the corresponding
// marginal of the output Wigner density. Sampling phase-space points and
// pushing them through the scalar relations therefore reproduces the exact
// outcome statistics, with no covariance matrices involved.
//
// This file shares nothing with the Gaussian engine: only the random stream
// and the configuration structs.

#include "mdicert/protocols.hpp"

namespace mdicert {

/// One phase-space point per input mode.
struct PhaseSpaceSample {
  double x = 0.0;
  double p = 0.0;
};

/// Same estimand as estimate_mdiew. Draws from sub-stream ("oracle", i).
WitnessEstimate oracle_ew_witness(const EwConfig& cfg, const EstimateOptions& options = {});

/// Same estimand as estimate_mdiep. Draws from sub-stream ("oracle", i).
WitnessEstimate oracle_memory_witness(const MemoryConfig& cfg, const EstimateOptions& options = {});

}  // namespace mdicert
