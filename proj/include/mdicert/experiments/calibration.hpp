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

#include <array>
#include <cstdint>
#include <vector>

namespace mdicert::experiments {

struct CalibrationSample {
  double v_im, v_pm;
  double alpha_x, alpha_p;
};

/// Linear modulator model (alpha_x, alpha_p) = M (V_IM, V_PM) + offset.
/// Off-diagonal entries of M carry the residual amplitude/phase cross-coupling.
struct CalibrationFit {
  std::array<std::array<double, 2>, 2> response{};
  std::array<std::array<double, 2>, 2> response_se{};
  std::array<double, 2> offset{};
  std::array<double, 2> offset_se{};
  double residual_rms = 0.0;
  std::size_t n_samples = 0;

  std::array<double, 2> predict(double v_im, double v_pm) const;
  /// Voltages that produce the requested amplitudes.
  std::array<double, 2> invert(double alpha_x, double alpha_p) const;
};

/// Least squares on the design [V_IM, V_PM, 1]; throws std::invalid_argument
/// if the voltages do not span the plane.
CalibrationFit fit_calibration(const std::vector<CalibrationSample>& samples);

struct SyntheticCalibration {
  std::array<std::array<double, 2>, 2> response{{{1.0, 0.0}, {0.0, 1.0}}};
  std::array<double, 2> offset{};
  double noise = 0.0;
  double voltage_range = 1.0;
  int n_points = 100;
};

/// Uniform voltages in [-range, range]^2 with Gaussian noise on the amplitudes.
std::vector<CalibrationSample> synthetic_samples(const SyntheticCalibration& spec, std::uint64_t seed);

}  // namespace mdicert::experiments
