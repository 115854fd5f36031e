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

#include "mdicert/experiments/calibration.hpp"

#include <cmath>
#include <stdexcept>

#include <Eigen/Dense>

#include "mdicert/random.hpp"

namespace mdicert::experiments {

std::array<double, 2> CalibrationFit::predict(double v_im, double v_pm) const {
  return {response[0][0] * v_im + response[0][1] * v_pm + offset[0],
          response[1][0] * v_im + response[1][1] * v_pm + offset[1]};
}

std::array<double, 2> CalibrationFit::invert(double alpha_x, double alpha_p) const {
  const Eigen::Matrix2d m{{response[0][0], response[0][1]}, {response[1][0], response[1][1]}};
  const Eigen::Vector2d target(alpha_x - offset[0], alpha_p - offset[1]);
  const Eigen::Vector2d v = m.partialPivLu().solve(target);
  return {v(0), v(1)};
}

CalibrationFit fit_calibration(const std::vector<CalibrationSample>& samples) {
  const auto n = static_cast<Eigen::Index>(samples.size());
  if (n < 3) throw std::invalid_argument("fit_calibration: need at least 3 samples");
  Eigen::MatrixXd design(n, 3);
  Eigen::MatrixXd y(n, 2);
  for (Eigen::Index k = 0; k < n; ++k) {
    const auto& s = samples[static_cast<std::size_t>(k)];
    if (!std::isfinite(s.v_im) || !std::isfinite(s.v_pm) || !std::isfinite(s.alpha_x) || !std::isfinite(s.alpha_p)) {
      throw std::invalid_argument("fit_calibration: non-finite sample");
    }
    design.row(k) << s.v_im, s.v_pm, 1.0;
    y.row(k) << s.alpha_x, s.alpha_p;
  }
  Eigen::ColPivHouseholderQR<Eigen::MatrixXd> qr(design);
  qr.setThreshold(1e-10);
  if (qr.rank() < 3) throw std::invalid_argument("fit_calibration: voltage points are collinear (rank-deficient design)");
  const Eigen::MatrixXd beta = qr.solve(y);
  const Eigen::MatrixXd resid = y - design * beta;

  CalibrationFit fit;
  fit.n_samples = samples.size();
  fit.residual_rms = std::sqrt(resid.squaredNorm() / static_cast<double>(2 * n));
  const Eigen::Matrix3d xtx_inv = (design.transpose() * design).inverse();
  for (int out = 0; out < 2; ++out) {
    fit.response[out][0] = beta(0, out);
    fit.response[out][1] = beta(1, out);
    fit.offset[out] = beta(2, out);
    const double s2 = n > 3 ? resid.col(out).squaredNorm() / static_cast<double>(n - 3) : 0.0;
    fit.response_se[out][0] = std::sqrt(s2 * xtx_inv(0, 0));
    fit.response_se[out][1] = std::sqrt(s2 * xtx_inv(1, 1));
    fit.offset_se[out] = std::sqrt(s2 * xtx_inv(2, 2));
  }
  return fit;
}

std::vector<CalibrationSample> synthetic_samples(const SyntheticCalibration& spec, std::uint64_t seed) {
  if (spec.n_points < 0 || !(spec.noise >= 0.0) || !(spec.voltage_range > 0.0)) {
    throw std::invalid_argument("synthetic_samples: need n_points >= 0, noise >= 0, voltage_range > 0");
  }
  RandomStream volts(seed, "alphabet", 0);
  RandomStream noise(seed, "quantum", 0);
  std::vector<CalibrationSample> out;
  out.reserve(static_cast<std::size_t>(spec.n_points));
  for (int k = 0; k < spec.n_points; ++k) {
    const double vi = spec.voltage_range * (2.0 * volts.uniform() - 1.0);
    const double vp = spec.voltage_range * (2.0 * volts.uniform() - 1.0);
    const double ax = spec.response[0][0] * vi + spec.response[0][1] * vp + spec.offset[0];
    const double ap = spec.response[1][0] * vi + spec.response[1][1] * vp + spec.offset[1];
    out.push_back({vi, vp, ax + spec.noise * noise.normal(), ap + spec.noise * noise.normal()});
  }
  return out;
}

}  // namespace mdicert::experiments
