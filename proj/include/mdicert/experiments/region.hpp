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

#include <functional>
#include <utility>
#include <vector>

#include "mdicert/experiments/config.hpp"

namespace mdicert::experiments {

/// Closed-form witness expectation and threshold over a two-parameter plane.
/// Priors enter only through sigma*, so asymmetric priors are folded into
/// their symmetric equivalent.
class RegionModel {
 public:
  explicit RegionModel(const RunConfig& config);

  const SweepAxis& axis1() const { return axis1_; }
  const SweepAxis& axis2() const { return axis2_; }

  /// Returns {expected, threshold}.
  std::pair<double, double> evaluate(double a1, double a2) const;
  double difference(double a1, double a2) const;

 private:
  struct Point {
    double epsilon, sigma_star, r, eta, xi;
  };
  void set(Point& p, const std::string& name, double value) const;

  Protocol protocol_;
  SweepAxis axis1_, axis2_;
  Point base_{};
  bool epsilon_opt_ = false;
  PhaseNoiseVariances noise_;
  MdiepVariant variant_ = MdiepVariant::kPlus;
};

struct RegionGrid {
  std::vector<double> v1, v2;
  // Row-major in axis1: index i * v2.size() + j.
  std::vector<double> expected, threshold;

  double difference(std::size_t i, std::size_t j) const {
    const std::size_t k = i * v2.size() + j;
    return expected[k] - threshold[k];
  }
};

RegionGrid evaluate_region(const RegionModel& model);

struct ContourVertex {
  double a1, a2, residual;
};

using Polyline = std::vector<ContourVertex>;

/// Marching squares on the sign of f over the grid nodes, with each edge
/// crossing refined by bisection on f itself. Negative values are inside.
std::vector<Polyline> zero_contour(const std::vector<double>& v1, const std::vector<double>& v2,
                                   const std::vector<double>& values,
                                   const std::function<double(double, double)>& f, double tolerance = 1e-12);

}  // namespace mdicert::experiments
