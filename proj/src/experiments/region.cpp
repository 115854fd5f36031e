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

#include "mdicert/experiments/region.hpp"

#include <array>
#include <cmath>
#include <map>
#include <stdexcept>

namespace mdicert::experiments {

RegionModel::RegionModel(const RunConfig& c)
    : protocol_(c.protocol), epsilon_opt_(c.epsilon_opt), variant_(c.mdiep_variant) {
  if (!c.region) throw ConfigError("region: config has no 'region' block");
  axis1_ = c.region->axis1;
  axis2_ = c.region->axis2;
  switch (c.protocol) {
    case Protocol::kEw:
      if (c.ew.eta_A != c.ew.eta_B) throw ConfigError("region: requires eta_A == eta_B");
      base_ = {c.ew.epsilon, locc_threshold(c.ew.priorA, c.ew.priorB).sigma_star, c.ew.r, c.ew.eta_A, 0.0};
      noise_ = c.ew.phase_noise;
      if (epsilon_opt_ && (axis1_.parameter == "epsilon" || axis2_.parameter == "epsilon")) {
        throw ConfigError("region: epsilon cannot be an axis when epsilon is \"opt\"");
      }
      break;
    case Protocol::kMemory:
      base_ = {1.0, locc_threshold(c.memory.prior, c.memory.prior).sigma_star, 0.0, c.memory.eta, c.memory.xi};
      break;
    case Protocol::kSimonDuan:
      throw ConfigError("region: not available for protocol simon-duan");
  }
}

void RegionModel::set(Point& p, const std::string& name, double value) const {
  if (name == "epsilon") p.epsilon = value;
  if (name == "sigma_star") p.sigma_star = value;
  if (name == "r") p.r = value;
  if (name == "eta") p.eta = value;
  if (name == "xi") p.xi = value;
}

std::pair<double, double> RegionModel::evaluate(double a1, double a2) const {
  Point p = base_;
  set(p, axis1_.parameter, a1);
  set(p, axis2_.parameter, a2);
  try {
    const double threshold = symmetric_threshold(p.sigma_star);
    if (protocol_ == Protocol::kMemory) return {mdiep_expected(p.eta, p.xi, variant_), threshold};
    const double eps = epsilon_opt_ ? epsilon_opt(p.sigma_star, p.r) : p.epsilon;
    return {phase_noise_error_expected(eps, p.r, p.eta, noise_, p.sigma_star), threshold};
  } catch (const std::invalid_argument& e) {
    throw InfeasibleError(std::string("region: ") + e.what());
  }
}

double RegionModel::difference(double a1, double a2) const {
  const auto [e, t] = evaluate(a1, a2);
  return e - t;
}

RegionGrid evaluate_region(const RegionModel& model) {
  RegionGrid g;
  g.v1 = model.axis1().values();
  g.v2 = model.axis2().values();
  g.expected.reserve(g.v1.size() * g.v2.size());
  g.threshold.reserve(g.v1.size() * g.v2.size());
  for (double a1 : g.v1) {
    for (double a2 : g.v2) {
      const auto [e, t] = model.evaluate(a1, a2);
      g.expected.push_back(e);
      g.threshold.push_back(t);
    }
  }
  return g;
}

namespace {

struct Grid {
  const std::vector<double>& v1;
  const std::vector<double>& v2;
  const std::vector<double>& values;
  std::size_t n2;

  double at(std::size_t i, std::size_t j) const { return values[i * n2 + j]; }
  bool inside(std::size_t i, std::size_t j) const { return at(i, j) < 0.0; }
};

// Edge ids: 2*(i*n2+j) runs from (i,j) to (i+1,j); 2*(i*n2+j)+1 from (i,j) to (i,j+1).
using EdgeId = std::size_t;

}  // namespace

std::vector<Polyline> zero_contour(const std::vector<double>& v1, const std::vector<double>& v2,
                                   const std::vector<double>& values,
                                   const std::function<double(double, double)>& f, double tolerance) {
  if (v1.size() < 2 || v2.size() < 2 || values.size() != v1.size() * v2.size()) {
    throw std::invalid_argument("zero_contour: grid shape mismatch");
  }
  const Grid g{v1, v2, values, v2.size()};
  const std::size_t n1 = v1.size();
  const std::size_t n2 = v2.size();

  std::map<EdgeId, ContourVertex> roots;
  auto root = [&](EdgeId id) -> const ContourVertex& {
    auto it = roots.find(id);
    if (it != roots.end()) return it->second;
    const std::size_t node = id / 2;
    const std::size_t i = node / n2;
    const std::size_t j = node % n2;
    const bool along1 = id % 2 == 0;
    const std::size_t i2 = along1 ? i + 1 : i;
    const std::size_t j2 = along1 ? j : j + 1;
    // Parameterise the edge by t in [0, 1]; keep f(lo) < 0 <= f(hi).
    auto point = [&](double t) {
      return std::array<double, 2>{v1[i] + t * (v1[i2] - v1[i]), v2[j] + t * (v2[j2] - v2[j])};
    };
    auto value = [&](double t) {
      const auto p = point(t);
      return f(p[0], p[1]);
    };
    double lo = 0.0;
    double hi = 1.0;
    if (!g.inside(i, j)) std::swap(lo, hi);
    const double span = along1 ? std::abs(v1[i2] - v1[i]) : std::abs(v2[j2] - v2[j]);
    for (int iter = 0; iter < 200 && std::abs(hi - lo) * span > tolerance; ++iter) {
      const double mid = 0.5 * (lo + hi);
      if (value(mid) < 0.0) {
        lo = mid;
      } else {
        hi = mid;
      }
    }
    const double t = 0.5 * (lo + hi);
    const auto p = point(t);
    return roots.emplace(id, ContourVertex{p[0], p[1], f(p[0], p[1])}).first->second;
  };

  std::vector<std::array<EdgeId, 2>> segments;
  for (std::size_t i = 0; i + 1 < n1; ++i) {
    for (std::size_t j = 0; j + 1 < n2; ++j) {
      // Corners c0=(i,j) c1=(i+1,j) c2=(i+1,j+1) c3=(i,j+1).
      const bool c0 = g.inside(i, j);
      const bool c1 = g.inside(i + 1, j);
      const bool c2 = g.inside(i + 1, j + 1);
      const bool c3 = g.inside(i, j + 1);
      const EdgeId e0 = 2 * (i * n2 + j);
      const EdgeId e1 = 2 * ((i + 1) * n2 + j) + 1;
      const EdgeId e2 = 2 * (i * n2 + j + 1);
      const EdgeId e3 = 2 * (i * n2 + j) + 1;
      std::vector<EdgeId> crossing;
      if (c0 != c1) crossing.push_back(e0);
      if (c1 != c2) crossing.push_back(e1);
      if (c3 != c2) crossing.push_back(e2);
      if (c0 != c3) crossing.push_back(e3);
      if (crossing.size() == 2) {
        segments.push_back({crossing[0], crossing[1]});
      } else if (crossing.size() == 4) {
        const bool centre = f(0.5 * (v1[i] + v1[i + 1]), 0.5 * (v2[j] + v2[j + 1])) < 0.0;
        if (centre == c0) {
          segments.push_back({e0, e1});
          segments.push_back({e2, e3});
        } else {
          segments.push_back({e3, e0});
          segments.push_back({e1, e2});
        }
      }
    }
  }

  std::map<EdgeId, std::vector<std::size_t>> touching;
  for (std::size_t s = 0; s < segments.size(); ++s) {
    touching[segments[s][0]].push_back(s);
    touching[segments[s][1]].push_back(s);
  }
  std::vector<bool> used(segments.size(), false);
  std::vector<Polyline> lines;

  auto walk = [&](std::size_t first, EdgeId start) {
    Polyline line;
    line.push_back(root(start));
    EdgeId at = start;
    std::size_t seg = first;
    while (true) {
      used[seg] = true;
      const EdgeId next = segments[seg][0] == at ? segments[seg][1] : segments[seg][0];
      line.push_back(root(next));
      at = next;
      std::size_t following = segments.size();
      for (std::size_t s : touching[at]) {
        if (!used[s]) following = s;
      }
      if (following == segments.size()) break;
      seg = following;
    }
    lines.push_back(std::move(line));
  };

  // Open curves start on the grid boundary, where an edge touches one segment.
  for (const auto& [edge, segs] : touching) {
    if (segs.size() == 1 && !used[segs[0]]) walk(segs[0], edge);
  }
  for (std::size_t s = 0; s < segments.size(); ++s) {
    if (!used[s]) walk(s, segments[s][0]);
  }
  return lines;
}

}  // namespace mdicert::experiments
