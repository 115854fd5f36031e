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

// First- and second-moment representation of multimode Gaussian states.
//
// Conventions: hbar = 1, so the vacuum has quadrature variance 1/2 and a
// coherent state |alpha> has means sqrt(2) * (Re alpha, Im alpha). Phase-space
// vectors are ordered (x_1, p_1, ..., x_n, p_n).

#include <complex>
#include <cstddef>
#include <span>
#include <vector>

#include <Eigen/Dense>

#include "mdicert/random.hpp"

namespace mdicert {

/// Lower bound on symplectic eigenvalues accepted as physical.
inline constexpr double kPhysicalityTolerance = 1e-9;
/// Relative asymmetry accepted in a covariance matrix.
inline constexpr double kSymmetryTolerance = 1e-12;

class GaussianState {
 public:
  /// Validates symmetry and physicality; throws std::invalid_argument.
  GaussianState(Eigen::VectorXd mean, Eigen::MatrixXd cov);

  int modes() const { return static_cast<int>(mean_.size() / 2); }
  const Eigen::VectorXd& mean() const { return mean_; }
  const Eigen::MatrixXd& cov() const { return cov_; }

  /// Sorted ascending.
  Eigen::VectorXd symplectic_eigenvalues() const;
  bool is_physical(double tolerance = kPhysicalityTolerance) const;

  /// Reduced state of the listed modes, in the listed order.
  GaussianState reduced(std::span<const int> modes) const;

 private:
  struct Trusted {};
  GaussianState(Trusted, Eigen::VectorXd mean, Eigen::MatrixXd cov)
      : mean_(std::move(mean)), cov_(std::move(cov)) {}

  Eigen::VectorXd mean_;
  Eigen::MatrixXd cov_;

  friend GaussianState vacuum(int);
  friend GaussianState coherent(std::complex<double>);
  friend GaussianState tmsv(double);
  friend GaussianState tensor(const GaussianState&, const GaussianState&);
  friend GaussianState apply_beamsplitter(const GaussianState&, int, int, double);
  friend GaussianState apply_phase(const GaussianState&, int, double);
  friend GaussianState apply_loss(const GaussianState&, int, double, double);
  friend GaussianState apply_amplifier(const GaussianState&, int, double);
};

GaussianState vacuum(int n_modes);
GaussianState coherent(std::complex<double> alpha);
/// Two-mode squeezed vacuum with correlated x and anticorrelated p.
GaussianState tmsv(double r);
/// Direct sum: modes of `a` first, then modes of `b`.
GaussianState tensor(const GaussianState& a, const GaussianState& b);

/// out_i = sqrt(t) in_i + sqrt(1-t) in_j,  out_j = sqrt(t) in_j - sqrt(1-t) in_i
GaussianState apply_beamsplitter(const GaussianState& state, int i, int j, double transmissivity);
/// x -> cos(theta) x + sin(theta) p,  p -> cos(theta) p - sin(theta) x
GaussianState apply_phase(const GaussianState& state, int mode, double theta);
/// Pure-loss channel with thermal environment of variance (1 + excess_noise) / 2.
GaussianState apply_loss(const GaussianState& state, int mode, double eta, double excess_noise = 0.0);
/// Phase-insensitive amplifier with vacuum idler.
GaussianState apply_amplifier(const GaussianState& state, int mode, double gain);

enum class Quadrature { kX, kP };

struct QuadratureRead {
  int mode;
  Quadrature quadrature;
};

/// Commuting set of homodyne readouts: each mode appears at most once.
class QuadratureSelection {
 public:
  QuadratureSelection(std::initializer_list<QuadratureRead> reads);
  explicit QuadratureSelection(std::vector<QuadratureRead> reads);

  std::size_t size() const { return reads_.size(); }
  const std::vector<QuadratureRead>& reads() const { return reads_; }
  /// Index into the phase-space vector.
  int phase_space_index(std::size_t k) const;

 private:
  std::vector<QuadratureRead> reads_;
};

/// Joint outcome distribution of a selection, prepared once and sampled many
/// times. Uses the Cholesky factor of the selected covariance block.
class QuadratureSampler {
 public:
  QuadratureSampler(const GaussianState& state, const QuadratureSelection& selection);

  int dim() const { return static_cast<int>(mean_.size()); }
  const Eigen::VectorXd& mean() const { return mean_; }
  const Eigen::MatrixXd& cov() const { return cov_; }

  Eigen::VectorXd draw(RandomStream& rng) const;
  /// Fills `out` (dim rows of n samples, structure-of-arrays) with n draws.
  /// `scratch` must hold dim * n values.
  void draw_batch(RandomStream& rng, std::size_t n, std::span<double> out, std::span<double> scratch) const;

 private:
  Eigen::VectorXd mean_;
  Eigen::MatrixXd cov_;
  Eigen::Matrix<double, Eigen::Dynamic, Eigen::Dynamic, Eigen::RowMajor> lower_;
};

/// One joint homodyne draw of the selected quadratures.
Eigen::VectorXd sample_quadratures(const GaussianState& state, const QuadratureSelection& selection,
                                   RandomStream& rng);

}  // namespace mdicert
