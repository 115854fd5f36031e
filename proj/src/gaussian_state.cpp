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

#include "mdicert/gaussian_state.hpp"

#include <algorithm>
#include <array>
#include <cmath>
#include <stdexcept>
#include <string>

#include "mdicert/kernels.hpp"

namespace mdicert {

namespace {

using Index4 = std::array<Eigen::Index, 4>;
using Index2 = std::array<Eigen::Index, 2>;

void check_mode(const GaussianState& state, int mode, const char* what) {
  if (mode < 0 || mode >= state.modes()) {
    throw std::invalid_argument(std::string(what) + ": mode " + std::to_string(mode) + " out of range");
  }
}

Eigen::MatrixXd symplectic_form(int n) {
  Eigen::MatrixXd omega = Eigen::MatrixXd::Zero(2 * n, 2 * n);
  for (int k = 0; k < n; ++k) {
    omega(2 * k, 2 * k + 1) = 1.0;
    omega(2 * k + 1, 2 * k) = -1.0;
  }
  return omega;
}

// S acts on the listed phase-space coordinates; everything else is untouched.
template <class Indices, class Small>
void transform_local(Eigen::VectorXd& mean, Eigen::MatrixXd& cov, const Indices& idx, const Small& s) {
  const Eigen::VectorXd m = mean(idx);
  mean(idx) = s * m;
  const Eigen::MatrixXd rows = cov(idx, Eigen::all);
  cov(idx, Eigen::all) = s * rows;
  const Eigen::MatrixXd cols = cov(Eigen::all, idx);
  cov(Eigen::all, idx) = cols * s.transpose();
}

// Gaussian single-mode channel X = sqrt(scale) I, Y = noise I.
void scale_mode(Eigen::VectorXd& mean, Eigen::MatrixXd& cov, int mode, double scale, double noise) {
  const double root = std::sqrt(scale);
  const Index2 idx{2 * mode, 2 * mode + 1};
  mean(idx) *= root;
  cov(idx, Eigen::all) *= root;
  cov(Eigen::all, idx) *= root;
  cov(2 * mode, 2 * mode) += noise;
  cov(2 * mode + 1, 2 * mode + 1) += noise;
}

}  // namespace

GaussianState::GaussianState(Eigen::VectorXd mean, Eigen::MatrixXd cov)
    : mean_(std::move(mean)), cov_(std::move(cov)) {
  if (mean_.size() == 0 || mean_.size() % 2 != 0) {
    throw std::invalid_argument("GaussianState: mean length must be a positive even number");
  }
  if (cov_.rows() != mean_.size() || cov_.cols() != mean_.size()) {
    throw std::invalid_argument("GaussianState: covariance shape does not match mean");
  }
  if (!mean_.allFinite() || !cov_.allFinite()) {
    throw std::invalid_argument("GaussianState: non-finite entries");
  }
  const double scale = std::max(1.0, cov_.cwiseAbs().maxCoeff());
  if ((cov_ - cov_.transpose()).cwiseAbs().maxCoeff() > kSymmetryTolerance * scale) {
    throw std::invalid_argument("GaussianState: covariance is not symmetric");
  }
  cov_ = 0.5 * (cov_ + cov_.transpose()).eval();
  if (!is_physical()) {
    throw std::invalid_argument("GaussianState: covariance violates the uncertainty principle");
  }
}

Eigen::VectorXd GaussianState::symplectic_eigenvalues() const {
  const int n = modes();
  Eigen::SelfAdjointEigenSolver<Eigen::MatrixXd> cov_eig(cov_);
  const Eigen::VectorXd lambda = cov_eig.eigenvalues();
  if (lambda.minCoeff() <= 0.0) {
    // Not positive definite; report the offending eigenvalue so callers see
    // a value below the physical bound.
    return Eigen::VectorXd::Constant(n, lambda.minCoeff());
  }
  const Eigen::MatrixXd root = cov_eig.operatorSqrt();
  const Eigen::MatrixXd antisym = root * symplectic_form(n) * root;
  const Eigen::MatrixXcd hermitian = std::complex<double>(0.0, 1.0) * antisym.cast<std::complex<double>>();
  Eigen::SelfAdjointEigenSolver<Eigen::MatrixXcd> eig(hermitian, Eigen::EigenvaluesOnly);
  // Eigenvalues come in +/- pairs, sorted ascending; keep the upper half.
  return eig.eigenvalues().tail(n);
}

bool GaussianState::is_physical(double tolerance) const {
  return symplectic_eigenvalues().minCoeff() >= 0.5 - tolerance;
}

GaussianState GaussianState::reduced(std::span<const int> modes) const {
  std::vector<Eigen::Index> idx;
  idx.reserve(2 * modes.size());
  for (int m : modes) {
    check_mode(*this, m, "reduced");
    idx.push_back(2 * m);
    idx.push_back(2 * m + 1);
  }
  return GaussianState(Trusted{}, mean_(idx), cov_(idx, idx));
}

GaussianState vacuum(int n_modes) {
  if (n_modes < 1) throw std::invalid_argument("vacuum: mode count must be >= 1");
  return GaussianState(GaussianState::Trusted{}, Eigen::VectorXd::Zero(2 * n_modes),
                       0.5 * Eigen::MatrixXd::Identity(2 * n_modes, 2 * n_modes));
}

GaussianState coherent(std::complex<double> alpha) {
  Eigen::VectorXd mean(2);
  mean << std::sqrt(2.0) * alpha.real(), std::sqrt(2.0) * alpha.imag();
  return GaussianState(GaussianState::Trusted{}, std::move(mean), 0.5 * Eigen::MatrixXd::Identity(2, 2));
}

GaussianState tmsv(double r) {
  if (!(r >= 0.0) || !std::isfinite(r)) throw std::invalid_argument("tmsv: squeezing must be finite and >= 0");
  const double c = 0.5 * std::cosh(2.0 * r);
  const double s = 0.5 * std::sinh(2.0 * r);
  Eigen::MatrixXd cov(4, 4);
  // clang-format off
  cov << c, 0,  s,  0,
         0, c,  0, -s,
         s, 0,  c,  0,
         0, -s, 0,  c;
  // clang-format on
  return GaussianState(GaussianState::Trusted{}, Eigen::VectorXd::Zero(4), std::move(cov));
}

GaussianState tensor(const GaussianState& a, const GaussianState& b) {
  const Eigen::Index na = a.mean().size();
  const Eigen::Index nb = b.mean().size();
  Eigen::VectorXd mean(na + nb);
  mean << a.mean(), b.mean();
  Eigen::MatrixXd cov = Eigen::MatrixXd::Zero(na + nb, na + nb);
  cov.topLeftCorner(na, na) = a.cov();
  cov.bottomRightCorner(nb, nb) = b.cov();
  return GaussianState(GaussianState::Trusted{}, std::move(mean), std::move(cov));
}

GaussianState apply_beamsplitter(const GaussianState& state, int i, int j, double transmissivity) {
  check_mode(state, i, "apply_beamsplitter");
  check_mode(state, j, "apply_beamsplitter");
  if (i == j) throw std::invalid_argument("apply_beamsplitter: modes must differ");
  if (!(transmissivity >= 0.0 && transmissivity <= 1.0)) {
    throw std::invalid_argument("apply_beamsplitter: transmissivity must lie in [0, 1]");
  }
  const double c = std::sqrt(transmissivity);
  const double s = std::sqrt(1.0 - transmissivity);
  Eigen::Matrix4d mix;
  // clang-format off
  mix <<  c, 0, s, 0,
          0, c, 0, s,
         -s, 0, c, 0,
          0, -s, 0, c;
  // clang-format on
  Eigen::VectorXd mean = state.mean();
  Eigen::MatrixXd cov = state.cov();
  transform_local(mean, cov, Index4{2 * i, 2 * i + 1, 2 * j, 2 * j + 1}, mix);
  return GaussianState(GaussianState::Trusted{}, std::move(mean), std::move(cov));
}

GaussianState apply_phase(const GaussianState& state, int mode, double theta) {
  check_mode(state, mode, "apply_phase");
  const double c = std::cos(theta);
  const double s = std::sin(theta);
  Eigen::Matrix2d rot;
  rot << c, s, -s, c;
  Eigen::VectorXd mean = state.mean();
  Eigen::MatrixXd cov = state.cov();
  transform_local(mean, cov, Index2{2 * mode, 2 * mode + 1}, rot);
  return GaussianState(GaussianState::Trusted{}, std::move(mean), std::move(cov));
}

GaussianState apply_loss(const GaussianState& state, int mode, double eta, double excess_noise) {
  check_mode(state, mode, "apply_loss");
  if (!(eta > 0.0 && eta <= 1.0)) throw std::invalid_argument("apply_loss: eta must lie in (0, 1]");
  if (!(excess_noise >= 0.0) || !std::isfinite(excess_noise)) {
    throw std::invalid_argument("apply_loss: excess noise must be finite and >= 0");
  }
  Eigen::VectorXd mean = state.mean();
  Eigen::MatrixXd cov = state.cov();
  scale_mode(mean, cov, mode, eta, (1.0 - eta) * 0.5 * (1.0 + excess_noise));
  return GaussianState(GaussianState::Trusted{}, std::move(mean), std::move(cov));
}

GaussianState apply_amplifier(const GaussianState& state, int mode, double gain) {
  check_mode(state, mode, "apply_amplifier");
  if (!(gain >= 1.0) || !std::isfinite(gain)) throw std::invalid_argument("apply_amplifier: gain must be >= 1");
  Eigen::VectorXd mean = state.mean();
  Eigen::MatrixXd cov = state.cov();
  scale_mode(mean, cov, mode, gain, (gain - 1.0) * 0.5);
  return GaussianState(GaussianState::Trusted{}, std::move(mean), std::move(cov));
}

QuadratureSelection::QuadratureSelection(std::initializer_list<QuadratureRead> reads)
    : QuadratureSelection(std::vector<QuadratureRead>(reads)) {}

QuadratureSelection::QuadratureSelection(std::vector<QuadratureRead> reads) : reads_(std::move(reads)) {
  if (reads_.empty()) throw std::invalid_argument("QuadratureSelection: empty selection");
  for (std::size_t a = 0; a < reads_.size(); ++a) {
    if (reads_[a].mode < 0) throw std::invalid_argument("QuadratureSelection: negative mode index");
    for (std::size_t b = a + 1; b < reads_.size(); ++b) {
      if (reads_[a].mode == reads_[b].mode) {
        throw std::invalid_argument("QuadratureSelection: mode " + std::to_string(reads_[a].mode) +
                                    " selected twice");
      }
    }
  }
}

int QuadratureSelection::phase_space_index(std::size_t k) const {
  const auto& r = reads_.at(k);
  return 2 * r.mode + (r.quadrature == Quadrature::kP ? 1 : 0);
}

QuadratureSampler::QuadratureSampler(const GaussianState& state, const QuadratureSelection& selection) {
  std::vector<Eigen::Index> idx;
  idx.reserve(selection.size());
  for (std::size_t k = 0; k < selection.size(); ++k) {
    if (selection.reads()[k].mode >= state.modes()) {
      throw std::invalid_argument("QuadratureSelection: mode out of range for state");
    }
    idx.push_back(selection.phase_space_index(k));
  }
  mean_ = state.mean()(idx);
  cov_ = state.cov()(idx, idx);
  Eigen::LLT<Eigen::MatrixXd> llt(cov_);
  if (llt.info() != Eigen::Success) {
    throw std::invalid_argument("QuadratureSampler: selected covariance is not positive definite");
  }
  lower_ = llt.matrixL();
}

Eigen::VectorXd QuadratureSampler::draw(RandomStream& rng) const {
  Eigen::VectorXd z(dim());
  for (int k = 0; k < dim(); ++k) z(k) = rng.normal();
  return mean_ + lower_.triangularView<Eigen::Lower>() * z;
}

void QuadratureSampler::draw_batch(RandomStream& rng, std::size_t n, std::span<double> out,
                                   std::span<double> scratch) const {
  const std::size_t d = static_cast<std::size_t>(dim());
  if (out.size() < d * n || scratch.size() < d * n) {
    throw std::invalid_argument("QuadratureSampler::draw_batch: buffer too small");
  }
  // Sample-major draw order keeps the stream identical to repeated draw().
  for (std::size_t k = 0; k < n; ++k) {
    for (std::size_t i = 0; i < d; ++i) scratch[i * n + k] = rng.normal();
  }
  kernels::active().affine_lower(lower_.data(), mean_.data(), dim(), scratch.data(), out.data(), n);
}

Eigen::VectorXd sample_quadratures(const GaussianState& state, const QuadratureSelection& selection,
                                   RandomStream& rng) {
  return QuadratureSampler(state, selection).draw(rng);
}

}  // namespace mdicert
