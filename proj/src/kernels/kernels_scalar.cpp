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

#include "mdicert/kernels.hpp"

namespace mdicert::kernels {

namespace {

void affine_lower_scalar(const double* lower, const double* mean, int dim, const double* z, double* y,
                         std::size_t n) {
  for (int i = 0; i < dim; ++i) {
    double* yi = y + static_cast<std::size_t>(i) * n;
    for (std::size_t k = 0; k < n; ++k) {
      double acc = mean[i];
      for (int j = 0; j <= i; ++j) acc += lower[i * dim + j] * z[static_cast<std::size_t>(j) * n + k];
      yi[k] = acc;
    }
  }
}

double squared_error_sum_scalar(const double* y, int dim, std::size_t n, const double* wx, double tx,
                                const double* wp, double tp) {
  double total = 0.0;
  for (std::size_t k = 0; k < n; ++k) {
    double ex = -tx;
    double ep = -tp;
    for (int i = 0; i < dim; ++i) {
      const double v = y[static_cast<std::size_t>(i) * n + k];
      ex += wx[i] * v;
      ep += wp[i] * v;
    }
    total += ex * ex + ep * ep;
  }
  return total;
}

void linear_moments_scalar(const double* y, int dim, std::size_t n, const double* w, double* sum,
                           double* sum_sq) {
  double s = 0.0;
  double s2 = 0.0;
  for (std::size_t k = 0; k < n; ++k) {
    double v = 0.0;
    for (int i = 0; i < dim; ++i) v += w[i] * y[static_cast<std::size_t>(i) * n + k];
    s += v;
    s2 += v * v;
  }
  *sum = s;
  *sum_sq = s2;
}

const KernelTable kScalarTable{Isa::kScalar, affine_lower_scalar, squared_error_sum_scalar,
                               linear_moments_scalar};

}  // namespace

const KernelTable& scalar_table() { return kScalarTable; }

}  // namespace mdicert::kernels
