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

#include <immintrin.h>

#include <cmath>

#include "mdicert/kernels.hpp"

namespace mdicert::kernels {

namespace {

inline double hsum(__m256d v) {
  const __m128d lo = _mm256_castpd256_pd128(v);
  const __m128d hi = _mm256_extractf128_pd(v, 1);
  const __m128d pair = _mm_add_pd(lo, hi);
  return _mm_cvtsd_f64(_mm_add_sd(pair, _mm_unpackhi_pd(pair, pair)));
}

void affine_lower_avx2(const double* lower, const double* mean, int dim, const double* z, double* y,
                       std::size_t n) {
  const std::size_t body = n & ~std::size_t{3};
  for (int i = 0; i < dim; ++i) {
    double* yi = y + static_cast<std::size_t>(i) * n;
    const __m256d m = _mm256_set1_pd(mean[i]);
    for (std::size_t k = 0; k < body; k += 4) {
      __m256d acc = m;
      for (int j = 0; j <= i; ++j) {
        const __m256d zj = _mm256_loadu_pd(z + static_cast<std::size_t>(j) * n + k);
        acc = _mm256_fmadd_pd(_mm256_set1_pd(lower[i * dim + j]), zj, acc);
      }
      _mm256_storeu_pd(yi + k, acc);
    }
    for (std::size_t k = body; k < n; ++k) {
      double acc = mean[i];
      for (int j = 0; j <= i; ++j) acc = std::fma(lower[i * dim + j], z[static_cast<std::size_t>(j) * n + k], acc);
      yi[k] = acc;
    }
  }
}

double squared_error_sum_avx2(const double* y, int dim, std::size_t n, const double* wx, double tx,
                              const double* wp, double tp) {
  const std::size_t body = n & ~std::size_t{3};
  __m256d total = _mm256_setzero_pd();
  const __m256d neg_tx = _mm256_set1_pd(-tx);
  const __m256d neg_tp = _mm256_set1_pd(-tp);
  for (std::size_t k = 0; k < body; k += 4) {
    __m256d ex = neg_tx;
    __m256d ep = neg_tp;
    for (int i = 0; i < dim; ++i) {
      const __m256d v = _mm256_loadu_pd(y + static_cast<std::size_t>(i) * n + k);
      ex = _mm256_fmadd_pd(_mm256_set1_pd(wx[i]), v, ex);
      ep = _mm256_fmadd_pd(_mm256_set1_pd(wp[i]), v, ep);
    }
    total = _mm256_fmadd_pd(ex, ex, total);
    total = _mm256_fmadd_pd(ep, ep, total);
  }
  double result = hsum(total);
  for (std::size_t k = body; k < n; ++k) {
    double ex = -tx;
    double ep = -tp;
    for (int i = 0; i < dim; ++i) {
      const double v = y[static_cast<std::size_t>(i) * n + k];
      ex = std::fma(wx[i], v, ex);
      ep = std::fma(wp[i], v, ep);
    }
    result += ex * ex + ep * ep;
  }
  return result;
}

void linear_moments_avx2(const double* y, int dim, std::size_t n, const double* w, double* sum,
                         double* sum_sq) {
  const std::size_t body = n & ~std::size_t{3};
  __m256d s = _mm256_setzero_pd();
  __m256d s2 = _mm256_setzero_pd();
  for (std::size_t k = 0; k < body; k += 4) {
    __m256d v = _mm256_setzero_pd();
    for (int i = 0; i < dim; ++i) {
      v = _mm256_fmadd_pd(_mm256_set1_pd(w[i]), _mm256_loadu_pd(y + static_cast<std::size_t>(i) * n + k), v);
    }
    s = _mm256_add_pd(s, v);
    s2 = _mm256_fmadd_pd(v, v, s2);
  }
  double total = hsum(s);
  double total_sq = hsum(s2);
  for (std::size_t k = body; k < n; ++k) {
    double v = 0.0;
    for (int i = 0; i < dim; ++i) v = std::fma(w[i], y[static_cast<std::size_t>(i) * n + k], v);
    total += v;
    total_sq += v * v;
  }
  *sum = total;
  *sum_sq = total_sq;
}

const KernelTable kAvx2Table{Isa::kAvx2, affine_lower_avx2, squared_error_sum_avx2, linear_moments_avx2};

}  // namespace

const KernelTable* avx2_table() { return &kAvx2Table; }

}  // namespace mdicert::kernels
