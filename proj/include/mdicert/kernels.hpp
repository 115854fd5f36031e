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

// Batched inner loops of the Monte Carlo estimators.
//
// Sample batches are stored structure-of-arrays: coordinate i of sample k
// lives at data[i * n + k]. Each kernel has a scalar reference version and,
// on x86-64, an AVX2/FMA version picked at runtime. The two agree to rounding
// (see tests/test_kernels.cpp); within one process the choice is fixed, so
// results are reproducible run to run.

#include <cstddef>
#include <string_view>

namespace mdicert::kernels {

enum class Isa { kScalar, kAvx2 };

struct KernelTable {
  Isa isa;
  /// y_i = mean_i + sum_{j<=i} lower[i*dim + j] * z_j for every sample.
  void (*affine_lower)(const double* lower, const double* mean, int dim, const double* z, double* y,
                       std::size_t n);
  /// sum_k (wx . y_k - tx)^2 + (wp . y_k - tp)^2
  double (*squared_error_sum)(const double* y, int dim, std::size_t n, const double* wx, double tx,
                              const double* wp, double tp);
  /// sum_k (w . y_k) and sum_k (w . y_k)^2
  void (*linear_moments)(const double* y, int dim, std::size_t n, const double* w, double* sum,
                         double* sum_sq);
};

const KernelTable& scalar_table();
/// nullptr when the AVX2 variant was not compiled in.
const KernelTable* avx2_table();

bool cpu_has_avx2();

/// Best table for this CPU unless overridden with select().
const KernelTable& active();
/// Forces a variant. Throws std::runtime_error if it is unavailable.
void select(Isa isa);
/// Restores automatic selection.
void reset_selection();

std::string_view isa_name(Isa isa);

}  // namespace mdicert::kernels
