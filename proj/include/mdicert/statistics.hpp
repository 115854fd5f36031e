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

#include <cstddef>
#include <span>
#include <vector>

namespace mdicert {

/// Running mean/variance (Welford) with Chan's pairwise merge.
class MeanAccumulator {
 public:
  /// Accumulator holding n samples with the given mean and sum of squared
  /// deviations.
  static MeanAccumulator from_moments(std::size_t n, double mean, double m2);

  void add(double x);
  void merge(const MeanAccumulator& other);

  std::size_t count() const { return n_; }
  double mean() const { return mean_; }
  /// Unbiased sample variance; 0 for fewer than two samples.
  double variance() const;
  /// Standard error of the mean.
  double std_error() const;

 private:
  std::size_t n_ = 0;
  double mean_ = 0.0;
  double m2_ = 0.0;
};

/// Reduces per-block means in index order. The result depends only on the
/// values, not on which worker produced them.
MeanAccumulator accumulate(std::span<const double> block_means);

/// Runs fn(begin, end) over [0, n) split into contiguous chunks across
/// `threads` workers. Exceptions from workers are rethrown on the caller.
template <class Fn>
void parallel_blocks(std::size_t n, int threads, Fn&& fn);

}  // namespace mdicert

#include "mdicert/detail/parallel.hpp"
