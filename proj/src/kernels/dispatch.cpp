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

#include <atomic>
#include <stdexcept>

namespace mdicert::kernels {

namespace {
std::atomic<const KernelTable*> g_override{nullptr};
}  // namespace

bool cpu_has_avx2() {
#if defined(__x86_64__) && (defined(__GNUC__) || defined(__clang__))
  return __builtin_cpu_supports("avx2") && __builtin_cpu_supports("fma");
#else
  return false;
#endif
}

const KernelTable& active() {
  if (const KernelTable* forced = g_override.load(std::memory_order_acquire)) return *forced;
  static const KernelTable* const detected = [] {
    const KernelTable* avx = avx2_table();
    return (avx != nullptr && cpu_has_avx2()) ? avx : &scalar_table();
  }();
  return *detected;
}

void select(Isa isa) {
  const KernelTable* table = nullptr;
  switch (isa) {
    case Isa::kScalar:
      table = &scalar_table();
      break;
    case Isa::kAvx2:
      table = avx2_table();
      if (table == nullptr || !cpu_has_avx2()) throw std::runtime_error("AVX2 kernels unavailable");
      break;
  }
  g_override.store(table, std::memory_order_release);
}

void reset_selection() { g_override.store(nullptr, std::memory_order_release); }

std::string_view isa_name(Isa isa) {
  switch (isa) {
    case Isa::kScalar:
      return "scalar";
    case Isa::kAvx2:
      return "avx2";
  }
  return "unknown";
}

#if !defined(MDICERT_BUILD_AVX2)
const KernelTable* avx2_table() { return nullptr; }
#endif

}  // namespace mdicert::kernels
