// Copyright 2026 The qent Authors
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

#include "qent/kernels.hpp"

#include <cstdlib>
#include <string>

#include "kernels_internal.hpp"

namespace qent::kernels {

void AmplitudeBatch::resize(std::size_t n) {
  for (auto& v : re) v.resize(n);
  for (auto& v : im) v.resize(n);
}

void BlochBatch::resize(std::size_t n) {
  x.resize(n);
  y.resize(n);
  z.resize(n);
}

bool cpu_has_avx2() {
#if defined(__x86_64__) && (defined(__GNUC__) || defined(__clang__))
  return __builtin_cpu_supports("avx2") && __builtin_cpu_supports("fma");
#else
  return false;
#endif
}

const KernelTable& scalar() {
  static const KernelTable table{"scalar", detail::bloch_and_concurrence_scalar,
                                 detail::local_uncertainty_scalar};
  return table;
}

const KernelTable* avx2() {
#ifdef QENT_HAVE_AVX2
  static const KernelTable table{"avx2", detail::bloch_and_concurrence_avx2,
                                 detail::local_uncertainty_avx2};
  return cpu_has_avx2() ? &table : nullptr;
#else
  return nullptr;
#endif
}

const KernelTable& active() {
  static const KernelTable* chosen = [] {
    const char* env = std::getenv("QENT_SIMD");
    const std::string want = env ? env : "";
    if (want == "scalar") return &scalar();
    if (const KernelTable* v = avx2()) return v;
    return &scalar();
  }();
  return *chosen;
}

}  // namespace qent::kernels
