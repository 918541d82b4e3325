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

#pragma once

#include <span>
#include <stdexcept>

#include "qent/kernels.hpp"

namespace qent::kernels::detail {

inline void check_sizes(std::size_t n, const BlochBatch& b, std::span<double> out) {
  if (b.x.size() != n || b.y.size() != n || b.z.size() != n || out.size() != n) {
    throw std::invalid_argument("kernel: batch size mismatch");
  }
}

inline void check_sizes(std::size_t n, std::span<double> out) {
  if (out.size() != n) throw std::invalid_argument("kernel: batch size mismatch");
}

void bloch_and_concurrence_scalar(const AmplitudeBatch& in, BlochBatch& bloch,
                                  std::span<double> concurrence_sq);
void local_uncertainty_scalar(const BlochBatch& bloch, const LocalGeometry& g,
                              std::span<double> out);

#ifdef QENT_HAVE_AVX2
void bloch_and_concurrence_avx2(const AmplitudeBatch& in, BlochBatch& bloch,
                                std::span<double> concurrence_sq);
void local_uncertainty_avx2(const BlochBatch& bloch, const LocalGeometry& g,
                            std::span<double> out);
#endif

}  // namespace qent::kernels::detail
