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

// Batched ensemble kernels over structure-of-arrays data.
//
// Every kernel has a scalar reference implementation and, on x86-64, an
// AVX2+FMA variant. `active()` picks one at runtime from the CPU and the
// QENT_SIMD environment variable ("scalar" or "avx2"). The variants agree
// to a few ulps; tests/test_kernels.cpp pins that.

#include <array>
#include <cstddef>
#include <span>
#include <string_view>
#include <vector>

namespace qent::kernels {

/// Amplitudes of many states, one array per real/imag component.
struct AmplitudeBatch {
  std::array<std::vector<double>, 4> re;
  std::array<std::vector<double>, 4> im;

  std::size_t size() const { return re[0].size(); }
  void resize(std::size_t n);
};

struct BlochBatch {
  std::vector<double> x, y, z;

  std::size_t size() const { return x.size(); }
  void resize(std::size_t n);
};

/// Geometry for the local-tomography variance: direction rows d_k, columns
/// of the inverse direction matrix, and per-direction weights 1/n_k.
struct LocalGeometry {
  std::array<std::array<double, 3>, 3> directions;   // [k][axis]
  std::array<std::array<double, 3>, 3> inverse_cols;  // [k][axis] = (D^-1)[axis][k]
  std::array<double, 3> weights;
};

struct KernelTable {
  std::string_view name;
  // Reduced-state Bloch vector of qubit A and C^2 for each state.
  void (*bloch_and_concurrence)(const AmplitudeBatch& in, BlochBatch& bloch,
                                std::span<double> concurrence_sq);
  // First-order standard deviation of the det(rho_A) estimate per state.
  void (*local_uncertainty)(const BlochBatch& bloch, const LocalGeometry& geom,
                            std::span<double> out);
};

const KernelTable& scalar();
/// nullptr when the AVX2 variant was not compiled in or the CPU lacks it.
const KernelTable* avx2();
const KernelTable& active();

bool cpu_has_avx2();

}  // namespace qent::kernels
