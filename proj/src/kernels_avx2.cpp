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

// Compiled with -mavx2 -mfma; only reached after a runtime CPU check.

#include <immintrin.h>

#include <algorithm>
#include <array>
#include <cstring>

#include "kernels_internal.hpp"

namespace qent::kernels::detail {

namespace {

constexpr std::size_t kLanes = 4;

// Loads lanes [i, i+count) of v into a register, zero-padding the rest, so
// tail elements run through the same vector arithmetic as full blocks.
inline __m256d load_partial(const double* v, std::size_t count) {
  if (count == kLanes) return _mm256_loadu_pd(v);
  alignas(32) std::array<double, kLanes> buf{};
  std::memcpy(buf.data(), v, count * sizeof(double));
  return _mm256_load_pd(buf.data());
}

inline void store_partial(double* dst, __m256d x, std::size_t count) {
  if (count == kLanes) {
    _mm256_storeu_pd(dst, x);
    return;
  }
  alignas(32) std::array<double, kLanes> buf;
  _mm256_store_pd(buf.data(), x);
  std::memcpy(dst, buf.data(), count * sizeof(double));
}

inline __m256d norm2(__m256d re, __m256d im) {
  return _mm256_fmadd_pd(re, re, _mm256_mul_pd(im, im));
}

}  // namespace

void bloch_and_concurrence_avx2(const AmplitudeBatch& in, BlochBatch& bloch,
                                std::span<double> concurrence_sq) {
  const std::size_t n = in.size();
  check_sizes(n, bloch, concurrence_sq);
  const __m256d two = _mm256_set1_pd(2.0);
  const __m256d minus_two = _mm256_set1_pd(-2.0);
  const __m256d four = _mm256_set1_pd(4.0);

  for (std::size_t i = 0; i < n; i += kLanes) {
    const std::size_t cnt = std::min(kLanes, n - i);
    const __m256d r0 = load_partial(&in.re[0][i], cnt), i0 = load_partial(&in.im[0][i], cnt);
    const __m256d r1 = load_partial(&in.re[1][i], cnt), i1 = load_partial(&in.im[1][i], cnt);
    const __m256d r2 = load_partial(&in.re[2][i], cnt), i2 = load_partial(&in.im[2][i], cnt);
    const __m256d r3 = load_partial(&in.re[3][i], cnt), i3 = load_partial(&in.im[3][i], cnt);

    __m256d rho_re = _mm256_mul_pd(r0, r2);
    rho_re = _mm256_fmadd_pd(i0, i2, rho_re);
    rho_re = _mm256_fmadd_pd(r1, r3, rho_re);
    rho_re = _mm256_fmadd_pd(i1, i3, rho_re);
    __m256d rho_im = _mm256_mul_pd(i0, r2);
    rho_im = _mm256_fnmadd_pd(r0, i2, rho_im);
    rho_im = _mm256_fmadd_pd(i1, r3, rho_im);
    rho_im = _mm256_fnmadd_pd(r1, i3, rho_im);

    const __m256d sz = _mm256_sub_pd(_mm256_add_pd(norm2(r0, i0), norm2(r1, i1)),
                                     _mm256_add_pd(norm2(r2, i2), norm2(r3, i3)));

    const __m256d d_re = _mm256_sub_pd(_mm256_fmsub_pd(r0, r3, _mm256_mul_pd(i0, i3)),
                                       _mm256_fmsub_pd(r1, r2, _mm256_mul_pd(i1, i2)));
    const __m256d d_im = _mm256_sub_pd(_mm256_fmadd_pd(r0, i3, _mm256_mul_pd(i0, r3)),
                                       _mm256_fmadd_pd(r1, i2, _mm256_mul_pd(i1, r2)));

    store_partial(&bloch.x[i], _mm256_mul_pd(two, rho_re), cnt);
    store_partial(&bloch.y[i], _mm256_mul_pd(minus_two, rho_im), cnt);
    store_partial(&bloch.z[i], sz, cnt);
    store_partial(&concurrence_sq[i], _mm256_mul_pd(four, norm2(d_re, d_im)), cnt);
  }
}

void local_uncertainty_avx2(const BlochBatch& bloch, const LocalGeometry& g,
                            std::span<double> out) {
  const std::size_t n = bloch.size();
  check_sizes(n, out);
  const __m256d half = _mm256_set1_pd(0.5);
  const __m256d one = _mm256_set1_pd(1.0);
  const __m256d zero = _mm256_setzero_pd();

  std::array<std::array<__m256d, 3>, 3> dir{}, col{};
  std::array<__m256d, 3> weight{};
  for (std::size_t k = 0; k < 3; ++k) {
    for (std::size_t a = 0; a < 3; ++a) {
      dir[k][a] = _mm256_set1_pd(g.directions[k][a]);
      col[k][a] = _mm256_set1_pd(g.inverse_cols[k][a]);
    }
    weight[k] = _mm256_set1_pd(g.weights[k]);
  }

  for (std::size_t i = 0; i < n; i += kLanes) {
    const std::size_t cnt = std::min(kLanes, n - i);
    const __m256d sx = load_partial(&bloch.x[i], cnt);
    const __m256d sy = load_partial(&bloch.y[i], cnt);
    const __m256d sz = load_partial(&bloch.z[i], cnt);
    __m256d var = zero;
    for (std::size_t k = 0; k < 3; ++k) {
      __m256d proj = _mm256_mul_pd(sx, dir[k][0]);
      proj = _mm256_fmadd_pd(sy, dir[k][1], proj);
      proj = _mm256_fmadd_pd(sz, dir[k][2], proj);
      const __m256d p = _mm256_mul_pd(half, _mm256_add_pd(one, proj));
      __m256d grad = _mm256_mul_pd(sx, col[k][0]);
      grad = _mm256_fmadd_pd(sy, col[k][1], grad);
      grad = _mm256_fmadd_pd(sz, col[k][2], grad);
      // grad^2 is sign-blind, so the negation in the scalar path is dropped.
      const __m256d bern = _mm256_mul_pd(p, _mm256_sub_pd(one, p));
      var = _mm256_fmadd_pd(_mm256_mul_pd(weight[k], _mm256_mul_pd(grad, grad)), bern, var);
    }
    store_partial(&out[i], _mm256_sqrt_pd(_mm256_max_pd(var, zero)), cnt);
  }
}

}  // namespace qent::kernels::detail
