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

#include <cmath>

#include "kernels_internal.hpp"

namespace qent::kernels::detail {

void bloch_and_concurrence_scalar(const AmplitudeBatch& in, BlochBatch& bloch,
                                  std::span<double> concurrence_sq) {
  const std::size_t n = in.size();
  check_sizes(n, bloch, concurrence_sq);
  for (std::size_t i = 0; i < n; ++i) {
    const double r0 = in.re[0][i], i0 = in.im[0][i];
    const double r1 = in.re[1][i], i1 = in.im[1][i];
    const double r2 = in.re[2][i], i2 = in.im[2][i];
    const double r3 = in.re[3][i], i3 = in.im[3][i];

    // rho01 = a0 conj(a2) + a1 conj(a3)
    const double rho_re = r0 * r2 + i0 * i2 + r1 * r3 + i1 * i3;
    const double rho_im = i0 * r2 - r0 * i2 + i1 * r3 - r1 * i3;
    bloch.x[i] = 2.0 * rho_re;
    bloch.y[i] = -2.0 * rho_im;
    bloch.z[i] = (r0 * r0 + i0 * i0) + (r1 * r1 + i1 * i1) - (r2 * r2 + i2 * i2) -
                 (r3 * r3 + i3 * i3);

    // a0 a3 - a1 a2
    const double d_re = (r0 * r3 - i0 * i3) - (r1 * r2 - i1 * i2);
    const double d_im = (r0 * i3 + i0 * r3) - (r1 * i2 + i1 * r2);
    concurrence_sq[i] = 4.0 * (d_re * d_re + d_im * d_im);
  }
}

void local_uncertainty_scalar(const BlochBatch& bloch, const LocalGeometry& g,
                              std::span<double> out) {
  const std::size_t n = bloch.size();
  check_sizes(n, out);
  for (std::size_t i = 0; i < n; ++i) {
    const double sx = bloch.x[i], sy = bloch.y[i], sz = bloch.z[i];
    double var = 0.0;
    for (std::size_t k = 0; k < 3; ++k) {
      const auto& d = g.directions[k];
      const auto& c = g.inverse_cols[k];
      const double p = 0.5 * (1.0 + (sx * d[0] + sy * d[1] + sz * d[2]));
      const double grad = -(sx * c[0] + sy * c[1] + sz * c[2]);
      var += g.weights[k] * grad * grad * (p * (1.0 - p));
    }
    out[i] = std::sqrt(var > 0.0 ? var : 0.0);
  }
}

}  // namespace qent::kernels::detail
