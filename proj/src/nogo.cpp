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

#include "qent/nogo.hpp"

#include <cmath>
#include <numbers>
#include <stdexcept>

#include <Eigen/Dense>
#include <fmt/format.h>

#include "qent/errors.hpp"

namespace qent {

namespace {

constexpr double kTwoPi = 2.0 * std::numbers::pi;

// Additive recurrence with the 3-d generalized golden ratio (root of
// x^4 = x + 1): low-discrepancy points on the unit 3-torus.
constexpr double kPlastic3 = 1.2207440846057596;

double frac(double x) { return x - std::floor(x); }

double c2_at(const ObservableBasis& basis, const std::array<double, 4>& modulus,
             const std::array<double, 4>& phase) {
  return concurrence_sq(basis.compose(modulus, phase));
}

// Compass search on the three free phases; sign = +1 maximizes, -1 minimizes.
std::array<double, 4> refine(const ObservableBasis& basis, const std::array<double, 4>& modulus,
                             std::array<double, 4> phase, double sign) {
  double best = sign * c2_at(basis, modulus, phase);
  for (double step = 0.05; step > 1e-7; step *= 0.5) {
    bool improved = true;
    while (improved) {
      improved = false;
      for (std::size_t k = 1; k < 4; ++k) {
        for (double dir : {1.0, -1.0}) {
          auto trial = phase;
          trial[k] = frac((trial[k] + dir * step) / kTwoPi) * kTwoPi;
          const double v = sign * c2_at(basis, modulus, trial);
          if (v > best) {
            best = v;
            phase = trial;
            improved = true;
          }
        }
      }
    }
  }
  return phase;
}

}  // namespace

ObservableBasis::ObservableBasis(const Mat4c& columns) : cols_(columns) {
  const Mat4c gram = cols_.adjoint() * cols_;
  const double err = (gram - Mat4c::Identity()).cwiseAbs().maxCoeff();
  if (!(err <= kOrthonormalTolerance)) {
    throw std::invalid_argument(fmt::format(
        "ObservableBasis: vectors are not orthonormal (max |<O_i|O_j> - delta_ij| = {:.3g})", err));
  }
}

ObservableBasis ObservableBasis::haar(const SeededStream& stream) {
  auto eng = stream.engine();
  std::normal_distribution<double> gauss(0.0, 1.0);
  Mat4c z;
  for (int r = 0; r < 4; ++r) {
    for (int c = 0; c < 4; ++c) {
      const double re = gauss(eng);
      const double im = gauss(eng);
      z(r, c) = {re, im};
    }
  }
  const Eigen::HouseholderQR<Mat4c> qr(z);
  Mat4c q = qr.householderQ();
  const Mat4c r = qr.matrixQR().triangularView<Eigen::Upper>();
  for (int c = 0; c < 4; ++c) {
    const double mag = std::abs(r(c, c));
    if (mag > 0.0) q.col(c) *= r(c, c) / mag;
  }
  return ObservableBasis(q);
}

Vec4c ObservableBasis::coefficients(const PureState& state) const {
  Vec4c psi;
  for (int i = 0; i < 4; ++i) psi(i) = state[static_cast<std::size_t>(i)];
  return cols_.adjoint() * psi;
}

std::array<double, 4> ObservableBasis::probabilities(const PureState& state) const {
  const Vec4c c = coefficients(state);
  return {std::norm(c(0)), std::norm(c(1)), std::norm(c(2)), std::norm(c(3))};
}

PureState ObservableBasis::compose(const std::array<double, 4>& modulus,
                                   const std::array<double, 4>& phase) const {
  Vec4c psi = Vec4c::Zero();
  for (int i = 0; i < 4; ++i) {
    psi += std::polar(modulus[static_cast<std::size_t>(i)], phase[static_cast<std::size_t>(i)]) *
           cols_.col(i);
  }
  return normalize({psi(0), psi(1), psi(2), psi(3)});
}

Mat4c sigma_yy() {
  Mat4c y = Mat4c::Zero();
  y(0, 3) = -1.0;
  y(1, 2) = 1.0;
  y(2, 1) = 1.0;
  y(3, 0) = -1.0;
  return y;
}

Mat4c k_matrix(const ObservableBasis& basis) {
  const Mat4c& o = basis.columns();
  return o.adjoint() * sigma_yy() * o.conjugate();
}

Mat4c s_matrix(const ObservableBasis& basis) {
  // S_ij = sum_c O_cj O_ci
  const Mat4c& o = basis.columns();
  return o.transpose() * o;
}

Mat4c sigma_matrix(const ObservableBasis& basis) {
  const Mat4c& o = basis.columns();
  return o.adjoint() * sigma_yy() * o;
}

bool KMatrixReport::lemma_holds(double residual_tol, double det_tol) const {
  return symmetry_residual < residual_tol && factorization_residual < residual_tol &&
         unitarity_residual < residual_tol && std::abs(det_sigma - 1.0) < det_tol &&
         std::abs(abs_det_k - 1.0) < det_tol && std::abs(abs_det_s - 1.0) < det_tol;
}

KMatrixReport verify_lemma(const ObservableBasis& basis) {
  KMatrixReport r;
  r.k = k_matrix(basis);
  r.s = s_matrix(basis);
  r.sigma = sigma_matrix(basis);
  r.abs_det_k = std::abs(r.k.determinant());
  r.abs_det_s = std::abs(r.s.determinant());
  r.det_sigma = r.sigma.determinant();
  r.symmetry_residual = (r.k - r.k.transpose()).norm();
  r.factorization_residual = (r.k - r.sigma * r.s.adjoint()).norm();
  r.unitarity_residual = (r.s.adjoint() * r.s - Mat4c::Identity()).norm();
  return r;
}

double concurrence_sq_quadruple_sum(const ObservableBasis& basis, const PureState& state) {
  const Mat4c k = k_matrix(basis);
  const Vec4c c = basis.coefficients(state);
  std::array<double, 4> m{};
  std::array<double, 4> phi{};
  for (int i = 0; i < 4; ++i) {
    m[static_cast<std::size_t>(i)] = std::abs(c(i));
    phi[static_cast<std::size_t>(i)] = std::arg(c(i));
  }
  std::complex<double> sum{};
  for (int i = 0; i < 4; ++i)
    for (int j = 0; j < 4; ++j)
      for (int kk = 0; kk < 4; ++kk)
        for (int l = 0; l < 4; ++l) {
          const auto ui = static_cast<std::size_t>(i), uj = static_cast<std::size_t>(j);
          const auto uk = static_cast<std::size_t>(kk), ul = static_cast<std::size_t>(l);
          const double weight = m[ui] * m[uj] * m[uk] * m[ul];
          const double angle = phi[uk] + phi[ul] - phi[ui] - phi[uj];
          sum += weight * std::polar(1.0, angle) * k(i, j) * std::conj(k(kk, l));
        }
  return sum.real();
}

Counterexample phase_extremes(const ObservableBasis& basis, const std::array<double, 4>& modulus) {
  const std::array<double, 3> alpha{1.0 / kPlastic3, 1.0 / (kPlastic3 * kPlastic3),
                                    1.0 / (kPlastic3 * kPlastic3 * kPlastic3)};
  std::array<double, 4> lo_phase{}, hi_phase{};
  double lo = 2.0, hi = -1.0;
  for (std::size_t n = 0; n < kPhaseSearchPoints; ++n) {
    std::array<double, 4> phase{};
    for (std::size_t k = 0; k < 3; ++k) {
      phase[k + 1] = kTwoPi * frac(0.5 + static_cast<double>(n) * alpha[k]);
    }
    const double v = c2_at(basis, modulus, phase);
    if (v < lo) {
      lo = v;
      lo_phase = phase;
    }
    if (v > hi) {
      hi = v;
      hi_phase = phase;
    }
  }
  lo_phase = refine(basis, modulus, lo_phase, -1.0);
  hi_phase = refine(basis, modulus, hi_phase, +1.0);

  Counterexample ce;
  ce.modulus = modulus;
  ce.phase_low = lo_phase;
  ce.phase_high = hi_phase;
  ce.low = basis.compose(modulus, lo_phase);
  ce.high = basis.compose(modulus, hi_phase);
  ce.c2_low = concurrence_sq(ce.low);
  ce.c2_high = concurrence_sq(ce.high);
  const auto p_low = basis.probabilities(ce.low);
  const auto p_high = basis.probabilities(ce.high);
  ce.probabilities = p_low;
  for (std::size_t i = 0; i < 4; ++i) {
    ce.probability_mismatch = std::max(ce.probability_mismatch, std::abs(p_low[i] - p_high[i]));
  }
  return ce;
}

Counterexample counterexample(const ObservableBasis& basis, const SeededStream& stream) {
  constexpr int kAttempts = 32;
  std::array<double, 4> modulus{0.5, 0.5, 0.5, 0.5};
  auto eng = stream.engine();
  std::normal_distribution<double> gauss(0.0, 1.0);
  double best_gap = -1.0;
  for (int attempt = 0; attempt < kAttempts; ++attempt) {
    Counterexample ce = phase_extremes(basis, modulus);
    if (ce.gap() >= kRequiredGap) return ce;
    best_gap = std::max(best_gap, ce.gap());
    double norm2 = 0.0;
    for (auto& m : modulus) {
      m = std::abs(gauss(eng));
      norm2 += m * m;
    }
    for (auto& m : modulus) m /= std::sqrt(norm2);
  }
  throw SearchFailure(fmt::format(
      "counterexample: best C^2 gap {:.4f} after {} moduli is below the required {}", best_gap,
      kAttempts, kRequiredGap));
}

}  // namespace qent
