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

// Numerical evidence that no single four-outcome projective measurement
// fixes C^2: the K = sigma S^dagger factorization with |det K| = 1, and
// explicit pairs of states that share outcome probabilities but differ in C^2.
//
// Conjugation |O*> is componentwise in the computational basis throughout.

#include <array>
#include <complex>
#include <cstdint>

#include <Eigen/Core>

#include "qent/sampling.hpp"
#include "qent/state.hpp"

namespace qent {

using Mat4c = Eigen::Matrix<std::complex<double>, 4, 4>;
using Vec4c = Eigen::Matrix<std::complex<double>, 4, 1>;

inline constexpr double kOrthonormalTolerance = 1e-10;

/// Four orthonormal vectors |O_i>, stored as the columns of a 4x4 matrix.
class ObservableBasis {
 public:
  /// Throws std::invalid_argument when max |<O_i|O_j> - delta_ij| exceeds
  /// kOrthonormalTolerance.
  explicit ObservableBasis(const Mat4c& columns);

  static ObservableBasis standard() { return ObservableBasis(Mat4c::Identity()); }
  /// Haar-distributed unitary (QR of a complex Ginibre matrix, phases fixed).
  static ObservableBasis haar(const SeededStream& stream);

  const Mat4c& columns() const { return cols_; }
  Vec4c vector(int i) const { return cols_.col(i); }

  /// Coefficients <O_i|psi>.
  Vec4c coefficients(const PureState& state) const;
  /// p_i = |<O_i|psi>|^2.
  std::array<double, 4> probabilities(const PureState& state) const;
  /// sum_i m_i e^{i phi_i} |O_i> in the computational basis.
  PureState compose(const std::array<double, 4>& modulus, const std::array<double, 4>& phase) const;

 private:
  Mat4c cols_;
};

/// sigma_y (x) sigma_y in the computational basis.
Mat4c sigma_yy();

Mat4c k_matrix(const ObservableBasis& basis);      // <O_i| Y |O_j*>
Mat4c s_matrix(const ObservableBasis& basis);      // <O_j*|O_i>
Mat4c sigma_matrix(const ObservableBasis& basis);  // <O_i| Y |O_j>

struct KMatrixReport {
  Mat4c k, s, sigma;
  double abs_det_k = 0.0;
  double abs_det_s = 0.0;
  std::complex<double> det_sigma;
  double symmetry_residual = 0.0;       // ||K - K^T||_F
  double factorization_residual = 0.0;  // ||K - sigma S^dagger||_F
  double unitarity_residual = 0.0;      // ||S^dagger S - 1||_F

  /// Every Lemma check at the given tolerances; det K != 0 follows.
  bool lemma_holds(double residual_tol = 1e-10, double det_tol = 1e-9) const;
};

KMatrixReport verify_lemma(const ObservableBasis& basis);

/// C^2 from the four-index sum over basis coefficients, sum m_i m_j m_k m_l
/// e^{i(phi_k + phi_l - phi_i - phi_j)} K_ij conj(K_kl).
double concurrence_sq_quadruple_sum(const ObservableBasis& basis, const PureState& state);

struct Counterexample {
  PureState low, high;
  std::array<double, 4> probabilities{};  // shared by both states
  std::array<double, 4> modulus{};
  std::array<double, 4> phase_low{}, phase_high{};
  double c2_low = 0.0, c2_high = 0.0;
  double probability_mismatch = 0.0;  // max |p_i(low) - p_i(high)|

  double gap() const { return c2_high - c2_low; }
};

inline constexpr double kRequiredGap = 0.1;
inline constexpr std::size_t kPhaseSearchPoints = 10000;

/// Fixes the moduli m_i in the basis and searches the relative-phase torus
/// for the extremes of C^2. Moduli start at (1/2, 1/2, 1/2, 1/2); if that
/// cannot reach kRequiredGap, further moduli are drawn from `stream`.
/// Throws SearchFailure after the attempts run out.
Counterexample counterexample(const ObservableBasis& basis, const SeededStream& stream);

/// Counterexample for fixed moduli, no fallback; gap may be below the target.
Counterexample phase_extremes(const ObservableBasis& basis, const std::array<double, 4>& modulus);

}  // namespace qent
