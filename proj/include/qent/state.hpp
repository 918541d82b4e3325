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

// Exact two-qubit pure-state quantities: amplitudes, reduced density
// operators, Bloch vectors, concurrence and entanglement entropy.
//
// Amplitude ordering is a0|00> + a1|01> + a2|10> + a3|11>, first qubit A.

#include <array>
#include <complex>
#include <iosfwd>
#include <string>

namespace qent {

using cplx = std::complex<double>;
using Amplitudes = std::array<cplx, 4>;
using Vec3 = std::array<double, 3>;

enum class Subsystem { A, B };

struct Polar {
  std::array<double, 4> modulus{};
  std::array<double, 4> phase{};  // each in [0, 2pi)
};

/// Normalized two-qubit pure state. Built through normalize() or
/// from_polar(), so the unit-norm invariant always holds.
class PureState {
 public:
  /// |00>.
  PureState() : amps_{cplx{1.0, 0.0}, cplx{}, cplx{}, cplx{}} {}

  const Amplitudes& amplitudes() const { return amps_; }
  const cplx& operator[](std::size_t i) const { return amps_[i]; }

  Polar polar() const;
  static PureState from_polar(const std::array<double, 4>& modulus,
                              const std::array<double, 4>& phase);

  friend PureState normalize(const Amplitudes& raw);

 private:
  explicit PureState(const Amplitudes& a) : amps_(a) {}
  Amplitudes amps_;
};

/// Throws std::invalid_argument for a zero or non-finite vector.
PureState normalize(const Amplitudes& raw);

struct ReducedState {
  std::array<std::array<cplx, 2>, 2> rho{};
  Vec3 bloch{};

  double det() const;
};

struct EntanglementValues {
  double concurrence_sq = 0.0;
  double det_reduced = 0.0;
  double entropy = 0.0;
  // Set when an estimated input had to be pulled back into its physical range.
  bool clamped = false;
};

struct Clamped {
  double value;
  bool clamped;
};

Clamped clamp_range(double x, double lo, double hi);

double concurrence_sq(const PureState& state);
ReducedState reduced_density(const PureState& state, Subsystem which);

/// (1 - |S|^2) / 4. Negative for |S| > 1; callers clamp.
double det_from_bloch(const Vec3& s);

/// Base-2 entropy of a qubit with squared concurrence c2 (clamped into [0,1]).
double entropy_from_concurrence_sq(double c2);
Clamped entropy_from_concurrence_sq_checked(double c2);

/// dE/d(det rho_A); diverges at det -> 0 and det -> 1/4.
double entropy_slope_wrt_det(double det);

/// Consistency C^2 = 4 det rho_A = 4 det rho_B is checked to 1e-10 and a
/// NumericalCheckError raised otherwise.
EntanglementValues entanglement(const PureState& state);

/// Builds values from a det rho_A estimate, clamping it into [0, 1/4].
EntanglementValues values_from_det(double det_estimate);

// State literal: 8 reals, interleaved re/im of a0..a3. Whitespace or commas
// separate fields; '#' starts a comment. Throws ParseError.
PureState parse_state_literal(std::istream& in);
PureState parse_state_literal_file(const std::string& path);

Vec3 bloch_vector(const PureState& state, Subsystem which = Subsystem::A);

}  // namespace qent
