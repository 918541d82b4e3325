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

// Alice-only strategy: spin-up frequencies along three linearly independent
// directions reconstruct the Bloch vector of rho_A, hence det rho_A = C^2/4.

#include <array>
#include <cstdint>
#include <vector>

#include "qent/kernels.hpp"
#include "qent/sampling.hpp"
#include "qent/state.hpp"

namespace qent {

inline constexpr double kMaxConditionNumber = 1e8;

/// Three unit measurement directions. Direction 0 is z in the angle
/// parametrization; directions m and n sit at polar angles theta_m, theta_n
/// with n at azimuth 0 and m at azimuth phi_nm.
class DirectionTriple {
 public:
  static DirectionTriple from_angles(double theta_m, double theta_n, double phi_nm);
  /// Normalizes each vector; throws std::invalid_argument on a zero vector.
  static DirectionTriple from_vectors(const Vec3& d0, const Vec3& dm, const Vec3& dn);
  static DirectionTriple orthogonal() { return from_vectors({0, 0, 1}, {1, 0, 0}, {0, 1, 0}); }

  const std::array<Vec3, 3>& directions() const { return dirs_; }
  const Vec3& operator[](std::size_t k) const { return dirs_[k]; }

  /// 2-norm condition number of the matrix with rows d_k; +inf if singular.
  double condition_number() const { return cond_; }
  bool is_degenerate() const { return !(cond_ <= kMaxConditionNumber); }

  /// Inverse of the direction matrix. Throws DegenerateGeometryError when
  /// the condition number exceeds kMaxConditionNumber.
  const std::array<Vec3, 3>& inverse() const;

  kernels::LocalGeometry geometry(const std::array<double, 3>& weights) const;

 private:
  std::array<Vec3, 3> dirs_{};
  std::array<Vec3, 3> inv_{};
  double cond_ = 0.0;
};

struct LocalProbabilities {
  std::array<double, 3> p{};  // spin-up along d0, d_m, d_n
  std::int64_t per_direction = 0;
};

struct UncertaintyReport {
  double delta = 0.0;      // ensemble mean of per-state delta
  double std_error = 0.0;  // standard error of that mean
  std::int64_t states = 0;
  std::int64_t pairs = 0;
  std::int64_t clamp_events = 0;
  std::vector<double> per_state;
};

LocalProbabilities outcome_probabilities(const PureState& state, const DirectionTriple& dirs);
LocalProbabilities outcome_probabilities(const Vec3& bloch, const DirectionTriple& dirs);

/// Solves D S = 2P - 1.
Vec3 reconstruct_bloch(const LocalProbabilities& probs, const DirectionTriple& dirs);

struct LocalEstimate {
  EntanglementValues values;
  Vec3 bloch{};
  double raw_det = 0.0;  // before clamping into [0, 1/4]
};

/// counts[k] = {up, down} along direction k.
LocalEstimate estimate_entanglement_local(const std::array<CountVector, 3>& counts,
                                          const DirectionTriple& dirs);
/// Exact-probability (infinite-sample) limit of the same estimator.
LocalEstimate estimate_entanglement_local(const LocalProbabilities& probs,
                                          const DirectionTriple& dirs);

/// d det(rho_A) / d P_k at Bloch vector s: -s . (column k of D^-1).
std::array<double, 3> det_gradient(const Vec3& s, const DirectionTriple& dirs);

/// First-order standard deviation of the det(rho_A) estimate for a total of
/// `pairs` (split N/3 per direction, remainder round-robin). Requires N >= 3.
double analytic_uncertainty(const PureState& state, const DirectionTriple& dirs,
                            std::int64_t pairs);

/// Same quantity propagated to the entropy, via dE/d(det).
double analytic_entropy_uncertainty(const PureState& state, const DirectionTriple& dirs,
                                    std::int64_t pairs);

/// Per-direction weights 1/n_k for a total budget.
std::array<double, 3> local_weights(std::int64_t pairs);

/// Haar ensemble of Bloch vectors (qubit A) and C^2 values, indices 0..M-1 of
/// the given stream. Identical for any thread count.
struct BlochEnsemble {
  std::vector<PureState> states;
  kernels::BlochBatch bloch;
  std::vector<double> concurrence_sq;
  std::uint64_t seed = 0;

  std::size_t size() const { return bloch.size(); }
};

BlochEnsemble make_ensemble(std::size_t states, const SeededStream& stream,
                            unsigned threads = 0);

UncertaintyReport average_uncertainty(const BlochEnsemble& ensemble, const DirectionTriple& dirs,
                                      std::int64_t pairs, bool keep_per_state = false);
UncertaintyReport average_uncertainty(const DirectionTriple& dirs, std::size_t states,
                                      std::int64_t pairs, const SeededStream& stream);

}  // namespace qent
