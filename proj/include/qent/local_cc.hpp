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

// Two-round local strategy with classical communication. Round one reads
// sigma_z on both qubits; round two reads sigma_z on A and sigma_x on B.
// Together they fix cos(phi0 - phi1) and cos(phi2 - phi3), which with the
// signs of the two sines determine C^2 without reconstructing the state.

#include <array>
#include <cstdint>
#include <vector>

#include "qent/local_tomography.hpp"
#include "qent/sampling.hpp"
#include "qent/state.hpp"

namespace qent {

/// Outcomes ++, +-, -+, -- of (sigma_z x 1, 1 x sigma_z): P_i = |a_i|^2.
struct RoundOneProbs {
  std::array<double, 4> p{};
};

/// Outcomes ++, +-, -+, -- of (sigma_z x 1, 1 x sigma_x). The first sign is
/// A's z outcome, so pairs {0,1} and {2,3} of the amplitudes interfere.
struct RoundTwoProbs {
  std::array<double, 4> p{};
};

struct PhaseCosines {
  double c01 = 0.0;  // cos(phi0 - phi1)
  double c23 = 0.0;  // cos(phi2 - phi3)
  bool defined01 = false;
  bool defined23 = false;
  bool clamped01 = false;
  bool clamped23 = false;
};

/// Sign of sin(phi0 - phi1) * sin(phi2 - phi3).
enum class Branch : int { plus = 1, minus = -1 };

RoundOneProbs round1_probabilities(const PureState& state);
RoundTwoProbs round2_probabilities(const PureState& state);

PhaseCosines phase_cosines(const RoundOneProbs& r1, const RoundTwoProbs& r2);

/// C^2 = 4 (P1 P2 + P0 P3 - 2 sqrt(P0 P1 P2 P3) cos(phi01 - phi23)), clamped
/// into [0, 1]. Undefined cosines only occur where the cross term vanishes.
Clamped concurrence_sq_cc(const RoundOneProbs& r1, const PhaseCosines& cos, Branch branch);

/// The branch the true state lies on. Either sine being zero makes both
/// branches agree; Branch::plus is returned then.
Branch true_branch(const PureState& state);

struct CcEstimate {
  RoundOneProbs round1;
  RoundTwoProbs round2;
  PhaseCosines cosines;
  double c2_plus = 0.0;
  double c2_minus = 0.0;
  Branch branch = Branch::plus;
  EntanglementValues values;  // on the selected branch
  bool branches_disagree = false;
};

inline constexpr double kBranchDisagreeTolerance = 1e-9;

CcEstimate estimate_entanglement_cc(const RoundOneProbs& r1, const RoundTwoProbs& r2,
                                    Branch branch);
/// Count vectors carry four outcomes each, in the ++, +-, -+, -- order.
CcEstimate estimate_entanglement_cc(const CountVector& round1, const CountVector& round2,
                                    Branch branch);

enum class CovarianceModel {
  multinomial,  // Cov(P_i, P_j) = (delta_ij P_i - P_i P_j) / n within a round
  independent,  // Var(P_i) = P_i (1 - P_i) / n, cross terms dropped
};

/// Gradient of the det-equivalent C^2/4 with respect to the eight round
/// probabilities (round one first), on the given branch.
std::array<double, 8> cc_gradient(const RoundOneProbs& r1, const RoundTwoProbs& r2,
                                  Branch branch);

/// First-order standard deviation of the C^2/4 estimate with N/2 pairs per
/// round, on the true branch. Requires N >= 2.
double analytic_uncertainty_cc(const PureState& state, std::int64_t pairs,
                               CovarianceModel model = CovarianceModel::multinomial);

/// First-order standard errors of the two estimated cosines with N/2 pairs
/// per round (multinomial). Infinite where a cosine is undefined.
std::array<double, 2> cosine_std_errors(const PureState& state, std::int64_t pairs);

UncertaintyReport average_uncertainty_cc(const BlochEnsemble& ensemble, std::int64_t pairs,
                                         CovarianceModel model, unsigned threads = 0,
                                         bool keep_per_state = false);

}  // namespace qent
