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

#include "qent/local_cc.hpp"

#include <cmath>
#include <limits>
#include <stdexcept>

#include <fmt/format.h>

#include "qent/parallel.hpp"
#include "qent/stats.hpp"

namespace qent {

namespace {

double sign_of(Branch b) { return static_cast<double>(static_cast<int>(b)); }

double sine_from_cosine(double c) { return std::sqrt(std::max(0.0, 1.0 - c * c)); }

RoundOneProbs frequencies1(const CountVector& c) {
  RoundOneProbs r;
  for (std::size_t i = 0; i < 4; ++i) r.p[i] = c.frequency(i);
  return r;
}

RoundTwoProbs frequencies2(const CountVector& c) {
  RoundTwoProbs r;
  for (std::size_t i = 0; i < 4; ++i) r.p[i] = c.frequency(i);
  return r;
}

void check_four_outcomes(const CountVector& c, const char* which) {
  std::int64_t total = 0;
  for (auto k : c.counts) total += k;
  if (c.counts.size() != 4 || c.shots < 1 || total != c.shots) {
    throw std::invalid_argument(
        fmt::format("estimate_entanglement_cc: {} needs 4 counts summing to shots >= 1", which));
  }
}

}  // namespace

RoundOneProbs round1_probabilities(const PureState& state) {
  RoundOneProbs r;
  for (std::size_t i = 0; i < 4; ++i) r.p[i] = std::norm(state[i]);
  return r;
}

RoundTwoProbs round2_probabilities(const PureState& state) {
  RoundTwoProbs r;
  r.p[0] = 0.5 * std::norm(state[0] + state[1]);
  r.p[1] = 0.5 * std::norm(state[0] - state[1]);
  r.p[2] = 0.5 * std::norm(state[2] + state[3]);
  r.p[3] = 0.5 * std::norm(state[2] - state[3]);
  return r;
}

PhaseCosines phase_cosines(const RoundOneProbs& r1, const RoundTwoProbs& r2) {
  const auto& p = r1.p;
  PhaseCosines out;
  const double root01 = std::sqrt(p[0] * p[1]);
  const double root23 = std::sqrt(p[2] * p[3]);
  if (root01 > 0.0) {
    const Clamped c = clamp_range((2.0 * r2.p[0] - p[0] - p[1]) / (2.0 * root01), -1.0, 1.0);
    out.c01 = c.value;
    out.clamped01 = c.clamped;
    out.defined01 = true;
  }
  if (root23 > 0.0) {
    const Clamped c =
        clamp_range((2.0 * r2.p[2] - (1.0 - p[0] - p[1])) / (2.0 * root23), -1.0, 1.0);
    out.c23 = c.value;
    out.clamped23 = c.clamped;
    out.defined23 = true;
  }
  return out;
}

Clamped concurrence_sq_cc(const RoundOneProbs& r1, const PhaseCosines& cos, Branch branch) {
  const auto& p = r1.p;
  double cross = 0.0;
  if (cos.defined01 && cos.defined23) {
    const double cos_diff =
        cos.c01 * cos.c23 + sign_of(branch) * sine_from_cosine(cos.c01) * sine_from_cosine(cos.c23);
    cross = 2.0 * std::sqrt(p[0] * p[1] * p[2] * p[3]) * cos_diff;
  }
  return clamp_range(4.0 * (p[1] * p[2] + p[0] * p[3] - cross), 0.0, 1.0);
}

Branch true_branch(const PureState& state) {
  // sin(phi_i - phi_j) has the sign of Im(a_i conj(a_j)).
  const double s01 = (state[0] * std::conj(state[1])).imag();
  const double s23 = (state[2] * std::conj(state[3])).imag();
  return s01 * s23 < 0.0 ? Branch::minus : Branch::plus;
}

CcEstimate estimate_entanglement_cc(const RoundOneProbs& r1, const RoundTwoProbs& r2,
                                    Branch branch) {
  CcEstimate est;
  est.round1 = r1;
  est.round2 = r2;
  est.cosines = phase_cosines(r1, r2);
  const Clamped plus = concurrence_sq_cc(r1, est.cosines, Branch::plus);
  const Clamped minus = concurrence_sq_cc(r1, est.cosines, Branch::minus);
  est.c2_plus = plus.value;
  est.c2_minus = minus.value;
  est.branch = branch;
  est.branches_disagree = std::abs(plus.value - minus.value) > kBranchDisagreeTolerance;

  const Clamped& chosen = branch == Branch::plus ? plus : minus;
  est.values.concurrence_sq = chosen.value;
  est.values.det_reduced = 0.25 * chosen.value;
  est.values.entropy = entropy_from_concurrence_sq(chosen.value);
  est.values.clamped = chosen.clamped || est.cosines.clamped01 || est.cosines.clamped23;
  return est;
}

CcEstimate estimate_entanglement_cc(const CountVector& round1, const CountVector& round2,
                                    Branch branch) {
  check_four_outcomes(round1, "round one");
  check_four_outcomes(round2, "round two");
  return estimate_entanglement_cc(frequencies1(round1), frequencies2(round2), branch);
}

std::array<double, 8> cc_gradient(const RoundOneProbs& r1, const RoundTwoProbs& r2,
                                  Branch branch) {
  const auto& p = r1.p;
  const auto& q = r2.p;
  std::array<double, 8> g{};
  const double a = std::sqrt(p[0] * p[1]);
  const double b = std::sqrt(p[2] * p[3]);

  // f = P1 P2 + P0 P3 - 2 A B X,  X = c01 c23 + s sin01 sin23.
  g[0] = p[3];
  g[1] = p[2];
  g[2] = p[1];
  g[3] = p[0];
  if (!(a > 0.0) || !(b > 0.0)) return g;

  const double sgn = sign_of(branch);
  const double c01 = (2.0 * q[0] - p[0] - p[1]) / (2.0 * a);
  const double c23 = (2.0 * q[2] - 1.0 + p[0] + p[1]) / (2.0 * b);
  const double s01 = sine_from_cosine(c01);
  const double s23 = sine_from_cosine(c23);
  const double x = c01 * c23 + sgn * s01 * s23;

  const double df_dc01 = -2.0 * a * b * (c23 - sgn * s23 * c01 / s01);
  const double df_dc23 = -2.0 * a * b * (c01 - sgn * s01 * c23 / s23);

  g[0] += -x * b * p[1] / a + df_dc01 * (-0.5 / a - 0.5 * c01 / p[0]) + df_dc23 * (0.5 / b);
  g[1] += -x * b * p[0] / a + df_dc01 * (-0.5 / a - 0.5 * c01 / p[1]) + df_dc23 * (0.5 / b);
  g[2] += -x * a * p[3] / b + df_dc23 * (-0.5 * c23 / p[2]);
  g[3] += -x * a * p[2] / b + df_dc23 * (-0.5 * c23 / p[3]);
  g[4] = df_dc01 / a;
  g[6] = df_dc23 / b;
  return g;
}

namespace {

double round_variance(const double* grad, const double* prob, double shots,
                      CovarianceModel model) {
  double var = 0.0;
  if (model == CovarianceModel::independent) {
    for (int i = 0; i < 4; ++i) var += grad[i] * grad[i] * prob[i] * (1.0 - prob[i]);
  } else {
    double mean = 0.0;
    for (int i = 0; i < 4; ++i) {
      var += grad[i] * grad[i] * prob[i];
      mean += grad[i] * prob[i];
    }
    var -= mean * mean;
  }
  return std::max(var, 0.0) / shots;
}

}  // namespace

double analytic_uncertainty_cc(const PureState& state, std::int64_t pairs,
                               CovarianceModel model) {
  if (pairs < 2) {
    throw std::invalid_argument(
        fmt::format("cc strategy needs N >= 2 pairs to cover two rounds, got {}", pairs));
  }
  const auto split = split_budget(pairs, 2);
  const auto r1 = round1_probabilities(state);
  const auto r2 = round2_probabilities(state);
  const auto g = cc_gradient(r1, r2, true_branch(state));
  const double var = round_variance(g.data(), r1.p.data(), static_cast<double>(split[0]), model) +
                     round_variance(g.data() + 4, r2.p.data(), static_cast<double>(split[1]), model);
  return std::sqrt(var);
}

std::array<double, 2> cosine_std_errors(const PureState& state, std::int64_t pairs) {
  if (pairs < 2) {
    throw std::invalid_argument(
        fmt::format("cc strategy needs N >= 2 pairs to cover two rounds, got {}", pairs));
  }
  const auto split = split_budget(pairs, 2);
  const auto r1 = round1_probabilities(state);
  const auto r2 = round2_probabilities(state);
  const auto& p = r1.p;
  const double a = std::sqrt(p[0] * p[1]);
  const double b = std::sqrt(p[2] * p[3]);
  constexpr double inf = std::numeric_limits<double>::infinity();
  std::array<double, 2> out{inf, inf};
  if (a > 0.0) {
    const double c = (2.0 * r2.p[0] - p[0] - p[1]) / (2.0 * a);
    const double g1[4]{-0.5 / a - 0.5 * c / p[0], -0.5 / a - 0.5 * c / p[1], 0.0, 0.0};
    const double g2[4]{1.0 / a, 0.0, 0.0, 0.0};
    out[0] = std::sqrt(
        round_variance(g1, p.data(), static_cast<double>(split[0]), CovarianceModel::multinomial) +
        round_variance(g2, r2.p.data(), static_cast<double>(split[1]),
                       CovarianceModel::multinomial));
  }
  if (b > 0.0) {
    const double c = (2.0 * r2.p[2] - (1.0 - p[0] - p[1])) / (2.0 * b);
    const double g1[4]{0.5 / b, 0.5 / b, -0.5 * c / p[2], -0.5 * c / p[3]};
    const double g2[4]{0.0, 0.0, 1.0 / b, 0.0};
    out[1] = std::sqrt(
        round_variance(g1, p.data(), static_cast<double>(split[0]), CovarianceModel::multinomial) +
        round_variance(g2, r2.p.data(), static_cast<double>(split[1]),
                       CovarianceModel::multinomial));
  }
  return out;
}

UncertaintyReport average_uncertainty_cc(const BlochEnsemble& ensemble, std::int64_t pairs,
                                         CovarianceModel model, unsigned threads,
                                         bool keep_per_state) {
  if (ensemble.states.empty()) {
    throw std::invalid_argument("average_uncertainty_cc: empty ensemble");
  }
  std::vector<double> per_state(ensemble.states.size());
  parallel_for(per_state.size(), threads, [&](std::size_t i) {
    per_state[i] = analytic_uncertainty_cc(ensemble.states[i], pairs, model);
  });
  const MeanAndError m = mean_and_error(per_state);
  UncertaintyReport r;
  r.delta = m.mean;
  r.std_error = m.std_error;
  r.states = static_cast<std::int64_t>(per_state.size());
  r.pairs = pairs;
  if (keep_per_state) r.per_state = std::move(per_state);
  return r;
}

}  // namespace qent
