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

#include "qent/local_tomography.hpp"

#include <cmath>
#include <limits>
#include <stdexcept>

#include <Eigen/Dense>
#include <fmt/format.h>

#include "qent/errors.hpp"
#include "qent/parallel.hpp"
#include "qent/stats.hpp"

namespace qent {

namespace {

double dot(const Vec3& a, const Vec3& b) { return a[0] * b[0] + a[1] * b[1] + a[2] * b[2]; }

Vec3 unit(const Vec3& v) {
  const double n = std::sqrt(dot(v, v));
  if (!(n > 0.0) || !std::isfinite(n)) {
    throw std::invalid_argument("DirectionTriple: direction must be a nonzero finite vector");
  }
  return {v[0] / n, v[1] / n, v[2] / n};
}

}  // namespace

DirectionTriple DirectionTriple::from_angles(double theta_m, double theta_n, double phi_nm) {
  const Vec3 z{0.0, 0.0, 1.0};
  const Vec3 m{std::sin(theta_m) * std::cos(phi_nm), std::sin(theta_m) * std::sin(phi_nm),
               std::cos(theta_m)};
  const Vec3 n{std::sin(theta_n), 0.0, std::cos(theta_n)};
  return from_vectors(z, m, n);
}

DirectionTriple DirectionTriple::from_vectors(const Vec3& d0, const Vec3& dm, const Vec3& dn) {
  DirectionTriple t;
  t.dirs_ = {unit(d0), unit(dm), unit(dn)};

  Eigen::Matrix3d d;
  for (int k = 0; k < 3; ++k)
    for (int a = 0; a < 3; ++a) d(k, a) = t.dirs_[k][a];
  const Eigen::JacobiSVD<Eigen::Matrix3d> svd(d);
  const auto& sv = svd.singularValues();
  t.cond_ = sv(2) > 0.0 ? sv(0) / sv(2) : std::numeric_limits<double>::infinity();

  if (std::isfinite(t.cond_)) {
    const Eigen::Matrix3d inv = d.inverse();
    for (int r = 0; r < 3; ++r)
      for (int c = 0; c < 3; ++c) t.inv_[r][c] = inv(r, c);
  }
  return t;
}

const std::array<Vec3, 3>& DirectionTriple::inverse() const {
  if (is_degenerate()) {
    throw DegenerateGeometryError(fmt::format(
        "direction triple is near-coplanar (condition number {:.3g} > {:.0e})", cond_,
        kMaxConditionNumber));
  }
  return inv_;
}

kernels::LocalGeometry DirectionTriple::geometry(const std::array<double, 3>& weights) const {
  const auto& inv = inverse();
  kernels::LocalGeometry g{};
  for (std::size_t k = 0; k < 3; ++k) {
    g.directions[k] = dirs_[k];
    for (std::size_t a = 0; a < 3; ++a) g.inverse_cols[k][a] = inv[a][k];
  }
  g.weights = weights;
  return g;
}

LocalProbabilities outcome_probabilities(const Vec3& bloch, const DirectionTriple& dirs) {
  LocalProbabilities out;
  for (std::size_t k = 0; k < 3; ++k) out.p[k] = 0.5 * (1.0 + dot(bloch, dirs[k]));
  return out;
}

LocalProbabilities outcome_probabilities(const PureState& state, const DirectionTriple& dirs) {
  return outcome_probabilities(bloch_vector(state, Subsystem::A), dirs);
}

Vec3 reconstruct_bloch(const LocalProbabilities& probs, const DirectionTriple& dirs) {
  const auto& inv = dirs.inverse();
  const Vec3 rhs{2.0 * probs.p[0] - 1.0, 2.0 * probs.p[1] - 1.0, 2.0 * probs.p[2] - 1.0};
  return {dot(inv[0], rhs), dot(inv[1], rhs), dot(inv[2], rhs)};
}

LocalEstimate estimate_entanglement_local(const LocalProbabilities& probs,
                                          const DirectionTriple& dirs) {
  LocalEstimate est;
  est.bloch = reconstruct_bloch(probs, dirs);
  est.raw_det = det_from_bloch(est.bloch);
  est.values = values_from_det(est.raw_det);
  return est;
}

LocalEstimate estimate_entanglement_local(const std::array<CountVector, 3>& counts,
                                          const DirectionTriple& dirs) {
  LocalProbabilities probs;
  for (std::size_t k = 0; k < 3; ++k) {
    const auto& c = counts[k];
    if (c.counts.size() != 2 || c.shots < 1 || c.counts[0] + c.counts[1] != c.shots) {
      throw std::invalid_argument(
          fmt::format("estimate_entanglement_local: direction {} needs {{up, down}} counts "
                      "summing to shots >= 1",
                      k));
    }
    probs.p[k] = c.frequency(0);
  }
  probs.per_direction = counts[0].shots;
  return estimate_entanglement_local(probs, dirs);
}

std::array<double, 3> det_gradient(const Vec3& s, const DirectionTriple& dirs) {
  // det = (1 - |S|^2)/4 and dS/dP_k = 2 (column k of D^-1).
  const auto& inv = dirs.inverse();
  std::array<double, 3> g{};
  for (std::size_t k = 0; k < 3; ++k) {
    g[k] = -(s[0] * inv[0][k] + s[1] * inv[1][k] + s[2] * inv[2][k]);
  }
  return g;
}

std::array<double, 3> local_weights(std::int64_t pairs) {
  if (pairs < 3) {
    throw std::invalid_argument(
        fmt::format("local strategy needs N >= 3 pairs to cover three directions, got {}", pairs));
  }
  const auto split = split_budget(pairs, 3);
  return {1.0 / static_cast<double>(split[0]), 1.0 / static_cast<double>(split[1]),
          1.0 / static_cast<double>(split[2])};
}

double analytic_uncertainty(const PureState& state, const DirectionTriple& dirs,
                            std::int64_t pairs) {
  const auto w = local_weights(pairs);
  const Vec3 s = bloch_vector(state, Subsystem::A);
  const auto probs = outcome_probabilities(s, dirs);
  const auto grad = det_gradient(s, dirs);
  double var = 0.0;
  for (std::size_t k = 0; k < 3; ++k) {
    const double p = probs.p[k];
    var += w[k] * grad[k] * grad[k] * p * (1.0 - p);
  }
  return std::sqrt(std::max(var, 0.0));
}

double analytic_entropy_uncertainty(const PureState& state, const DirectionTriple& dirs,
                                    std::int64_t pairs) {
  const double det = reduced_density(state, Subsystem::A).det();
  return std::abs(entropy_slope_wrt_det(det)) * analytic_uncertainty(state, dirs, pairs);
}

BlochEnsemble make_ensemble(std::size_t states, const SeededStream& stream, unsigned threads) {
  BlochEnsemble ens;
  ens.seed = stream.seed;
  ens.states.resize(states);
  parallel_for(states, threads, [&](std::size_t i) { ens.states[i] = sample_state(stream.at(i)); });

  kernels::AmplitudeBatch amps;
  amps.resize(states);
  for (std::size_t i = 0; i < states; ++i) {
    for (std::size_t c = 0; c < 4; ++c) {
      amps.re[c][i] = ens.states[i][c].real();
      amps.im[c][i] = ens.states[i][c].imag();
    }
  }
  ens.bloch.resize(states);
  ens.concurrence_sq.resize(states);
  kernels::active().bloch_and_concurrence(amps, ens.bloch, ens.concurrence_sq);
  return ens;
}

UncertaintyReport average_uncertainty(const BlochEnsemble& ensemble, const DirectionTriple& dirs,
                                      std::int64_t pairs, bool keep_per_state) {
  if (ensemble.size() == 0) throw std::invalid_argument("average_uncertainty: empty ensemble");
  std::vector<double> per_state(ensemble.size());
  kernels::active().local_uncertainty(ensemble.bloch, dirs.geometry(local_weights(pairs)),
                                      per_state);
  const MeanAndError m = mean_and_error(per_state);
  UncertaintyReport r;
  r.delta = m.mean;
  r.std_error = m.std_error;
  r.states = static_cast<std::int64_t>(ensemble.size());
  r.pairs = pairs;
  if (keep_per_state) r.per_state = std::move(per_state);
  return r;
}

UncertaintyReport average_uncertainty(const DirectionTriple& dirs, std::size_t states,
                                      std::int64_t pairs, const SeededStream& stream) {
  if (states < 1) throw std::invalid_argument("average_uncertainty: need at least one state");
  return average_uncertainty(make_ensemble(states, stream), dirs, pairs, true);
}

}  // namespace qent
