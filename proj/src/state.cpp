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

#include "qent/state.hpp"

#include <algorithm>
#include <cmath>
#include <fstream>
#include <numbers>
#include <sstream>
#include <stdexcept>
#include <vector>

#include <fmt/format.h>

#include "qent/errors.hpp"

namespace qent {

namespace {

constexpr double kTwoPi = 2.0 * std::numbers::pi;

double xlog2x(double x) { return x > 0.0 ? x * std::log2(x) : 0.0; }

}  // namespace

PureState normalize(const Amplitudes& raw) {
  double norm2 = 0.0;
  for (const auto& a : raw) {
    if (!std::isfinite(a.real()) || !std::isfinite(a.imag())) {
      throw std::invalid_argument("normalize: non-finite amplitude");
    }
    norm2 += std::norm(a);
  }
  if (!(norm2 > 0.0)) {
    throw std::invalid_argument("normalize: zero vector has no direction");
  }
  const double inv = 1.0 / std::sqrt(norm2);
  Amplitudes out;
  for (std::size_t i = 0; i < 4; ++i) out[i] = raw[i] * inv;
  return PureState(out);
}

Polar PureState::polar() const {
  Polar p;
  for (std::size_t i = 0; i < 4; ++i) {
    p.modulus[i] = std::abs(amps_[i]);
    double phi = std::arg(amps_[i]);
    if (phi < 0.0) phi += kTwoPi;
    if (phi >= kTwoPi) phi -= kTwoPi;
    p.phase[i] = phi;
  }
  return p;
}

PureState PureState::from_polar(const std::array<double, 4>& modulus,
                                const std::array<double, 4>& phase) {
  Amplitudes a;
  for (std::size_t i = 0; i < 4; ++i) {
    if (modulus[i] < 0.0) throw std::invalid_argument("from_polar: negative modulus");
    a[i] = std::polar(modulus[i], phase[i]);
  }
  return normalize(a);
}

double ReducedState::det() const {
  return (rho[0][0] * rho[1][1] - rho[0][1] * rho[1][0]).real();
}

Clamped clamp_range(double x, double lo, double hi) {
  if (x < lo) return {lo, true};
  if (x > hi) return {hi, true};
  return {x, false};
}

double concurrence_sq(const PureState& state) {
  const auto& a = state.amplitudes();
  return 4.0 * std::norm(a[0] * a[3] - a[1] * a[2]);
}

ReducedState reduced_density(const PureState& state, Subsystem which) {
  const auto& a = state.amplitudes();
  // a[2*i + j]: i indexes qubit A, j qubit B.
  auto amp = [&](int keep, int traced) {
    return which == Subsystem::A ? a[2 * keep + traced] : a[2 * traced + keep];
  };
  ReducedState r;
  for (int i = 0; i < 2; ++i) {
    for (int j = 0; j < 2; ++j) {
      cplx sum{};
      for (int t = 0; t < 2; ++t) sum += amp(i, t) * std::conj(amp(j, t));
      r.rho[i][j] = sum;
    }
  }
  // rho = (1 + sigma.S)/2  =>  rho01 = (Sx - i Sy)/2, rho00 - rho11 = Sz.
  r.bloch = {2.0 * r.rho[0][1].real(), -2.0 * r.rho[0][1].imag(),
             (r.rho[0][0] - r.rho[1][1]).real()};
  return r;
}

Vec3 bloch_vector(const PureState& state, Subsystem which) {
  return reduced_density(state, which).bloch;
}

double det_from_bloch(const Vec3& s) {
  return 0.25 * (1.0 - (s[0] * s[0] + s[1] * s[1] + s[2] * s[2]));
}

Clamped entropy_from_concurrence_sq_checked(double c2) {
  const Clamped c = clamp_range(c2, 0.0, 1.0);
  if (c.value == 0.0) return {0.0, c.clamped};
  if (c.value == 1.0) return {1.0, c.clamped};
  const double root = std::sqrt(1.0 - c.value);
  const double up = 0.5 * (1.0 + root);
  const double down = 0.5 * (1.0 - root);
  return {-(xlog2x(up) + xlog2x(down)), c.clamped};
}

double entropy_from_concurrence_sq(double c2) {
  return entropy_from_concurrence_sq_checked(c2).value;
}

double entropy_slope_wrt_det(double det) {
  // E(lambda) with lambda = (1 + sqrt(1 - 4 det))/2:
  // dE/ddet = log2(lambda / (1 - lambda)) / sqrt(1 - 4 det).
  const double root = std::sqrt(std::max(0.0, 1.0 - 4.0 * det));
  const double up = 0.5 * (1.0 + root);
  const double down = 0.5 * (1.0 - root);
  return std::log2(up / down) / root;
}

EntanglementValues entanglement(const PureState& state) {
  EntanglementValues v;
  v.concurrence_sq = concurrence_sq(state);
  const double det_a = reduced_density(state, Subsystem::A).det();
  const double det_b = reduced_density(state, Subsystem::B).det();
  if (std::abs(v.concurrence_sq - 4.0 * det_a) > 1e-10 ||
      std::abs(v.concurrence_sq - 4.0 * det_b) > 1e-10) {
    throw NumericalCheckError(fmt::format(
        "entanglement: C^2={} disagrees with 4det(rho_A)={} / 4det(rho_B)={}",
        v.concurrence_sq, 4.0 * det_a, 4.0 * det_b));
  }
  v.det_reduced = det_a;
  v.entropy = entropy_from_concurrence_sq(v.concurrence_sq);
  return v;
}

EntanglementValues values_from_det(double det_estimate) {
  const Clamped det = clamp_range(det_estimate, 0.0, 0.25);
  EntanglementValues v;
  v.det_reduced = det.value;
  v.concurrence_sq = 4.0 * det.value;
  v.entropy = entropy_from_concurrence_sq(v.concurrence_sq);
  v.clamped = det.clamped;
  return v;
}

PureState parse_state_literal(std::istream& in) {
  std::vector<double> fields;
  std::string line;
  int line_no = 0;
  while (std::getline(in, line)) {
    ++line_no;
    if (auto hash = line.find('#'); hash != std::string::npos) line.resize(hash);
    std::replace(line.begin(), line.end(), ',', ' ');
    std::istringstream tokens(line);
    std::string tok;
    while (tokens >> tok) {
      const int field = static_cast<int>(fields.size()) + 1;
      if (field > 8) {
        throw ParseError(fmt::format("line {}: unexpected field {} ('{}'); a state "
                                     "literal has exactly 8 reals",
                                     line_no, field, tok),
                         line_no, field);
      }
      std::size_t used = 0;
      double value = 0.0;
      try {
        value = std::stod(tok, &used);
      } catch (const std::exception&) {
        used = 0;
      }
      if (used != tok.size() || !std::isfinite(value)) {
        throw ParseError(
            fmt::format("line {}: field {} ('{}') is not a finite real", line_no, field, tok),
            line_no, field);
      }
      fields.push_back(value);
    }
  }
  if (fields.size() != 8) {
    throw ParseError(fmt::format("expected 8 reals (re/im of a0..a3), found {}", fields.size()),
                     line_no, static_cast<int>(fields.size()) + 1);
  }
  Amplitudes raw;
  for (std::size_t i = 0; i < 4; ++i) raw[i] = {fields[2 * i], fields[2 * i + 1]};
  try {
    return normalize(raw);
  } catch (const std::invalid_argument& e) {
    throw ParseError(fmt::format("state literal: {}", e.what()), line_no, 0);
  }
}

PureState parse_state_literal_file(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw std::runtime_error(fmt::format("cannot open state file '{}'", path));
  try {
    return parse_state_literal(in);
  } catch (const ParseError& e) {
    throw ParseError(fmt::format("{}: {}", path, e.what()), e.line(), e.field());
  }
}

}  // namespace qent
