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

#include "qent/sampling.hpp"

#include <cmath>
#include <stdexcept>

#include <fmt/format.h>

namespace qent {

namespace {

std::uint64_t splitmix64(std::uint64_t x) {
  x += 0x9E3779B97F4A7C15ULL;
  x = (x ^ (x >> 30)) * 0xBF58476D1CE4E5B9ULL;
  x = (x ^ (x >> 27)) * 0x94D049BB133111EBULL;
  return x ^ (x >> 31);
}

}  // namespace

std::mt19937_64 SeededStream::engine() const {
  auto lo = [](std::uint64_t v) { return static_cast<std::uint32_t>(v); };
  auto hi = [](std::uint64_t v) { return static_cast<std::uint32_t>(v >> 32); };
  std::seed_seq seq{lo(seed), hi(seed), lo(index), hi(index), lo(lane), hi(lane)};
  return std::mt19937_64(seq);
}

SeededStream SeededStream::derive(std::uint64_t tag) const {
  return {seed, index, splitmix64(lane ^ splitmix64(tag))};
}

PureState sample_state(const SeededStream& stream) {
  auto eng = stream.engine();
  std::normal_distribution<double> gauss(0.0, 1.0);
  for (;;) {
    Amplitudes raw;
    for (auto& a : raw) {
      const double re = gauss(eng);
      const double im = gauss(eng);
      a = {re, im};
    }
    double norm2 = 0.0;
    for (const auto& a : raw) norm2 += std::norm(a);
    if (norm2 > 0.0) return normalize(raw);
  }
}

CountVector multinomial_counts(std::span<const double> probabilities, std::int64_t shots,
                               std::mt19937_64& engine) {
  if (shots < 1) throw std::invalid_argument("multinomial_counts: shots must be >= 1");
  if (probabilities.empty()) throw std::invalid_argument("multinomial_counts: no outcomes");
  double total = 0.0;
  for (double p : probabilities) {
    if (!(p >= 0.0) || !std::isfinite(p)) {
      throw std::invalid_argument(fmt::format("multinomial_counts: invalid probability {}", p));
    }
    total += p;
  }
  if (std::abs(total - 1.0) > 1e-9) {
    throw std::invalid_argument(
        fmt::format("multinomial_counts: probabilities sum to {}, not 1", total));
  }

  CountVector out;
  out.shots = shots;
  out.counts.assign(probabilities.size(), 0);
  std::int64_t remaining = shots;
  double mass_left = total;
  for (std::size_t k = 0; k + 1 < probabilities.size() && remaining > 0; ++k) {
    const double p = mass_left > 0.0 ? std::min(1.0, probabilities[k] / mass_left) : 0.0;
    std::int64_t draw = 0;
    if (p >= 1.0) {
      draw = remaining;
    } else if (p > 0.0) {
      std::binomial_distribution<std::int64_t> binom(remaining, p);
      draw = binom(engine);
    }
    out.counts[k] = draw;
    remaining -= draw;
    mass_left -= probabilities[k];
  }
  out.counts.back() += remaining;
  return out;
}

CountVector multinomial_counts(std::span<const double> probabilities, std::int64_t shots,
                               const SeededStream& stream) {
  auto eng = stream.engine();
  return multinomial_counts(probabilities, shots, eng);
}

std::vector<std::int64_t> split_budget(std::int64_t total, std::size_t parts) {
  if (parts == 0) throw std::invalid_argument("split_budget: zero parts");
  const auto n = static_cast<std::int64_t>(parts);
  std::vector<std::int64_t> out(parts, total / n);
  for (std::int64_t r = 0; r < total % n; ++r) ++out[static_cast<std::size_t>(r)];
  return out;
}

}  // namespace qent
