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

// Deterministic random streams, Haar-random pure states, and finite-shot
// measurement outcomes.

#include <cstdint>
#include <random>
#include <span>
#include <vector>

#include "qent/state.hpp"

namespace qent {

/// Addresses an independent random sub-stream by (seed, index, lane).
/// Streams are counter-based: the same address always yields the same
/// sequence, regardless of which thread or in which order it is used.
struct SeededStream {
  std::uint64_t seed = 0;
  std::uint64_t index = 0;
  std::uint64_t lane = 0;

  std::mt19937_64 engine() const;

  /// Child stream for a labelled sub-task (e.g. trial t at budget N).
  SeededStream derive(std::uint64_t tag) const;
  SeededStream at(std::uint64_t new_index) const { return {seed, new_index, lane}; }
};

struct CountVector {
  std::vector<std::int64_t> counts;
  std::int64_t shots = 0;

  double frequency(std::size_t k) const {
    return static_cast<double>(counts[k]) / static_cast<double>(shots);
  }
};

/// Haar (unitarily invariant) pure state: eight iid standard normals,
/// normalized.
PureState sample_state(const SeededStream& stream);

/// Throws std::invalid_argument for negative entries, a sum off 1 by more
/// than 1e-9, or shots < 1.
CountVector multinomial_counts(std::span<const double> probabilities, std::int64_t shots,
                               const SeededStream& stream);
CountVector multinomial_counts(std::span<const double> probabilities, std::int64_t shots,
                               std::mt19937_64& engine);

/// Splits a budget into `parts` near-equal shares; the remainder goes
/// round-robin to the leading parts.
std::vector<std::int64_t> split_budget(std::int64_t total, std::size_t parts);

}  // namespace qent
