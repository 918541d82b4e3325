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

#include <cmath>
#include <span>

namespace qent {

struct MeanAndError {
  double mean = 0.0;
  double std_error = 0.0;  // sample std / sqrt(n); 0 for n < 2
};

/// Two-pass mean and standard error, summed in index order.
inline MeanAndError mean_and_error(std::span<const double> xs) {
  MeanAndError out;
  if (xs.empty()) return out;
  double sum = 0.0;
  for (double x : xs) sum += x;
  const double n = static_cast<double>(xs.size());
  out.mean = sum / n;
  if (xs.size() < 2) return out;
  double ss = 0.0;
  for (double x : xs) ss += (x - out.mean) * (x - out.mean);
  out.std_error = std::sqrt(ss / (n - 1.0) / n);
  return out;
}

inline double rms(std::span<const double> xs) {
  if (xs.empty()) return 0.0;
  double ss = 0.0;
  for (double x : xs) ss += x * x;
  return std::sqrt(ss / static_cast<double>(xs.size()));
}

}  // namespace qent
