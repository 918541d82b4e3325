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

#include <algorithm>
#include <numeric>

#include "gtest/gtest.h"

#include "qent/local_tomography.hpp"
#include "qent/nogo.hpp"
#include "qent/stats.hpp"

using namespace qent;

namespace {

// Two-sample Kolmogorov-Smirnov statistic.
double ks_statistic(std::vector<double> a, std::vector<double> b) {
  std::sort(a.begin(), a.end());
  std::sort(b.begin(), b.end());
  std::size_t i = 0, j = 0;
  double d = 0.0;
  while (i < a.size() && j < b.size()) {
    const double x = std::min(a[i], b[j]);
    while (i < a.size() && a[i] <= x) ++i;
    while (j < b.size() && b[j] <= x) ++j;
    d = std::max(d, std::abs(static_cast<double>(i) / a.size() - static_cast<double>(j) / b.size()));
  }
  return d;
}

}  // namespace

TEST(SeededStream, same_address_same_sequence) {
  const SeededStream s{1, 0, 0};
  auto e1 = s.engine(), e2 = s.engine();
  for (int i = 0; i < 10; ++i) EXPECT_EQ(e1(), e2());
  EXPECT_NE(SeededStream({1, 1, 0}).engine()(), SeededStream({1, 0, 0}).engine()());
  EXPECT_NE(SeededStream({1, 0, 1}).engine()(), SeededStream({1, 0, 0}).engine()());
  EXPECT_NE(SeededStream({2, 0, 0}).engine()(), SeededStream({1, 0, 0}).engine()());
  EXPECT_NE(s.derive(0).engine()(), s.derive(1).engine()());
  EXPECT_NE(s.derive(0).engine()(), s.engine()());
}

TEST(sample_state, deterministic) {
  const auto a = sample_state({1, 0, 0});
  const auto b = sample_state({1, 0, 0});
  for (std::size_t k = 0; k < 4; ++k) EXPECT_EQ(a[k], b[k]);
}

TEST(sample_state, simplex_moments) {
  constexpr std::size_t n = 100000;
  std::array<std::vector<double>, 4> w;
  for (std::size_t i = 0; i < n; ++i) {
    const auto s = sample_state({42, i, 0});
    for (std::size_t k = 0; k < 4; ++k) w[k].push_back(std::norm(s[k]));
  }
  for (std::size_t k = 0; k < 4; ++k) {
    const auto m = mean_and_error(w[k]);
    EXPECT_NEAR(m.mean, 0.25, 3 * m.std_error);
    double var = 0.0;
    for (double x : w[k]) var += (x - m.mean) * (x - m.mean);
    var /= n - 1;
    // Var = 3/80; the sample variance has relative error ~ 1% at this n.
    EXPECT_NEAR(var, 3.0 / 80.0, 0.03 * 3.0 / 80.0);
  }
}

TEST(sample_state, unitary_invariance_ks) {
  constexpr std::size_t n = 100000;
  const auto u = ObservableBasis::haar({99, 0, 1}).columns();
  std::vector<double> plain(n), rotated(n);
  for (std::size_t i = 0; i < n; ++i) {
    plain[i] = concurrence_sq(sample_state({5, i, 0}));
    const auto s = sample_state({6, i, 0});
    Vec4c v;
    for (int k = 0; k < 4; ++k) v(k) = s[static_cast<std::size_t>(k)];
    const Vec4c r = u * v;
    rotated[i] = concurrence_sq(normalize({r(0), r(1), r(2), r(3)}));
  }
  // 1% critical value for equal sample sizes.
  EXPECT_LT(ks_statistic(plain, rotated), 1.628 * std::sqrt(2.0 / n));
}

TEST(multinomial_counts, deterministic_outcome) {
  const std::array<double, 2> p{1.0, 0.0};
  const auto c = multinomial_counts(p, 100, SeededStream{1, 0, 0});
  EXPECT_EQ(c.counts, (std::vector<std::int64_t>{100, 0}));
  EXPECT_EQ(c.shots, 100);
}

TEST(multinomial_counts, binomial_concentration) {
  const std::array<double, 2> p{0.5, 0.5};
  const auto c = multinomial_counts(p, 1000000, SeededStream{2, 0, 0});
  EXPECT_NEAR(static_cast<double>(c.counts[0]), 500000.0, 5 * 500.0);
  EXPECT_EQ(c.counts[0] + c.counts[1], 1000000);
}

TEST(multinomial_counts, binomial_variance) {
  const std::array<double, 4> p{0.25, 0.25, 0.25, 0.25};
  constexpr std::int64_t shots = 10000;
  std::vector<double> f;
  for (std::uint64_t t = 0; t < 1000; ++t) {
    const auto c = multinomial_counts(p, shots, SeededStream{3, t, 0});
    EXPECT_EQ(std::accumulate(c.counts.begin(), c.counts.end(), std::int64_t{0}), shots);
    f.push_back(c.frequency(0));
  }
  const auto m = mean_and_error(f);
  const double var = m.std_error * m.std_error * static_cast<double>(f.size());
  const double expected = 0.25 * 0.75 / shots;
  EXPECT_NEAR(var, expected, 0.1 * expected);
}

TEST(multinomial_counts, rejects_invalid) {
  const std::array<double, 2> neg{1.1, -0.1};
  const std::array<double, 2> off{0.5, 0.49};
  const std::array<double, 2> ok{0.5, 0.5};
  SeededStream s{1, 0, 0};
  EXPECT_THROW(multinomial_counts(neg, 10, s), std::invalid_argument);
  EXPECT_THROW(multinomial_counts(off, 10, s), std::invalid_argument);
  EXPECT_THROW(multinomial_counts(ok, 0, s), std::invalid_argument);
  const std::array<double, 2> near{0.5, 0.5 + 5e-10};
  EXPECT_NO_THROW(multinomial_counts(near, 10, s));
}

TEST(split_budget, round_robin) {
  EXPECT_EQ(split_budget(9, 3), (std::vector<std::int64_t>{3, 3, 3}));
  EXPECT_EQ(split_budget(10, 3), (std::vector<std::int64_t>{4, 3, 3}));
  EXPECT_EQ(split_budget(11, 3), (std::vector<std::int64_t>{4, 4, 3}));
  EXPECT_EQ(split_budget(7, 2), (std::vector<std::int64_t>{4, 3}));
}

TEST(make_ensemble, independent_of_thread_count) {
  const auto a = make_ensemble(5000, {8, 0, 0}, 1);
  const auto b = make_ensemble(5000, {8, 0, 0}, 4);
  const auto c = make_ensemble(5000, {8, 0, 0}, 7);
  EXPECT_EQ(a.bloch.x, b.bloch.x);
  EXPECT_EQ(a.bloch.z, c.bloch.z);
  EXPECT_EQ(a.concurrence_sq, c.concurrence_sq);
  for (std::size_t i = 0; i < a.size(); i += 97) {
    const auto s = sample_state({8, i, 0});
    EXPECT_EQ(a.states[i][2], s[2]);
  }
}
