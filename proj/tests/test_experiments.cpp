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

#include "qent/experiments.hpp"

#include <algorithm>
#include <sstream>

#include "gtest/gtest.h"

#include "test_util.hpp"

using namespace qent;
using namespace qent::test;

namespace {

ExperimentConfig small(const std::string& name, std::int64_t states, std::int64_t pairs) {
  ExperimentConfig cfg;
  cfg.experiment = name;
  cfg.states = states;
  cfg.pairs = pairs;
  cfg.seed = 3;
  return cfg;
}

}  // namespace

TEST(GridSpec, parse_and_format) {
  const auto g = GridSpec::parse("0.5:2:4");
  EXPECT_EQ(g.start, 0.5);
  EXPECT_EQ(g.stop, 2.0);
  EXPECT_EQ(g.steps, 4);
  EXPECT_EQ(g.linear(), (std::vector<double>{0.5, 1.0, 1.5, 2.0}));
  EXPECT_EQ(GridSpec::parse(g.str()).linear(), g.linear());
  const auto geo = GridSpec::parse("10:1000:3").geometric();
  EXPECT_NEAR(geo[1], 100.0, 1e-12);
  for (const char* bad : {"1:2", "1:2:1", "a:2:3", "1:2:3:4", ":2:3", "1:inf:3"}) {
    EXPECT_THROW(GridSpec::parse(bad), std::invalid_argument) << bad;
  }
  EXPECT_THROW(GridSpec::parse("0:1:3").geometric(), std::invalid_argument);
}

TEST(GridSpec, fig1_default) {
  const auto g = default_fig1_grid().linear();
  ASSERT_EQ(g.size(), 41u);
  EXPECT_EQ(g.front(), 1e-3);
  EXPECT_NEAR(g.back(), kPi - 1e-3, 1e-15);
  EXPECT_NEAR(g[20], kPi / 2, 1e-15);
}

TEST(ExperimentConfig, validate) {
  ExperimentConfig cfg;
  EXPECT_NO_THROW(cfg.validate());
  cfg.states = 0;
  EXPECT_THROW(cfg.validate(), std::invalid_argument);
  cfg.states = 1;
  cfg.pairs = 2;
  EXPECT_THROW(cfg.validate(), std::invalid_argument);
  cfg.strategy = Strategy::cc;
  EXPECT_NO_THROW(cfg.validate());
  cfg.pairs = 1;
  EXPECT_THROW(cfg.validate(), std::invalid_argument);
}

TEST(ExperimentConfig, json_round_trip_and_hash) {
  ExperimentConfig cfg = small("scaling", 100, 300);
  cfg.grid = GridSpec::parse("300:3000:3");
  cfg.strategy = Strategy::cc;
  ExperimentConfig back;
  back.apply_json(cfg.to_json());
  EXPECT_EQ(back.to_json(), cfg.to_json());
  EXPECT_EQ(back.hash(), cfg.hash());
  EXPECT_EQ(cfg.hash().size(), 16u);

  ExperimentConfig other = cfg;
  other.out = "x.csv";
  other.threads = 3;
  other.format = OutputFormat::json;
  EXPECT_EQ(other.hash(), cfg.hash());
  other.seed = 4;
  EXPECT_NE(other.hash(), cfg.hash());

  EXPECT_THROW(back.apply_json({{"bogus", 1}}), std::invalid_argument);
  EXPECT_THROW(back.apply_json({{"states", "many"}}), std::invalid_argument);
  EXPECT_THROW(back.apply_json(nlohmann::json::array()), std::invalid_argument);
}

TEST(parse_strategy, names) {
  EXPECT_EQ(parse_strategy("local"), Strategy::local);
  EXPECT_EQ(parse_strategy("cc"), Strategy::cc);
  EXPECT_THROW(parse_strategy("both"), std::invalid_argument);
  EXPECT_THROW(parse_format("xml"), std::invalid_argument);
}

TEST(run_fig1_sweep, minimum_at_right_angle) {
  const auto r = run_fig1_sweep(small("sweep-fig1", 4000, 30000));
  ASSERT_EQ(r.rows.size(), 41u);
  EXPECT_NEAR(r.rows[r.argmin].phi_nm, kPi / 2, kPi / 40 + 1e-12);
  EXPECT_GT(r.rows.front().delta_av, 20 * r.rows[r.argmin].delta_av);
}

TEST(run_fig1_sweep, csv_identical_across_threads) {
  auto cfg = small("sweep-fig1", 3000, 3000);
  cfg.grid = GridSpec::parse("0.1:3:7");
  std::ostringstream a, b;
  cfg.threads = 1;
  write_sweep_csv(run_fig1_sweep(cfg), a);
  cfg.threads = 5;
  write_sweep_csv(run_fig1_sweep(cfg), b);
  EXPECT_EQ(a.str(), b.str());
  EXPECT_EQ(a.str().substr(0, a.str().find('\n')),
            "phi_nm,theta_m,theta_n,delta_av,stderr,M,N,seed,strategy,config_hash");
  EXPECT_NE(a.str().find(cfg.hash()), std::string::npos);
}

TEST(run_symmetry, equalities_hold_in_distribution) {
  auto cfg = small("symmetry", 10000, 30000);
  cfg.theta_n = 1.1;
  cfg.theta_m = 0.6;
  cfg.phi_nm = 2.0;
  const auto r = run_symmetry(cfg);
  ASSERT_EQ(r.cases.size(), 4u);
  EXPECT_TRUE(r.passed);
  for (const auto& c : r.cases) EXPECT_LE(c.deviation_in_se, kSymmetryTolerance) << c.label;
  // Negating one direction leaves every per-state delta unchanged.
  EXPECT_NEAR(r.cases[2].delta_av, r.cases[0].delta_av, 1e-15);
}

TEST(run_scaling, exact_inverse_sqrt) {
  auto cfg = small("scaling", 2000, 3);
  cfg.grid = GridSpec::parse("300:300000:4");
  const auto r = run_scaling(cfg);
  for (const ScalingFit* f : {&r.local, &r.cc_multinomial, &r.cc_independent, &r.local_unsplit}) {
    EXPECT_NEAR(f->slope, -0.5, 0.02) << f->convention;
    EXPECT_GT(f->constant, 0.0);
    EXPECT_LT(f->residual, 1e-3);
    ASSERT_EQ(f->table.size(), 4u);
    for (const auto& p : f->table) EXPECT_NEAR(p.scaled, f->constant, 1e-3 * f->constant);
  }
  // N/3 per direction vs N per direction differ by exactly sqrt(3).
  EXPECT_NEAR(r.local.constant / r.local_unsplit.constant, std::sqrt(3.0), 1e-9);
  EXPECT_NEAR(r.ratio_multinomial(), r.cc_multinomial.constant / r.local.constant, 1e-15);
  std::ostringstream csv;
  write_scaling_csv(r, csv);
  EXPECT_EQ(csv.str().substr(0, csv.str().find('\n')),
            "strategy,convention,N,delta_av,stderr,delta_sqrtN,M,seed,config_hash");
  std::istringstream lines(csv.str());
  int rows = 0;
  for (std::string line; std::getline(lines, line); ++rows) {
    EXPECT_EQ(std::count(line.begin(), line.end(), ','), 8) << line;
  }
  EXPECT_EQ(rows, 1 + 4 * static_cast<int>(r.local.table.size()));
}

TEST(fit_scaling, recovers_constant) {
  std::vector<ScalingPoint> t;
  for (std::int64_t n : {100, 1000, 10000}) t.push_back({n, 0.7 / std::sqrt(double(n)), 0, 0});
  const auto f = fit_scaling("x", "y", t);
  EXPECT_NEAR(f.constant, 0.7, 1e-12);
  EXPECT_NEAR(f.slope, -0.5, 1e-12);
  EXPECT_THROW(fit_scaling("x", "y", {t[0]}), std::invalid_argument);
}

TEST(run_empirical, deterministic_across_threads) {
  auto cfg = small("empirical", 4, 3000);
  cfg.trials = 50;
  std::ostringstream a, b;
  cfg.threads = 1;
  write_empirical_csv(run_empirical(cfg), a);
  cfg.threads = 3;
  write_empirical_csv(run_empirical(cfg), b);
  EXPECT_EQ(a.str(), b.str());
  cfg.strategy = Strategy::cc;
  const auto r = run_empirical(cfg);
  for (const auto& row : r.rows) {
    EXPECT_GT(row.true_concurrence_sq, 0.1);
    EXPECT_LT(row.true_concurrence_sq, 0.9);
  }
}

TEST(run_empirical, bias_vanishes_at_large_n) {
  for (auto strategy : {Strategy::local, Strategy::cc}) {
    auto cfg = small("empirical", 5, 100000);
    cfg.trials = 1000;
    cfg.strategy = strategy;
    for (const auto& row : run_empirical(cfg).rows) {
      EXPECT_LT(std::abs(row.bias), 0.1 * row.rms_error) << to_string(strategy);
      EXPECT_EQ(row.clamp_events, 0);
    }
  }
}

TEST(run_empirical, grid_of_budgets) {
  auto cfg = small("empirical", 2, 300);
  cfg.trials = 20;
  cfg.grid = GridSpec::parse("300:30000:3");
  const auto r = run_empirical(cfg);
  ASSERT_EQ(r.rows.size(), 6u);
  EXPECT_EQ(r.rows[0].pairs, 300);
  EXPECT_EQ(r.rows[5].pairs, 30000);
  EXPECT_EQ(r.rows[0].state_index, r.rows[2].state_index);
}

TEST(empirical_state_eligible, filters) {
  EXPECT_FALSE(empirical_state_eligible(bell(), Strategy::local, 0.1, 0.9));
  EXPECT_TRUE(empirical_state_eligible(state_of(kInvSqrt2, 0.5, 0, 0.5), Strategy::local, 0.1, 0.9));
  // P_2 = 0 fails the cc moduli requirement.
  EXPECT_FALSE(empirical_state_eligible(state_of(kInvSqrt2, 0.5, 0, 0.5), Strategy::cc, 0.1, 0.9));
}

TEST(run_nogo, small_report) {
  const auto r = run_nogo(small("nogo", 30, 3));
  EXPECT_TRUE(r.all_passed());
  EXPECT_EQ(r.lemma_passed, 30);
  EXPECT_EQ(r.counterexamples_found, 30);
  EXPECT_NEAR(r.standard_counterexample.c2_low, 0.0, 1e-15);
  EXPECT_NEAR(r.standard_counterexample.c2_high, 1.0, 1e-15);
  EXPECT_NEAR(r.standard_counterexample.gap(), 1.0, 1e-15);
  std::int64_t in_unit_bin = 0, total = 0;
  for (std::size_t b = 0; b < r.abs_det_k_histogram.size(); ++b) {
    total += r.abs_det_k_histogram[b];
    if (r.histogram_edges[b] < 1.0 && r.histogram_edges[b + 1] > 1.0) {
      in_unit_bin = r.abs_det_k_histogram[b];
    }
  }
  EXPECT_EQ(total, 30);
  EXPECT_EQ(in_unit_bin, 30);
  const auto j = to_json(r);
  EXPECT_TRUE(j["passed"].get<bool>());
  EXPECT_EQ(j["standard_counterexample"]["phase_high"][3].get<double>(), kPi);
}

TEST(run_estimate, bell_local) {
  const auto j = run_estimate(bell(), Strategy::local, 30000, 1);
  EXPECT_NEAR(j["estimate"]["entropy"].get<double>(), 1.0, 0.05);
  EXPECT_EQ(j["counts"].size(), 3u);
  std::int64_t total = 0;
  for (const auto& c : j["counts"]) total += c["up"].get<std::int64_t>() + c["down"].get<std::int64_t>();
  EXPECT_EQ(total, 30000);
}

TEST(run_estimate, product_cc) {
  const auto j = run_estimate(state_of(1, 0, 0, 0), Strategy::cc, 30000, 1);
  EXPECT_NEAR(j["estimate"]["concurrence_sq"].get<double>(), 0.0, 0.05);
  EXPECT_EQ(j["estimate"]["cos01"], nullptr);
}

TEST(run_estimate, rejects_small_budget) {
  EXPECT_THROW(run_estimate(bell(), Strategy::local, 2, 1), std::invalid_argument);
  EXPECT_THROW(run_estimate(bell(), Strategy::cc, 1, 1), std::invalid_argument);
  ExperimentConfig cfg;
  EXPECT_THROW(run_estimate(cfg), std::invalid_argument);
}

TEST(run_estimate, deterministic) {
  const auto s = state_of(0.3, cplx(0.1, 0.5), 0.2, cplx(0.4, -0.3));
  EXPECT_EQ(run_estimate(s, Strategy::cc, 5000, 9).dump(), run_estimate(s, Strategy::cc, 5000, 9).dump());
  EXPECT_NE(run_estimate(s, Strategy::cc, 5000, 9).dump(), run_estimate(s, Strategy::cc, 5000, 10).dump());
}
