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

// Acceptance suite: one PASS/FAIL line per headline criterion, at the stated
// tolerances and budgets. Exit status is the number of failed criteria.

#include <algorithm>
#include <chrono>
#include <cmath>
#include <functional>
#include <iostream>
#include <numbers>
#include <random>
#include <string>
#include <vector>

#include <fmt/format.h>

#include "qent/errors.hpp"
#include "qent/experiments.hpp"
#include "qent/local_cc.hpp"
#include "qent/local_tomography.hpp"
#include "qent/nogo.hpp"

using namespace qent;

namespace {

constexpr double kPi = std::numbers::pi;
constexpr std::uint64_t kSeed = 0;

struct Outcome {
  bool pass;
  std::string detail;
};

struct Criterion {
  std::string name;
  std::function<Outcome()> run;
};

const BlochEnsemble& fig1_ensemble() {
  static const BlochEnsemble ens = make_ensemble(10000, {kSeed, 0, 0});
  return ens;
}

Outcome fig1() {
  ExperimentConfig cfg;
  cfg.experiment = "sweep-fig1";
  cfg.seed = kSeed;
  const auto r = run_fig1_sweep(cfg, fig1_ensemble());
  const double step = r.rows[1].phi_nm - r.rows[0].phi_nm;
  const double at = r.rows[r.argmin].phi_nm;
  const bool min_ok = std::abs(at - kPi / 2) <= step + 1e-12;
  double worst = 0.0;
  const std::size_t n = r.rows.size();
  for (std::size_t i = 0; i < n; ++i) {
    const auto& a = r.rows[i];
    const auto& b = r.rows[n - 1 - i];
    const double se = std::max(a.std_error, b.std_error);
    worst = std::max(worst, std::abs(a.delta_av - b.delta_av) / se);
  }
  const bool sym_ok = worst <= 3.0;
  return {min_ok && sym_ok,
          fmt::format("argmin phi_nm = {:.4f} (pi/2 = {:.4f}, step {:.4f}); max |d(phi) - "
                      "d(pi-phi)| = {:.2f} se (limit 3)",
                      at, kPi / 2, step, worst)};
}

Outcome orthogonality() {
  const auto& ens = fig1_ensemble();
  const double orth = average_uncertainty(ens, DirectionTriple::orthogonal(), 30000).delta;
  auto eng = SeededStream{kSeed, 0, 5}.engine();
  std::uniform_real_distribution<double> theta(0.0, kPi), phi(0.0, 2 * kPi);
  double best_other = std::numeric_limits<double>::infinity();
  int beaten = 0, drawn = 0;
  while (drawn < 20) {
    const auto t = DirectionTriple::from_angles(theta(eng), theta(eng), phi(eng));
    if (t.is_degenerate() || t.condition_number() < 1.0 + 1e-9) continue;
    ++drawn;
    const double d = average_uncertainty(ens, t, 30000).delta;
    best_other = std::min(best_other, d);
    if (orth < d) ++beaten;
  }
  return {beaten == 20, fmt::format("orthogonal delta_av = {:.6g}; below {}/20 random triples "
                                    "(best random {:.6g})",
                                    orth, beaten, best_other)};
}

Outcome scaling() {
  ExperimentConfig cfg;
  cfg.experiment = "scaling";
  cfg.states = 100000;
  cfg.seed = kSeed;
  const auto r = run_scaling(cfg);
  auto in = [](double x, double lo, double hi) { return x >= lo && x <= hi; };
  const bool loc = in(r.local.constant, 0.25, 0.37);
  const bool ccm = in(r.cc_multinomial.constant, 1.7, 2.9) && in(r.ratio_multinomial(), 5.5, 10);
  const bool cci = in(r.cc_independent.constant, 1.7, 2.9) && in(r.ratio_independent(), 5.5, 10);
  return {loc && (ccm || cci),
          fmt::format("c_loc = {:.4f} [0.25, 0.37]; c_cc = {:.4f} multinomial / {:.4f} "
                      "independent [1.7, 2.9]; ratio = {:.2f} / {:.2f} [5.5, 10]; "
                      "diagnostic c_loc with N per direction = {:.4f}",
                      r.local.constant, r.cc_multinomial.constant, r.cc_independent.constant,
                      r.ratio_multinomial(), r.ratio_independent(), r.local_unsplit.constant)};
}

Outcome lemma() {
  const auto t0 = std::chrono::steady_clock::now();
  int passed = 0;
  double worst_res = 0.0, worst_det = 0.0;
  for (std::uint64_t i = 0; i < 1000; ++i) {
    const auto r = verify_lemma(ObservableBasis::haar({kSeed, i, 1}));
    worst_res = std::max({worst_res, r.factorization_residual, r.symmetry_residual,
                          r.unitarity_residual});
    worst_det = std::max({worst_det, std::abs(r.det_sigma - 1.0), std::abs(r.abs_det_k - 1.0)});
    if (r.lemma_holds(1e-10, 1e-9)) ++passed;
  }
  const double secs =
      std::chrono::duration<double>(std::chrono::steady_clock::now() - t0).count();
  return {passed == 1000,
          fmt::format("{}/1000 bases; max residual {:.2e} (< 1e-10); max det error {:.2e} "
                      "(< 1e-9); {:.3f} s",
                      passed, worst_res, worst_det, secs)};
}

Outcome counterexamples() {
  const auto basis = ObservableBasis::standard();
  const std::array<double, 4> m{0.5, 0.5, 0.5, 0.5};
  const auto lo = basis.compose(m, {0, 0, 0, 0});
  const auto hi = basis.compose(m, {0, 0, 0, kPi});
  const auto pl = basis.probabilities(lo), ph = basis.probabilities(hi);
  bool std_ok = std::abs(concurrence_sq(lo)) < 1e-12 && std::abs(concurrence_sq(hi) - 1) < 1e-12;
  for (std::size_t i = 0; i < 4; ++i) {
    std_ok = std_ok && std::abs(pl[i] - 0.25) < 1e-12 && std::abs(ph[i] - 0.25) < 1e-12;
  }
  int found = 0;
  double min_gap = 1.0, max_mismatch = 0.0;
  for (std::uint64_t i = 0; i < 100; ++i) {
    try {
      const auto ce = counterexample(ObservableBasis::haar({kSeed, i, 1}), {kSeed, i, 2});
      min_gap = std::min(min_gap, ce.gap());
      max_mismatch = std::max(max_mismatch, ce.probability_mismatch);
      if (ce.gap() >= kRequiredGap && ce.probability_mismatch <= 1e-12) ++found;
    } catch (const SearchFailure&) {
    }
  }
  return {std_ok && found == 100,
          fmt::format("standard basis C^2 {} vs {} at p = 1/4; {}/100 random bases, min gap "
                      "{:.3f} (>= 0.1), max probability mismatch {:.1e}",
                      concurrence_sq(lo), concurrence_sq(hi), found, min_gap, max_mismatch)};
}

Outcome chain_exactness() {
  double worst_local = 0.0, worst_cc = 0.0;
  const auto dirs = DirectionTriple::orthogonal();
  for (std::uint64_t i = 0; i < 1000; ++i) {
    const auto s = sample_state({kSeed, i, 0});
    const double c2 = concurrence_sq(s);
    const auto loc = estimate_entanglement_local(outcome_probabilities(s, dirs), dirs);
    const auto cc =
        estimate_entanglement_cc(round1_probabilities(s), round2_probabilities(s), true_branch(s));
    worst_local = std::max(worst_local, std::abs(loc.values.concurrence_sq - c2));
    worst_cc = std::max(worst_cc, std::abs(cc.values.concurrence_sq - c2));
  }
  return {worst_local < 1e-10 && worst_cc < 1e-10,
          fmt::format("max |C^2 error| local {:.2e}, cc {:.2e} (< 1e-10) over 1000 states",
                      worst_local, worst_cc)};
}

Outcome propagation() {
  ExperimentConfig cfg;
  cfg.experiment = "empirical";
  cfg.states = 50;
  cfg.pairs = 10000;
  cfg.trials = 1000;
  cfg.seed = kSeed;
  double worst_local = 0.0, worst_cc = 0.0;
  int ok_local = 0, ok_cc = 0;
  for (const auto& row : run_empirical(cfg).rows) {
    worst_local = std::max(worst_local, row.relative_mismatch());
    if (row.relative_mismatch() <= 0.15) ++ok_local;
  }
  cfg.strategy = Strategy::cc;
  for (const auto& row : run_empirical(cfg).rows) {
    worst_cc = std::max(worst_cc, row.relative_mismatch());
    if (row.relative_mismatch() <= 0.20) ++ok_cc;
  }
  return {ok_local == 50 && ok_cc == 50,
          fmt::format("local {}/50 within 15% (worst {:.1f}%); cc {}/50 within 20% (worst "
                      "{:.1f}%)",
                      ok_local, 100 * worst_local, ok_cc, 100 * worst_cc)};
}

Outcome quadruple_sum() {
  double worst = 0.0;
  for (std::uint64_t i = 0; i < 1000; ++i) {
    const auto basis = ObservableBasis::haar({kSeed, i, 6});
    const auto s = sample_state({kSeed, i, 7});
    worst = std::max(worst, std::abs(concurrence_sq_quadruple_sum(basis, s) - concurrence_sq(s)));
  }
  return {worst < 1e-8, fmt::format("max |difference| {:.2e} (< 1e-8) over 1000 pairs", worst)};
}

}  // namespace

int main(int argc, char** argv) {
  const std::vector<Criterion> criteria{
      {"fig1-minimum-and-symmetry", fig1},
      {"orthogonal-triple-optimal", orthogonality},
      {"scaling-constants", scaling},
      {"lemma-suite", lemma},
      {"nogo-counterexamples", counterexamples},
      {"estimator-chain-exactness", chain_exactness},
      {"propagation-vs-simulation", propagation},
      {"quadruple-sum-oracle", quadruple_sum},
  };
  const std::string only = argc > 1 ? argv[1] : "";
  int failed = 0, ran = 0;
  for (const auto& c : criteria) {
    if (!only.empty() && c.name != only) continue;
    ++ran;
    Outcome o;
    try {
      o = c.run();
    } catch (const std::exception& e) {
      o = {false, fmt::format("threw: {}", e.what())};
    }
    if (!o.pass) ++failed;
    std::cout << fmt::format("{} {}: {}\n", o.pass ? "PASS" : "FAIL", c.name, o.detail)
              << std::flush;
  }
  if (ran == 0) {
    std::cerr << "unknown criterion '" << only << "'\n";
    return 1;
  }
  std::cout << fmt::format("{}/{} criteria passed\n", ran - failed, ran);
  return failed;
}
