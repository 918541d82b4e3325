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
#include <cmath>
#include <limits>
#include <numbers>
#include <ostream>
#include <stdexcept>

#include <fmt/format.h>
#include <fmt/ostream.h>

#include "qent/errors.hpp"
#include "qent/parallel.hpp"
#include "qent/stats.hpp"

namespace qent {

namespace {

constexpr double kPi = std::numbers::pi;

// Stream lanes; each experiment family draws from its own lane so that e.g.
// the nogo bases never alias the Haar state ensemble.
constexpr std::uint64_t kLaneStates = 0;
constexpr std::uint64_t kLaneBases = 1;
constexpr std::uint64_t kLaneCounterexample = 2;
constexpr std::uint64_t kLaneTrials = 3;
constexpr std::uint64_t kLaneEstimate = 4;

SeededStream state_stream(std::uint64_t seed) { return {seed, 0, kLaneStates}; }

std::vector<std::int64_t> pair_grid(const ExperimentConfig& cfg, const GridSpec& fallback) {
  const GridSpec g = cfg.grid.value_or(fallback);
  std::vector<std::int64_t> out;
  for (double v : g.geometric()) {
    const auto n = static_cast<std::int64_t>(std::llround(v));
    if (out.empty() || out.back() != n) out.push_back(n);
  }
  return out;
}

nlohmann::json json_array(const std::array<double, 4>& a) { return {a[0], a[1], a[2], a[3]}; }

nlohmann::json json_state(const PureState& s) {
  nlohmann::json j = nlohmann::json::array();
  for (std::size_t i = 0; i < 4; ++i) {
    j.push_back(s[i].real());
    j.push_back(s[i].imag());
  }
  return j;
}

nlohmann::json json_matrix(const Mat4c& m) {
  nlohmann::json rows = nlohmann::json::array();
  for (int r = 0; r < 4; ++r) {
    nlohmann::json row = nlohmann::json::array();
    for (int c = 0; c < 4; ++c) row.push_back({m(r, c).real(), m(r, c).imag()});
    rows.push_back(row);
  }
  return rows;
}

nlohmann::json json_values(const EntanglementValues& v) {
  return {{"det", v.det_reduced},
          {"concurrence_sq", v.concurrence_sq},
          {"entropy", v.entropy},
          {"clamped", v.clamped}};
}

std::array<double, 2> binary(double p) {
  const double q = std::clamp(p, 0.0, 1.0);
  return {q, 1.0 - q};
}

}  // namespace

// ---- sweep-fig1 -------------------------------------------------------------

SweepResult run_fig1_sweep(const ExperimentConfig& cfg) {
  cfg.validate();
  const auto ens = make_ensemble(static_cast<std::size_t>(cfg.states), state_stream(cfg.seed),
                                 cfg.threads);
  return run_fig1_sweep(cfg, ens);
}

SweepResult run_fig1_sweep(const ExperimentConfig& cfg, const BlochEnsemble& ensemble) {
  SweepResult r;
  r.states = static_cast<std::int64_t>(ensemble.size());
  r.pairs = cfg.pairs;
  r.seed = cfg.seed;
  r.config_hash = cfg.hash();
  const GridSpec grid = cfg.grid.value_or(default_fig1_grid());
  for (double phi : grid.linear()) {
    const auto dirs = DirectionTriple::from_angles(cfg.theta_m, cfg.theta_n, phi);
    const auto rep = average_uncertainty(ensemble, dirs, cfg.pairs);
    r.rows.push_back({phi, cfg.theta_m, cfg.theta_n, rep.delta, rep.std_error});
  }
  r.argmin = static_cast<std::size_t>(
      std::min_element(r.rows.begin(), r.rows.end(),
                       [](const SweepRow& a, const SweepRow& b) { return a.delta_av < b.delta_av; }) -
      r.rows.begin());
  return r;
}

void write_sweep_csv(const SweepResult& r, std::ostream& out) {
  out << "phi_nm,theta_m,theta_n,delta_av,stderr,M,N,seed,strategy,config_hash\n";
  for (const auto& row : r.rows) {
    fmt::print(out, "{},{},{},{},{},{},{},{},local,{}\n", row.phi_nm, row.theta_m, row.theta_n,
               row.delta_av, row.std_error, r.states, r.pairs, r.seed, r.config_hash);
  }
}

nlohmann::json to_json(const SweepResult& r) {
  nlohmann::json rows = nlohmann::json::array();
  for (const auto& row : r.rows) {
    rows.push_back({{"phi_nm", row.phi_nm},
                    {"theta_m", row.theta_m},
                    {"theta_n", row.theta_n},
                    {"delta_av", row.delta_av},
                    {"stderr", row.std_error}});
  }
  return {{"experiment", "sweep-fig1"},
          {"rows", rows},
          {"argmin_phi_nm", r.rows.empty() ? 0.0 : r.rows[r.argmin].phi_nm},
          {"M", r.states},
          {"N", r.pairs},
          {"seed", r.seed},
          {"config_hash", r.config_hash}};
}

// ---- symmetry ---------------------------------------------------------------

SymmetryResult run_symmetry(const ExperimentConfig& cfg) {
  cfg.validate();
  const auto ens = make_ensemble(static_cast<std::size_t>(cfg.states), state_stream(cfg.seed),
                                 cfg.threads);
  return run_symmetry(cfg, ens);
}

SymmetryResult run_symmetry(const ExperimentConfig& cfg, const BlochEnsemble& ensemble) {
  const double tn = cfg.theta_n, tm = cfg.theta_m, phi = cfg.phi_nm;
  struct Variant {
    const char* label;
    double theta_n, theta_m, phi_nm;
  };
  const Variant variants[] = {
      {"base", tn, tm, phi},
      {"(pi-theta_n, theta_m, pi-phi_nm)", kPi - tn, tm, kPi - phi},
      {"(theta_n, pi-theta_m, phi_nm-pi)", tn, kPi - tm, phi - kPi},
      {"(pi-theta_n, pi-theta_m, phi_nm)", kPi - tn, kPi - tm, phi},
  };
  SymmetryResult r;
  r.config_hash = cfg.hash();
  r.passed = true;
  for (const auto& v : variants) {
    const auto dirs = DirectionTriple::from_angles(v.theta_m, v.theta_n, v.phi_nm);
    const auto rep = average_uncertainty(ensemble, dirs, cfg.pairs);
    SymmetryCase c{v.label, v.theta_n, v.theta_m, v.phi_nm, rep.delta, rep.std_error, 0.0};
    if (!r.cases.empty()) {
      const auto& base = r.cases.front();
      const double se = std::max(base.std_error, c.std_error);
      c.deviation_in_se = se > 0.0 ? std::abs(c.delta_av - base.delta_av) / se
                                   : (c.delta_av == base.delta_av ? 0.0 : std::numeric_limits<double>::infinity());
      if (!(c.deviation_in_se <= kSymmetryTolerance)) r.passed = false;
    }
    r.cases.push_back(c);
  }
  return r;
}

nlohmann::json to_json(const SymmetryResult& r) {
  nlohmann::json cases = nlohmann::json::array();
  for (const auto& c : r.cases) {
    cases.push_back({{"label", c.label},
                     {"theta_n", c.theta_n},
                     {"theta_m", c.theta_m},
                     {"phi_nm", c.phi_nm},
                     {"delta_av", c.delta_av},
                     {"stderr", c.std_error},
                     {"deviation_in_se", c.deviation_in_se}});
  }
  return {{"experiment", "symmetry"},
          {"cases", cases},
          {"tolerance_se", kSymmetryTolerance},
          {"passed", r.passed},
          {"config_hash", r.config_hash}};
}

// ---- scaling ----------------------------------------------------------------

ScalingFit fit_scaling(std::string strategy, std::string convention,
                       std::vector<ScalingPoint> table) {
  if (table.size() < 2) throw std::invalid_argument("fit_scaling: need at least two N values");
  ScalingFit f;
  f.strategy = std::move(strategy);
  f.convention = std::move(convention);
  const double n = static_cast<double>(table.size());
  double sx = 0.0, sy = 0.0, sxx = 0.0, sxy = 0.0, fixed = 0.0;
  for (auto& p : table) {
    p.scaled = p.delta_av * std::sqrt(static_cast<double>(p.pairs));
    const double x = std::log(static_cast<double>(p.pairs));
    const double y = std::log(p.delta_av);
    sx += x;
    sy += y;
    sxx += x * x;
    sxy += x * y;
    fixed += y + 0.5 * x;
  }
  f.slope = (n * sxy - sx * sy) / (n * sxx - sx * sx);
  const double intercept = (sy - f.slope * sx) / n;
  f.intercept_constant = std::exp(intercept);
  f.constant = std::exp(fixed / n);
  double ss = 0.0;
  for (const auto& p : table) {
    const double resid =
        std::log(p.delta_av) - (intercept + f.slope * std::log(static_cast<double>(p.pairs)));
    ss += resid * resid;
  }
  f.residual = std::sqrt(ss / n);
  f.table = std::move(table);
  return f;
}

ScalingResult run_scaling(const ExperimentConfig& cfg) {
  cfg.validate();
  const auto ens = make_ensemble(static_cast<std::size_t>(cfg.states), state_stream(cfg.seed),
                                 cfg.threads);
  return run_scaling(cfg, ens);
}

ScalingResult run_scaling(const ExperimentConfig& cfg, const BlochEnsemble& ensemble) {
  const auto grid = pair_grid(cfg, default_scaling_grid());
  if (grid.size() < 2) throw std::invalid_argument("scaling: N grid needs >= 2 distinct values");
  const auto orth = DirectionTriple::orthogonal();

  std::vector<ScalingPoint> local, unsplit, cc_multi, cc_indep;
  for (std::int64_t n : grid) {
    const auto l = average_uncertainty(ensemble, orth, n);
    local.push_back({n, l.delta, l.std_error, 0.0});
    const auto u = average_uncertainty(ensemble, orth, 3 * n);
    unsplit.push_back({n, u.delta, u.std_error, 0.0});
    const auto cm = average_uncertainty_cc(ensemble, n, CovarianceModel::multinomial, cfg.threads);
    cc_multi.push_back({n, cm.delta, cm.std_error, 0.0});
    const auto ci = average_uncertainty_cc(ensemble, n, CovarianceModel::independent, cfg.threads);
    cc_indep.push_back({n, ci.delta, ci.std_error, 0.0});
  }
  ScalingResult r;
  r.local = fit_scaling("local", "split", std::move(local));
  r.local_unsplit = fit_scaling("local", "unsplit", std::move(unsplit));
  r.cc_multinomial = fit_scaling("cc", "multinomial", std::move(cc_multi));
  r.cc_independent = fit_scaling("cc", "independent", std::move(cc_indep));
  r.states = static_cast<std::int64_t>(ensemble.size());
  r.seed = cfg.seed;
  r.config_hash = cfg.hash();
  return r;
}

void write_scaling_csv(const ScalingResult& r, std::ostream& out) {
  out << "strategy,convention,N,delta_av,stderr,delta_sqrtN,M,seed,config_hash\n";
  for (const ScalingFit* f : {&r.local, &r.cc_multinomial, &r.cc_independent, &r.local_unsplit}) {
    for (const auto& p : f->table) {
      fmt::print(out, "{},{},{},{},{},{},{},{},{}\n", f->strategy, f->convention, p.pairs,
                 p.delta_av, p.std_error, p.scaled, r.states, r.seed, r.config_hash);
    }
  }
}

nlohmann::json to_json(const ScalingResult& r) {
  auto fit = [](const ScalingFit& f) {
    nlohmann::json table = nlohmann::json::array();
    for (const auto& p : f.table) {
      table.push_back({{"N", p.pairs},
                       {"delta_av", p.delta_av},
                       {"stderr", p.std_error},
                       {"delta_sqrtN", p.scaled}});
    }
    return nlohmann::json{{"strategy", f.strategy},
                          {"convention", f.convention},
                          {"constant", f.constant},
                          {"slope", f.slope},
                          {"intercept_constant", f.intercept_constant},
                          {"log_residual", f.residual},
                          {"table", table}};
  };
  return {{"experiment", "scaling"},
          {"target", "det(rho_A)"},
          {"local", fit(r.local)},
          {"cc_multinomial", fit(r.cc_multinomial)},
          {"cc_independent", fit(r.cc_independent)},
          {"local_unsplit_diagnostic", fit(r.local_unsplit)},
          {"ratio_cc_over_local_multinomial", r.ratio_multinomial()},
          {"ratio_cc_over_local_independent", r.ratio_independent()},
          {"M", r.states},
          {"seed", r.seed},
          {"config_hash", r.config_hash}};
}

// ---- empirical --------------------------------------------------------------

bool empirical_state_eligible(const PureState& state, Strategy strategy, double c2_min,
                              double c2_max, std::int64_t pairs) {
  const double c2 = concurrence_sq(state);
  if (!(c2 > c2_min && c2 < c2_max)) return false;
  if (strategy == Strategy::local) return true;
  const auto r1 = round1_probabilities(state);
  for (double p : r1.p) {
    if (!(p > 0.05)) return false;
  }
  const auto cos = phase_cosines(r1, round2_probabilities(state));
  if (!(std::abs(cos.c01) < 0.95 && std::abs(cos.c23) < 0.95)) return false;
  if (pairs <= 0) return true;
  const auto se = cosine_std_errors(state, pairs);
  return 1.0 - std::abs(cos.c01) >= kCosineMarginSe * se[0] &&
         1.0 - std::abs(cos.c23) >= kCosineMarginSe * se[1];
}

EmpiricalRow simulate_state(const PureState& state, std::uint64_t state_index, Strategy strategy,
                            std::int64_t pairs, std::int64_t trials, const SeededStream& stream) {
  EmpiricalRow row;
  row.state_index = state_index;
  row.pairs = pairs;
  row.trials = trials;
  row.true_concurrence_sq = concurrence_sq(state);
  row.true_det = 0.25 * row.true_concurrence_sq;

  std::vector<double> errors(static_cast<std::size_t>(trials));
  if (strategy == Strategy::local) {
    const auto dirs = DirectionTriple::orthogonal();
    const auto probs = outcome_probabilities(state, dirs);
    const auto split = split_budget(pairs, 3);
    row.analytic_delta = analytic_uncertainty(state, dirs, pairs);
    for (std::int64_t t = 0; t < trials; ++t) {
      auto eng = stream.derive(static_cast<std::uint64_t>(t)).engine();
      std::array<CountVector, 3> counts;
      for (std::size_t k = 0; k < 3; ++k) {
        const auto p = binary(probs.p[k]);
        counts[k] = multinomial_counts(p, split[k], eng);
      }
      const auto est = estimate_entanglement_local(counts, dirs);
      errors[static_cast<std::size_t>(t)] = est.values.det_reduced - row.true_det;
      if (est.values.clamped) ++row.clamp_events;
    }
  } else {
    const auto r1 = round1_probabilities(state);
    const auto r2 = round2_probabilities(state);
    const auto branch = true_branch(state);
    const auto split = split_budget(pairs, 2);
    row.analytic_delta = analytic_uncertainty_cc(state, pairs, CovarianceModel::multinomial);
    for (std::int64_t t = 0; t < trials; ++t) {
      auto eng = stream.derive(static_cast<std::uint64_t>(t)).engine();
      const auto c1 = multinomial_counts(r1.p, split[0], eng);
      const auto c2 = multinomial_counts(r2.p, split[1], eng);
      const auto est = estimate_entanglement_cc(c1, c2, branch);
      errors[static_cast<std::size_t>(t)] = est.values.det_reduced - row.true_det;
      if (est.values.clamped) ++row.clamp_events;
      if (est.branches_disagree) ++row.branch_disagreements;
    }
  }
  row.rms_error = rms(errors);
  row.bias = mean_and_error(errors).mean;
  return row;
}

EmpiricalResult run_empirical(const ExperimentConfig& cfg) {
  cfg.validate();
  EmpiricalResult r;
  r.strategy = cfg.strategy;
  r.seed = cfg.seed;
  r.config_hash = cfg.hash();

  const std::vector<std::int64_t> grid =
      cfg.grid ? pair_grid(cfg, *cfg.grid) : std::vector<std::int64_t>{cfg.pairs};
  const std::int64_t smallest = *std::min_element(grid.begin(), grid.end());

  // Eligible states in index order from the shared Haar stream.
  std::vector<std::pair<std::uint64_t, PureState>> chosen;
  const auto base = state_stream(cfg.seed);
  const std::uint64_t max_draws = static_cast<std::uint64_t>(cfg.states) * 10000 + 10000;
  for (std::uint64_t i = 0; chosen.size() < static_cast<std::size_t>(cfg.states); ++i) {
    if (i >= max_draws) {
      throw std::invalid_argument("empirical: C^2 window admits too few Haar states");
    }
    const auto s = sample_state(base.at(i));
    if (empirical_state_eligible(s, cfg.strategy, cfg.c2_min, cfg.c2_max, smallest)) {
      chosen.emplace_back(i, s);
    }
  }

  r.rows.resize(grid.size() * chosen.size());
  parallel_for(r.rows.size(), cfg.threads, [&](std::size_t slot) {
    const std::int64_t n = grid[slot / chosen.size()];
    const auto& [index, state] = chosen[slot % chosen.size()];
    const SeededStream trials{cfg.seed, index, kLaneTrials};
    r.rows[slot] = simulate_state(state, index, cfg.strategy, n, cfg.trials,
                                  trials.derive(static_cast<std::uint64_t>(n)));
  });
  return r;
}

void write_empirical_csv(const EmpiricalResult& r, std::ostream& out) {
  out << "state_index,strategy,N,trials,true_concurrence_sq,true_det,analytic_delta,rms_error,"
         "bias,clamp_events,branch_disagreements,seed,config_hash\n";
  for (const auto& row : r.rows) {
    fmt::print(out, "{},{},{},{},{},{},{},{},{},{},{},{},{}\n", row.state_index,
               to_string(r.strategy), row.pairs, row.trials, row.true_concurrence_sq, row.true_det,
               row.analytic_delta, row.rms_error, row.bias, row.clamp_events,
               row.branch_disagreements, r.seed, r.config_hash);
  }
}

nlohmann::json to_json(const EmpiricalResult& r) {
  nlohmann::json rows = nlohmann::json::array();
  for (const auto& row : r.rows) {
    rows.push_back({{"state_index", row.state_index},
                    {"N", row.pairs},
                    {"trials", row.trials},
                    {"true_concurrence_sq", row.true_concurrence_sq},
                    {"true_det", row.true_det},
                    {"analytic_delta", row.analytic_delta},
                    {"rms_error", row.rms_error},
                    {"bias", row.bias},
                    {"clamp_events", row.clamp_events},
                    {"branch_disagreements", row.branch_disagreements}});
  }
  return {{"experiment", "empirical"},
          {"strategy", to_string(r.strategy)},
          {"rows", rows},
          {"seed", r.seed},
          {"config_hash", r.config_hash}};
}

// ---- nogo -------------------------------------------------------------------

nlohmann::json to_json(const KMatrixReport& r) {
  return {{"K", json_matrix(r.k)},
          {"S", json_matrix(r.s)},
          {"sigma", json_matrix(r.sigma)},
          {"abs_det_K", r.abs_det_k},
          {"abs_det_S", r.abs_det_s},
          {"det_sigma", {r.det_sigma.real(), r.det_sigma.imag()}},
          {"symmetry_residual", r.symmetry_residual},
          {"factorization_residual", r.factorization_residual},
          {"unitarity_residual", r.unitarity_residual},
          {"lemma_holds", r.lemma_holds()}};
}

nlohmann::json to_json(const Counterexample& c) {
  return {{"modulus", json_array(c.modulus)},
          {"probabilities", json_array(c.probabilities)},
          {"phase_low", json_array(c.phase_low)},
          {"phase_high", json_array(c.phase_high)},
          {"state_low", json_state(c.low)},
          {"state_high", json_state(c.high)},
          {"concurrence_sq_low", c.c2_low},
          {"concurrence_sq_high", c.c2_high},
          {"gap", c.gap()},
          {"probability_mismatch", c.probability_mismatch}};
}

NogoResult run_nogo(const ExperimentConfig& cfg) {
  cfg.validate();
  constexpr std::size_t kGallery = 5;
  NogoResult r;
  r.seed = cfg.seed;
  r.config_hash = cfg.hash();
  r.bases = cfg.states;

  const auto standard = ObservableBasis::standard();
  r.standard_report = verify_lemma(standard);
  {
    const std::array<double, 4> m{0.5, 0.5, 0.5, 0.5};
    Counterexample& ce = r.standard_counterexample;
    ce.modulus = m;
    ce.phase_low = {0.0, 0.0, 0.0, 0.0};
    ce.phase_high = {0.0, 0.0, 0.0, kPi};
    ce.low = standard.compose(m, ce.phase_low);
    ce.high = standard.compose(m, ce.phase_high);
    ce.c2_low = concurrence_sq(ce.low);
    ce.c2_high = concurrence_sq(ce.high);
    const auto pl = standard.probabilities(ce.low);
    const auto ph = standard.probabilities(ce.high);
    ce.probabilities = pl;
    for (std::size_t i = 0; i < 4; ++i) {
      ce.probability_mismatch = std::max(ce.probability_mismatch, std::abs(pl[i] - ph[i]));
    }
  }

  const auto n = static_cast<std::size_t>(cfg.states);
  std::vector<KMatrixReport> reports(n);
  std::vector<std::optional<Counterexample>> found(n);
  std::vector<std::string> errors(n);
  parallel_for(n, cfg.threads, [&](std::size_t i) {
    const auto basis = ObservableBasis::haar({cfg.seed, i, kLaneBases});
    reports[i] = verify_lemma(basis);
    try {
      found[i] = counterexample(basis, {cfg.seed, i, kLaneCounterexample});
    } catch (const SearchFailure& e) {
      errors[i] = e.what();
    }
  });

  r.histogram_edges = {0.0, 0.9, 0.99, 1.0 - 1e-9, 1.0 + 1e-9, 1.01, 1.1,
                       std::numeric_limits<double>::infinity()};
  r.abs_det_k_histogram.assign(r.histogram_edges.size() - 1, 0);
  for (std::size_t i = 0; i < n; ++i) {
    const auto& rep = reports[i];
    r.max_symmetry_residual = std::max(r.max_symmetry_residual, rep.symmetry_residual);
    r.max_factorization_residual =
        std::max(r.max_factorization_residual, rep.factorization_residual);
    r.max_unitarity_residual = std::max(r.max_unitarity_residual, rep.unitarity_residual);
    r.max_det_sigma_error = std::max(r.max_det_sigma_error, std::abs(rep.det_sigma - 1.0));
    r.max_abs_det_k_error = std::max(r.max_abs_det_k_error, std::abs(rep.abs_det_k - 1.0));
    for (std::size_t b = 0; b + 1 < r.histogram_edges.size(); ++b) {
      if (rep.abs_det_k >= r.histogram_edges[b] && rep.abs_det_k < r.histogram_edges[b + 1]) {
        ++r.abs_det_k_histogram[b];
        break;
      }
    }
    if (rep.lemma_holds()) {
      ++r.lemma_passed;
    } else {
      r.failures.push_back(fmt::format("basis {}: Lemma residuals out of tolerance", i));
    }
    if (found[i]) {
      if (found[i]->probability_mismatch <= 1e-12) {
        ++r.counterexamples_found;
        if (r.gallery.size() < kGallery) r.gallery.push_back(*found[i]);
      } else {
        r.failures.push_back(fmt::format("basis {}: counterexample probabilities differ by {}", i,
                                         found[i]->probability_mismatch));
      }
    } else {
      r.failures.push_back(fmt::format("basis {}: {}", i, errors[i]));
    }
  }
  return r;
}

nlohmann::json to_json(const NogoResult& r) {
  nlohmann::json gallery = nlohmann::json::array();
  for (const auto& c : r.gallery) gallery.push_back(to_json(c));
  nlohmann::json hist = nlohmann::json::array();
  for (std::size_t b = 0; b < r.abs_det_k_histogram.size(); ++b) {
    const double hi = r.histogram_edges[b + 1];
    hist.push_back({{"lo", r.histogram_edges[b]},
                    {"hi", std::isfinite(hi) ? nlohmann::json(hi) : nlohmann::json("inf")},
                    {"count", r.abs_det_k_histogram[b]}});
  }
  return {{"experiment", "nogo"},
          {"bases", r.bases},
          {"lemma_passed", r.lemma_passed},
          {"lemma_pass_rate",
           r.bases > 0 ? static_cast<double>(r.lemma_passed) / static_cast<double>(r.bases) : 0.0},
          {"counterexamples_found", r.counterexamples_found},
          {"max_residuals",
           {{"symmetry", r.max_symmetry_residual},
            {"factorization", r.max_factorization_residual},
            {"unitarity", r.max_unitarity_residual},
            {"det_sigma", r.max_det_sigma_error},
            {"abs_det_K", r.max_abs_det_k_error}}},
          {"abs_det_K_histogram", hist},
          {"standard_basis", to_json(r.standard_report)},
          {"standard_counterexample", to_json(r.standard_counterexample)},
          {"counterexample_gallery", gallery},
          {"failures", r.failures},
          {"passed", r.all_passed()},
          {"seed", r.seed},
          {"config_hash", r.config_hash}};
}

// ---- estimate ---------------------------------------------------------------

nlohmann::json run_estimate(const PureState& state, Strategy strategy, std::int64_t pairs,
                            std::uint64_t seed) {
  const auto truth = entanglement(state);
  auto eng = SeededStream{seed, 0, kLaneEstimate}.engine();
  nlohmann::json j{{"experiment", "estimate"},
                   {"strategy", to_string(strategy)},
                   {"N", pairs},
                   {"seed", seed},
                   {"state", json_state(state)},
                   {"truth", json_values(truth)}};

  if (strategy == Strategy::local) {
    const auto dirs = DirectionTriple::orthogonal();
    const auto split = split_budget(pairs, 3);
    if (pairs < 3) {
      throw std::invalid_argument(
          fmt::format("local strategy needs N >= 3 pairs to cover three directions, got {}", pairs));
    }
    const auto probs = outcome_probabilities(state, dirs);
    std::array<CountVector, 3> counts;
    nlohmann::json jc = nlohmann::json::array();
    for (std::size_t k = 0; k < 3; ++k) {
      counts[k] = multinomial_counts(binary(probs.p[k]), split[k], eng);
      jc.push_back({{"direction", {dirs[k][0], dirs[k][1], dirs[k][2]}},
                    {"up", counts[k].counts[0]},
                    {"down", counts[k].counts[1]}});
    }
    const auto est = estimate_entanglement_local(counts, dirs);
    j["counts"] = jc;
    j["estimate"] = json_values(est.values);
    j["estimate"]["raw_det"] = est.raw_det;
    j["estimate"]["bloch"] = {est.bloch[0], est.bloch[1], est.bloch[2]};
    j["analytic_delta_det"] = analytic_uncertainty(state, dirs, pairs);
    j["analytic_delta_entropy"] = analytic_entropy_uncertainty(state, dirs, pairs);
  } else {
    if (pairs < 2) {
      throw std::invalid_argument(
          fmt::format("cc strategy needs N >= 2 pairs to cover two rounds, got {}", pairs));
    }
    const auto split = split_budget(pairs, 2);
    const auto c1 = multinomial_counts(round1_probabilities(state).p, split[0], eng);
    const auto c2 = multinomial_counts(round2_probabilities(state).p, split[1], eng);
    const auto branch = true_branch(state);
    const auto est = estimate_entanglement_cc(c1, c2, branch);
    j["counts"] = {{"round1", c1.counts}, {"round2", c2.counts}};
    j["estimate"] = json_values(est.values);
    j["estimate"]["concurrence_sq_branch_plus"] = est.c2_plus;
    j["estimate"]["concurrence_sq_branch_minus"] = est.c2_minus;
    j["estimate"]["branch"] = static_cast<int>(est.branch);
    j["estimate"]["branches_disagree"] = est.branches_disagree;
    j["estimate"]["cos01"] = est.cosines.defined01 ? nlohmann::json(est.cosines.c01) : nlohmann::json(nullptr);
    j["estimate"]["cos23"] = est.cosines.defined23 ? nlohmann::json(est.cosines.c23) : nlohmann::json(nullptr);
    j["estimate"]["cos_clamped"] = est.cosines.clamped01 || est.cosines.clamped23;
    j["analytic_delta_det"] = analytic_uncertainty_cc(state, pairs, CovarianceModel::multinomial);
  }
  return j;
}

nlohmann::json run_estimate(const ExperimentConfig& cfg) {
  if (cfg.state_file.empty()) throw std::invalid_argument("estimate: --state-file is required");
  const auto state = parse_state_literal_file(cfg.state_file);
  cfg.validate();
  nlohmann::json j = run_estimate(state, cfg.strategy, cfg.pairs, cfg.seed);
  j["config_hash"] = cfg.hash();
  return j;
}

}  // namespace qent
