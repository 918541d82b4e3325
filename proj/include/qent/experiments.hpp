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

// Reproducible experiment drivers behind the CLI. Every result is a pure
// function of (config, seed); per-state sub-streams make the output
// independent of the worker count.

#include <cstdint>
#include <iosfwd>
#include <optional>
#include <string>
#include <vector>

#include <nlohmann/json.hpp>

#include "qent/local_cc.hpp"
#include "qent/local_tomography.hpp"
#include "qent/nogo.hpp"

namespace qent {

enum class Strategy { local, cc };
enum class OutputFormat { csv, json };

std::string to_string(Strategy s);
Strategy parse_strategy(const std::string& s);
std::string to_string(OutputFormat f);
OutputFormat parse_format(const std::string& s);

struct GridSpec {
  double start = 0.0;
  double stop = 0.0;
  int steps = 2;

  /// "start:stop:steps". Throws std::invalid_argument.
  static GridSpec parse(const std::string& text);
  std::string str() const;
  std::vector<double> linear() const;
  std::vector<double> geometric() const;
};

/// Default sweep grid: 41 points over [eps, pi - eps], eps = 1e-3.
GridSpec default_fig1_grid();

struct ExperimentConfig {
  std::string experiment;
  std::int64_t states = 10000;
  std::int64_t pairs = 30000;
  std::optional<GridSpec> grid;
  std::uint64_t seed = 0;
  std::string out;  // empty: stdout
  Strategy strategy = Strategy::local;
  OutputFormat format = OutputFormat::csv;
  unsigned threads = 0;  // 0: hardware concurrency; never changes results

  // Angles for `symmetry` and the sweep's fixed polar angles.
  double theta_m = 1.5707963267948966;
  double theta_n = 1.5707963267948966;
  double phi_nm = 1.5707963267948966;

  // `empirical`
  std::int64_t trials = 1000;
  double c2_min = 0.1;
  double c2_max = 0.9;

  // `estimate`
  std::string state_file;

  /// Throws std::invalid_argument on M < 1, N < 3 (local) / N < 2 (cc),
  /// steps < 2 or non-finite angles.
  void validate() const;

  /// Flat key/value form; also the config-file schema.
  nlohmann::json to_json() const;
  /// Applies keys present in `j`; unknown keys are rejected.
  void apply_json(const nlohmann::json& j);
  /// FNV-1a 64 of the canonical JSON, as 16 hex digits. Excludes `out`,
  /// `format` and `threads`, which never change results.
  std::string hash() const;
};

// ---- sweep-fig1 -------------------------------------------------------------

struct SweepRow {
  double phi_nm = 0.0;
  double theta_m = 0.0;
  double theta_n = 0.0;
  double delta_av = 0.0;
  double std_error = 0.0;
};

struct SweepResult {
  std::vector<SweepRow> rows;
  std::size_t argmin = 0;
  std::int64_t states = 0;
  std::int64_t pairs = 0;
  std::uint64_t seed = 0;
  std::string config_hash;
};

SweepResult run_fig1_sweep(const ExperimentConfig& cfg);
SweepResult run_fig1_sweep(const ExperimentConfig& cfg, const BlochEnsemble& ensemble);
void write_sweep_csv(const SweepResult& r, std::ostream& out);
nlohmann::json to_json(const SweepResult& r);

// ---- symmetry ---------------------------------------------------------------

struct SymmetryCase {
  std::string label;
  double theta_n = 0.0, theta_m = 0.0, phi_nm = 0.0;
  double delta_av = 0.0;
  double std_error = 0.0;
  double deviation_in_se = 0.0;  // |delta - delta_base| / max(se, se_base)
};

struct SymmetryResult {
  std::vector<SymmetryCase> cases;  // first entry is the base configuration
  bool passed = false;
  std::string config_hash;
};

inline constexpr double kSymmetryTolerance = 3.0;  // standard errors

SymmetryResult run_symmetry(const ExperimentConfig& cfg);
SymmetryResult run_symmetry(const ExperimentConfig& cfg, const BlochEnsemble& ensemble);
nlohmann::json to_json(const SymmetryResult& r);

// ---- scaling ----------------------------------------------------------------

struct ScalingPoint {
  std::int64_t pairs = 0;
  double delta_av = 0.0;
  double std_error = 0.0;
  double scaled = 0.0;  // delta_av * sqrt(N)
};

struct ScalingFit {
  std::string strategy;    // "local", "cc"
  std::string convention;  // split, unsplit, multinomial or independent
  double constant = 0.0;   // c in delta = c / sqrt(N), from the fixed-slope fit
  double slope = 0.0;      // free log-log slope
  double intercept_constant = 0.0;  // exp(intercept) of the free fit
  double residual = 0.0;            // RMS log residual of the free fit
  std::vector<ScalingPoint> table;
};

struct ScalingResult {
  ScalingFit local;
  ScalingFit cc_multinomial;
  ScalingFit cc_independent;
  // Diagnostic: N pairs on every direction rather than N/3.
  ScalingFit local_unsplit;
  std::int64_t states = 0;
  std::uint64_t seed = 0;
  std::string config_hash;

  double ratio_multinomial() const { return cc_multinomial.constant / local.constant; }
  double ratio_independent() const { return cc_independent.constant / local.constant; }
};

/// Default N grid: 300:300000:4 (geometric).
GridSpec default_scaling_grid();

ScalingFit fit_scaling(std::string strategy, std::string convention,
                       std::vector<ScalingPoint> table);
ScalingResult run_scaling(const ExperimentConfig& cfg);
ScalingResult run_scaling(const ExperimentConfig& cfg, const BlochEnsemble& ensemble);
void write_scaling_csv(const ScalingResult& r, std::ostream& out);
nlohmann::json to_json(const ScalingResult& r);

// ---- empirical --------------------------------------------------------------

struct EmpiricalRow {
  std::uint64_t state_index = 0;
  std::int64_t pairs = 0;
  std::int64_t trials = 0;
  double true_concurrence_sq = 0.0;
  double true_det = 0.0;
  double analytic_delta = 0.0;
  double rms_error = 0.0;
  double bias = 0.0;
  std::int64_t clamp_events = 0;
  std::int64_t branch_disagreements = 0;

  double relative_mismatch() const { return std::abs(rms_error - analytic_delta) / analytic_delta; }
};

struct EmpiricalResult {
  Strategy strategy = Strategy::local;
  std::vector<EmpiricalRow> rows;
  std::uint64_t seed = 0;
  std::string config_hash;
};

inline constexpr double kCosineMarginSe = 3.0;

/// cc states additionally need every P_i > 0.05 and |cos| < 0.95. With a
/// positive budget both cosines must also sit kCosineMarginSe standard
/// errors inside [-1, 1], so that clamping stays rare.
bool empirical_state_eligible(const PureState& state, Strategy strategy, double c2_min,
                              double c2_max, std::int64_t pairs = 0);

/// Simulates `cfg.trials` finite-budget runs for each of `cfg.states`
/// eligible Haar states at each N (cfg.grid geometric, else cfg.pairs).
EmpiricalResult run_empirical(const ExperimentConfig& cfg);
EmpiricalRow simulate_state(const PureState& state, std::uint64_t state_index, Strategy strategy,
                            std::int64_t pairs, std::int64_t trials, const SeededStream& stream);
void write_empirical_csv(const EmpiricalResult& r, std::ostream& out);
nlohmann::json to_json(const EmpiricalResult& r);

// ---- nogo -------------------------------------------------------------------

struct NogoResult {
  std::int64_t bases = 0;
  std::int64_t lemma_passed = 0;
  std::int64_t counterexamples_found = 0;
  double max_symmetry_residual = 0.0;
  double max_factorization_residual = 0.0;
  double max_unitarity_residual = 0.0;
  double max_det_sigma_error = 0.0;
  double max_abs_det_k_error = 0.0;
  std::vector<double> histogram_edges;
  std::vector<std::int64_t> abs_det_k_histogram;
  KMatrixReport standard_report;
  Counterexample standard_counterexample;  // phases (0,0,0,0) vs (0,0,0,pi)
  std::vector<Counterexample> gallery;     // first few random bases
  std::vector<std::string> failures;
  std::uint64_t seed = 0;
  std::string config_hash;

  bool all_passed() const {
    return lemma_passed == bases && counterexamples_found == bases && failures.empty();
  }
};

/// cfg.states random bases (bases drawn from lane 1 of the seed).
NogoResult run_nogo(const ExperimentConfig& cfg);
nlohmann::json to_json(const NogoResult& r);
nlohmann::json to_json(const KMatrixReport& r);
nlohmann::json to_json(const Counterexample& c);

// ---- estimate ---------------------------------------------------------------

nlohmann::json run_estimate(const PureState& state, Strategy strategy, std::int64_t pairs,
                            std::uint64_t seed);
nlohmann::json run_estimate(const ExperimentConfig& cfg);

}  // namespace qent
