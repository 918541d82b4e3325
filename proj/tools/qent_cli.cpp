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

// qent: command-line driver for the entanglement-estimation experiments.
//
//   qent sweep-fig1 --states 10000 --pairs 30000 --out sweep.csv
//   qent scaling --format json
//   qent nogo --states 1000
//   qent estimate --state-file bell.txt --strategy cc --pairs 30000
//
// Exit codes: 0 success, 1 usage or I/O error, 2 numerical-check failure.

#include <fstream>
#include <functional>
#include <iostream>
#include <optional>
#include <sstream>
#include <string>
#include <vector>

#include <CLI11.hpp>
#include <fmt/format.h>
#include <nlohmann/json.hpp>

#include "qent/errors.hpp"
#include "qent/experiments.hpp"

namespace {

constexpr int kExitOk = 0;
constexpr int kExitUsage = 1;
constexpr int kExitNumerical = 2;

struct Flags {
  std::string config;
  std::optional<std::uint64_t> seed;
  std::optional<std::int64_t> states;
  std::optional<std::int64_t> pairs;
  std::optional<std::string> grid;
  std::optional<std::string> out;
  std::optional<std::string> strategy;
  std::optional<std::string> format;
  std::optional<unsigned> threads;
  std::optional<std::int64_t> trials;
  std::optional<double> theta_m, theta_n, phi_nm;
  std::optional<double> c2_min, c2_max;
  std::optional<std::string> state_file;
};

void add_common(CLI::App* sub, Flags& f) {
  sub->add_option("--config", f.config, "flat JSON config file; flags override it");
  sub->add_option("--seed", f.seed, "master seed");
  sub->add_option("--states", f.states, "ensemble size M (bases for nogo)");
  sub->add_option("--pairs", f.pairs, "pair budget N");
  sub->add_option("--grid", f.grid, "start:stop:steps");
  sub->add_option("--out", f.out, "output path (default stdout)");
  sub->add_option("--strategy", f.strategy, "local|cc");
  sub->add_option("--format", f.format, "csv|json");
  sub->add_option("--threads", f.threads, "worker threads (0 = all cores)");
}

// Per-subcommand defaults, applied before the config file and flags.
qent::ExperimentConfig defaults_for(const std::string& name) {
  qent::ExperimentConfig cfg;
  cfg.experiment = name;
  if (name == "scaling") cfg.states = 100000;
  if (name == "nogo") {
    cfg.states = 1000;
    cfg.format = qent::OutputFormat::json;
  }
  if (name == "estimate" || name == "symmetry") cfg.format = qent::OutputFormat::json;
  if (name == "empirical") {
    cfg.states = 50;
    cfg.pairs = 10000;
  }
  return cfg;
}

qent::ExperimentConfig build_config(const std::string& name, const Flags& f) {
  qent::ExperimentConfig cfg = defaults_for(name);
  if (!f.config.empty()) {
    std::ifstream in(f.config);
    if (!in) throw std::invalid_argument(fmt::format("cannot open config file '{}'", f.config));
    nlohmann::json j;
    try {
      in >> j;
    } catch (const nlohmann::json::exception& e) {
      throw std::invalid_argument(fmt::format("config file '{}': {}", f.config, e.what()));
    }
    cfg.apply_json(j);
    cfg.experiment = name;
  }
  if (f.seed) cfg.seed = *f.seed;
  if (f.states) cfg.states = *f.states;
  if (f.pairs) cfg.pairs = *f.pairs;
  if (f.grid) cfg.grid = qent::GridSpec::parse(*f.grid);
  if (f.out) cfg.out = *f.out;
  if (f.strategy) cfg.strategy = qent::parse_strategy(*f.strategy);
  if (f.format) cfg.format = qent::parse_format(*f.format);
  if (f.threads) cfg.threads = *f.threads;
  if (f.trials) cfg.trials = *f.trials;
  if (f.theta_m) cfg.theta_m = *f.theta_m;
  if (f.theta_n) cfg.theta_n = *f.theta_n;
  if (f.phi_nm) cfg.phi_nm = *f.phi_nm;
  if (f.c2_min) cfg.c2_min = *f.c2_min;
  if (f.c2_max) cfg.c2_max = *f.c2_max;
  if (f.state_file) cfg.state_file = *f.state_file;
  cfg.validate();
  return cfg;
}

void require_json(const qent::ExperimentConfig& cfg) {
  if (cfg.format != qent::OutputFormat::json) {
    throw std::invalid_argument(fmt::format("{} only writes JSON", cfg.experiment));
  }
}

// Renders into memory first so a failed run never leaves a partial file.
void emit(const qent::ExperimentConfig& cfg, const std::string& text) {
  if (cfg.out.empty()) {
    std::cout << text;
    std::cout.flush();
    return;
  }
  std::ofstream out(cfg.out, std::ios::binary);
  out << text;
  out.close();
  if (!out) throw std::ios_base::failure(fmt::format("cannot write '{}'", cfg.out));
}

std::string dump(const nlohmann::json& j) { return j.dump(2) + "\n"; }

int run(const std::string& name, const qent::ExperimentConfig& cfg) {
  std::ostringstream text;
  int code = kExitOk;
  if (name == "sweep-fig1") {
    if (cfg.strategy != qent::Strategy::local) {
      throw std::invalid_argument("sweep-fig1 is defined for the local strategy only");
    }
    const auto r = qent::run_fig1_sweep(cfg);
    if (cfg.format == qent::OutputFormat::csv) qent::write_sweep_csv(r, text);
    else text << dump(qent::to_json(r));
  } else if (name == "scaling") {
    const auto r = qent::run_scaling(cfg);
    if (cfg.format == qent::OutputFormat::csv) qent::write_scaling_csv(r, text);
    else text << dump(qent::to_json(r));
    std::cerr << fmt::format("c_loc = {:.4f}  c_cc = {:.4f} (multinomial) / {:.4f} (independent)\n",
                             r.local.constant, r.cc_multinomial.constant,
                             r.cc_independent.constant);
  } else if (name == "empirical") {
    const auto r = qent::run_empirical(cfg);
    if (cfg.format == qent::OutputFormat::csv) qent::write_empirical_csv(r, text);
    else text << dump(qent::to_json(r));
  } else if (name == "nogo") {
    require_json(cfg);
    const auto r = qent::run_nogo(cfg);
    text << dump(qent::to_json(r));
    if (!r.all_passed()) {
      for (const auto& f : r.failures) std::cerr << "nogo: " << f << "\n";
      code = kExitNumerical;
    }
  } else if (name == "symmetry") {
    require_json(cfg);
    const auto r = qent::run_symmetry(cfg);
    text << dump(qent::to_json(r));
    if (!r.passed) {
      std::cerr << "symmetry: deviation above " << qent::kSymmetryTolerance
                << " standard errors\n";
      code = kExitNumerical;
    }
  } else if (name == "estimate") {
    require_json(cfg);
    text << dump(qent::run_estimate(cfg));
  }
  emit(cfg, text.str());
  return code;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"Two-qubit entanglement estimation experiments"};
  app.require_subcommand(1);

  Flags flags;
  struct Sub {
    const char* name;
    const char* help;
  };
  const Sub subs[] = {
      {"sweep-fig1", "average uncertainty vs relative azimuth phi_nm"},
      {"symmetry", "compare delta_av across the reflected angle configurations"},
      {"scaling", "fit delta = c / sqrt(N) for both strategies"},
      {"empirical", "Monte Carlo RMS error vs analytic propagation"},
      {"nogo", "Lemma checks and counterexamples over random bases"},
      {"estimate", "simulate one state end to end"},
  };
  std::vector<CLI::App*> commands;
  for (const auto& s : subs) {
    CLI::App* sub = app.add_subcommand(s.name, s.help);
    add_common(sub, flags);
    commands.push_back(sub);
  }
  for (CLI::App* sub : commands) {
    const std::string n = sub->get_name();
    if (n == "sweep-fig1" || n == "symmetry") {
      sub->add_option("--theta-m", flags.theta_m, "polar angle of m");
      sub->add_option("--theta-n", flags.theta_n, "polar angle of n");
    }
    if (n == "symmetry") sub->add_option("--phi", flags.phi_nm, "relative azimuth phi_nm");
    if (n == "empirical") {
      sub->add_option("--trials", flags.trials, "simulated runs per state and N");
      sub->add_option("--c2-min", flags.c2_min, "lower C^2 bound for state selection");
      sub->add_option("--c2-max", flags.c2_max, "upper C^2 bound for state selection");
    }
    if (n == "estimate") sub->add_option("--state-file", flags.state_file, "8-real state literal");
  }

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    const int code = app.exit(e);
    return code == 0 ? kExitOk : kExitUsage;
  }

  const std::string name = app.get_subcommands().front()->get_name();
  try {
    return run(name, build_config(name, flags));
  } catch (const qent::NumericalCheckError& e) {
    std::cerr << "qent " << name << ": numerical check failed: " << e.what() << "\n";
    return kExitNumerical;
  } catch (const qent::SearchFailure& e) {
    std::cerr << "qent " << name << ": " << e.what() << "\n";
    return kExitNumerical;
  } catch (const qent::ParseError& e) {
    std::cerr << "qent " << name << ": " << e.what() << "\n";
    return kExitUsage;
  } catch (const std::exception& e) {
    std::cerr << "qent " << name << ": " << e.what() << "\n";
    return kExitUsage;
  }
}
