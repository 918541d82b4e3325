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

#include <cmath>
#include <numbers>
#include <sstream>
#include <stdexcept>

#include <fmt/format.h>

#include "qent/experiments.hpp"

namespace qent {

std::string to_string(Strategy s) { return s == Strategy::local ? "local" : "cc"; }

Strategy parse_strategy(const std::string& s) {
  if (s == "local") return Strategy::local;
  if (s == "cc") return Strategy::cc;
  throw std::invalid_argument(fmt::format("unknown strategy '{}' (expected local|cc)", s));
}

std::string to_string(OutputFormat f) { return f == OutputFormat::csv ? "csv" : "json"; }

OutputFormat parse_format(const std::string& s) {
  if (s == "csv") return OutputFormat::csv;
  if (s == "json") return OutputFormat::json;
  throw std::invalid_argument(fmt::format("unknown format '{}' (expected csv|json)", s));
}

GridSpec GridSpec::parse(const std::string& text) {
  GridSpec g;
  std::istringstream in(text);
  std::string a, b, c;
  if (!std::getline(in, a, ':') || !std::getline(in, b, ':') || !std::getline(in, c) ||
      a.empty() || b.empty() || c.empty()) {
    throw std::invalid_argument(
        fmt::format("grid '{}' is not of the form start:stop:steps", text));
  }
  try {
    std::size_t used = 0;
    g.start = std::stod(a, &used);
    if (used != a.size()) throw std::invalid_argument("start");
    g.stop = std::stod(b, &used);
    if (used != b.size()) throw std::invalid_argument("stop");
    g.steps = std::stoi(c, &used);
    if (used != c.size()) throw std::invalid_argument("steps");
  } catch (const std::exception&) {
    throw std::invalid_argument(fmt::format("grid '{}': fields must be numbers", text));
  }
  if (g.steps < 2) throw std::invalid_argument(fmt::format("grid '{}': steps must be >= 2", text));
  if (!std::isfinite(g.start) || !std::isfinite(g.stop)) {
    throw std::invalid_argument(fmt::format("grid '{}': bounds must be finite", text));
  }
  return g;
}

std::string GridSpec::str() const { return fmt::format("{}:{}:{}", start, stop, steps); }

std::vector<double> GridSpec::linear() const {
  std::vector<double> out(static_cast<std::size_t>(steps));
  for (int i = 0; i < steps; ++i) {
    out[static_cast<std::size_t>(i)] = start + (stop - start) * i / (steps - 1);
  }
  return out;
}

std::vector<double> GridSpec::geometric() const {
  if (!(start > 0.0) || !(stop > 0.0)) {
    throw std::invalid_argument("geometric grid needs positive bounds");
  }
  std::vector<double> out(static_cast<std::size_t>(steps));
  const double ratio = std::log(stop / start);
  for (int i = 0; i < steps; ++i) {
    out[static_cast<std::size_t>(i)] = start * std::exp(ratio * i / (steps - 1));
  }
  return out;
}

GridSpec default_fig1_grid() {
  constexpr double eps = 1e-3;
  return {eps, std::numbers::pi - eps, 41};
}

GridSpec default_scaling_grid() { return {300.0, 300000.0, 4}; }

void ExperimentConfig::validate() const {
  if (states < 1) throw std::invalid_argument(fmt::format("--states must be >= 1, got {}", states));
  const std::int64_t min_pairs = strategy == Strategy::local ? 3 : 2;
  if (pairs < min_pairs) {
    throw std::invalid_argument(fmt::format(
        "--pairs must be >= {} for the {} strategy, got {}", min_pairs, to_string(strategy), pairs));
  }
  if (grid && grid->steps < 2) throw std::invalid_argument("--grid steps must be >= 2");
  if (trials < 1) throw std::invalid_argument("--trials must be >= 1");
  for (double a : {theta_m, theta_n, phi_nm, c2_min, c2_max}) {
    if (!std::isfinite(a)) throw std::invalid_argument("angles and bounds must be finite");
  }
}

nlohmann::json ExperimentConfig::to_json() const {
  nlohmann::json j;
  j["experiment"] = experiment;
  j["states"] = states;
  j["pairs"] = pairs;
  j["grid"] = grid ? grid->str() : std::string();
  j["seed"] = seed;
  j["out"] = out;
  j["strategy"] = to_string(strategy);
  j["format"] = to_string(format);
  j["threads"] = threads;
  j["theta_m"] = theta_m;
  j["theta_n"] = theta_n;
  j["phi_nm"] = phi_nm;
  j["trials"] = trials;
  j["c2_min"] = c2_min;
  j["c2_max"] = c2_max;
  j["state_file"] = state_file;
  return j;
}

void ExperimentConfig::apply_json(const nlohmann::json& j) {
  if (!j.is_object()) throw std::invalid_argument("config file must hold a flat JSON object");
  for (const auto& [key, value] : j.items()) {
    try {
      if (key == "experiment") experiment = value.get<std::string>();
      else if (key == "states") states = value.get<std::int64_t>();
      else if (key == "pairs") pairs = value.get<std::int64_t>();
      else if (key == "grid") {
        const auto text = value.get<std::string>();
        grid = text.empty() ? std::nullopt : std::optional<GridSpec>(GridSpec::parse(text));
      } else if (key == "seed") seed = value.get<std::uint64_t>();
      else if (key == "out") out = value.get<std::string>();
      else if (key == "strategy") strategy = parse_strategy(value.get<std::string>());
      else if (key == "format") format = parse_format(value.get<std::string>());
      else if (key == "threads") threads = value.get<unsigned>();
      else if (key == "theta_m") theta_m = value.get<double>();
      else if (key == "theta_n") theta_n = value.get<double>();
      else if (key == "phi_nm") phi_nm = value.get<double>();
      else if (key == "trials") trials = value.get<std::int64_t>();
      else if (key == "c2_min") c2_min = value.get<double>();
      else if (key == "c2_max") c2_max = value.get<double>();
      else if (key == "state_file") state_file = value.get<std::string>();
      else throw std::invalid_argument(fmt::format("unknown config key '{}'", key));
    } catch (const nlohmann::json::exception& e) {
      throw std::invalid_argument(fmt::format("config key '{}': {}", key, e.what()));
    }
  }
}

std::string ExperimentConfig::hash() const {
  nlohmann::json j = to_json();
  j.erase("out");
  j.erase("threads");
  j.erase("format");
  const std::string canonical = j.dump();
  std::uint64_t h = 0xcbf29ce484222325ULL;
  for (unsigned char c : canonical) {
    h ^= c;
    h *= 0x100000001b3ULL;
  }
  return fmt::format("{:016x}", h);
}

}  // namespace qent
