// Copyright 2026 The SEA Dynamics Authors
//
// Licensed under the Apache License, Version 2.0 (the "License");
// you may not use this file except in compliance with the License.
// You may obtain a copy of the License at
//
//     http://www.apache.org/licenses/LICENSE-2.0
//
// Unless required by applicable law or agreed to in writing, software
// distributed under the License is distributed on an "AS IS" BASIS,
// WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
// See the License for the specific language governing permissions and
// limitations under the License.

// Scenario files for the command-line front end: parsing, validation, runs and
// artifact writing. A scenario is a JSON document with the tables system,
// initial_state, model, integration and output.

#pragma once

#include <cstdint>
#include <optional>
#include <random>
#include <ostream>
#include <stdexcept>
#include <string>
#include <vector>

#include "json.hpp"
#include "sea/integrator.hpp"

namespace sea {

/// Validation failure; `field` is the dotted path of the offending entry.
class ScenarioError : public std::runtime_error {
 public:
  ScenarioError(const std::string& field, const std::string& what)
      : std::runtime_error(field + ": " + what), field_(field) {}
  const std::string& field() const { return field_; }

 private:
  std::string field_;
};

struct Observable {
  std::string name;
  Operator op;
};

struct Scenario {
  /// Document after overrides; hashed into every artifact.
  nlohmann::json config;
  std::string config_hash;
  std::string kind;
  Units units;
  Operator hamiltonian;
  std::optional<Dims> dims;
  DensityState rho0 = make_state(Operator::Ones(1, 1));
  Dynamics dynamics;
  IntegrationConfig integration;
  /// Uniform output samples over [t0, t1]; 0 writes the accepted steps.
  int samples = 0;
  std::string output_path;
  std::vector<Observable> observables;
};

/// Model kinds accepted in model.kind.
const std::vector<std::string>& model_kinds();

/// Sets a dotted key ("model.tau_d") to `value`, parsed as JSON when possible.
void apply_override(nlohmann::json& doc, const std::string& key, const std::string& value);

/// Builds and validates a scenario; `seed` drives any "random" entries.
Scenario load_scenario(const nlohmann::json& doc, std::uint64_t seed = 0);

/// Dynamics for a model table on the scenario's system.
Dynamics build_dynamics(const nlohmann::json& model, const Scenario& sc);

/// FNV-1a 64 of the compact dump, as 16 hex digits.
std::string config_hash(const nlohmann::json& doc);

struct RunResult {
  std::vector<TrajectoryPoint> points;
  Termination termination = Termination::t_end;
  TrajectoryDiagnostics diagnostics;
  std::vector<std::string> warnings;
  /// A recorded row broke the drift bounds.
  bool degraded = false;
  /// The energy drift bound applies.
  bool conserves_energy = true;
};

/// Integrates the scenario (backward when `backward`, over [t0, t0 - (t1 - t0)]).
RunResult run_scenario(const Scenario& sc, const Dynamics& dyn, bool backward = false);

/// CSV with a "# config_hash=..." line and the column header.
void write_csv(std::ostream& os, const Scenario& sc, const RunResult& r);

nlohmann::json summary_json(const Scenario& sc, const RunResult& r);

/// Difference summary between two runs sampled on the same times.
nlohmann::json compare_json(const Scenario& sc, const RunResult& primary, const std::string& baseline_kind,
                            const RunResult& baseline);

/// Hermitian part of a complex Gaussian matrix, times `scale`.
Operator random_hermitian_matrix(Eigen::Index n, double scale, std::mt19937_64& rng);

/// Haar-like random eigenvectors with a spectrum uniform in [0.05, 1] on `rank` levels.
Operator random_density_matrix(Eigen::Index n, Eigen::Index rank, std::mt19937_64& rng);

/// Formats a double with 17 significant digits; nan/inf spelled out.
std::string format_number(double v);

}  // namespace sea
