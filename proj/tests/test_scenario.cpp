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

#include <sstream>
#include <string>

#include "doctest.h"
#include "sea/scenario.hpp"
#include "support.hpp"

using namespace sea;
using namespace sea::testing;
using nlohmann::json;

namespace {

json qubit_doc() {
  return json::parse(R"({
    "system": {"dimension": 2, "hamiltonian": {"diagonal": [1.0, -1.0]}},
    "initial_state": {"matrix": [[0.7, [0.2, 0.1]], [[0.2, -0.1], 0.3]]},
    "model": {"kind": "sea", "tau_d": 1.0},
    "integration": {"t1": 3.0, "rel_tol": 1e-10, "abs_tol": 1e-12},
    "output": {"samples": 30}
  })");
}

std::string field_of(const json& doc) {
  try {
    load_scenario(doc);
  } catch (const ScenarioError& e) {
    return e.field();
  }
  return "";
}

std::vector<std::string> split(const std::string& line) {
  std::vector<std::string> out;
  std::stringstream ss(line);
  for (std::string c; std::getline(ss, c, ',');) out.push_back(c);
  return out;
}

}  // namespace

TEST_CASE("scenario validation names the offending field") {
  json d = qubit_doc();
  d["model"]["tau_d"] = -1.0;
  CHECK(field_of(d) == "model.tau_d");
  d = qubit_doc();
  d["model"].erase("tau_d");
  CHECK(field_of(d) == "model.tau_d");
  d = qubit_doc();
  d["model"]["kind"] = "nope";
  CHECK(field_of(d) == "model.kind");
  d = qubit_doc();
  d["initial_state"]["matrix"] = json::parse("[[0.5, 0.5], [0.5, -0.5]]");
  CHECK(field_of(d) == "initial_state");
  d = qubit_doc();
  d["system"]["hamiltonian"] = json::parse("[[0, 1], [2, 0]]");
  CHECK(field_of(d) == "system.hamiltonian");
  d = qubit_doc();
  d["integration"]["rel_tol"] = 0.0;
  CHECK(field_of(d) == "integration");
  d = qubit_doc();
  d["model"] = json::parse(R"({"kind": "sea_composite", "tau_a": 1, "tau_b": 1})");
  CHECK(field_of(d) == "system.composite");
  d = qubit_doc();
  d["model"] = json::parse(R"({"kind": "ksgl_pauli", "w_matrix": [[0, -1], [1, 0]]})");
  CHECK(field_of(d) == "model.w_matrix");
  CHECK(field_of(qubit_doc()).empty());
}

TEST_CASE("overrides and config hash") {
  json d = qubit_doc();
  apply_override(d, "model.tau_d", "2.5");
  CHECK(d["model"]["tau_d"].get<double>() == 2.5);
  apply_override(d, "model.kind", "hamiltonian");
  CHECK(d["model"]["kind"] == "hamiltonian");
  apply_override(d, "output.new_table.flag", "true");
  CHECK(d["output"]["new_table"]["flag"] == true);
  CHECK_THROWS_AS(apply_override(d, "a..b", "1"), ScenarioError);

  const Scenario a = load_scenario(qubit_doc(), 3);
  const Scenario b = load_scenario(qubit_doc(), 3);
  const Scenario c = load_scenario(qubit_doc(), 4);
  CHECK(a.config_hash == b.config_hash);
  CHECK(a.config_hash != c.config_hash);
  CHECK(a.config_hash.size() == 16);
}

TEST_CASE("CSV schema and number format") {
  const Scenario sc = load_scenario(qubit_doc());
  const RunResult r = run_scenario(sc, sc.dynamics);
  std::ostringstream os;
  write_csv(os, sc, r);
  std::istringstream in(os.str());
  std::string line;
  std::getline(in, line);
  CHECK(line == "# config_hash=" + sc.config_hash + " model=sea");
  std::getline(in, line);
  CHECK(line == "t,trace,energy,entropy,purity,theta_h,theta_s,entropy_rate,min_eig,eig_0,eig_1");
  std::getline(in, line);
  const auto cells = split(line);
  REQUIRE(cells.size() == 11);
  CHECK(cells[0] == "0");
  CHECK(format_number(0.1) == "0.10000000000000001");
  CHECK(format_number(1.0 / 3.0) == "0.33333333333333331");
  CHECK(format_number(std::numeric_limits<double>::infinity()) == "inf");
  CHECK(format_number(std::numeric_limits<double>::quiet_NaN()) == "nan");
}

TEST_CASE("golden qubit run against the library") {
  const Scenario sc = load_scenario(qubit_doc());
  const RunResult r = run_scenario(sc, sc.dynamics);
  REQUIRE(r.points.size() == 31);
  CHECK_FALSE(r.degraded);
  double prev = -1.0;
  for (const auto& p : r.points) {
    CHECK(p.drift.entropy >= prev - 1e-10);
    prev = p.drift.entropy;
  }
  // Direct integration with the same configuration reproduces the first
  // stretch before the equilibrium event.
  IntegrationConfig cfg = sc.integration;
  cfg.samples = 30;
  const Trajectory tr = integrate(sea_dynamics(pauli_z(), 1.0), sc.rho0, cfg);
  for (std::size_t i = 0; i + 1 < tr.points.size(); ++i) {
    CHECK(max_abs_entry(tr.points[i].state.rho() - r.points[i].state.rho()) == 0.0);
  }
  // Terminal state is the canonical state with the initial energy.
  const DensityState target = canonical_for_energy(pauli_z(), mean_value(sc.rho0, pauli_z()));
  CHECK(trace_distance(r.points.back().state.rho(), target.rho()) < 1e-6);

  const json s = summary_json(sc, r);
  CHECK(s["rows"] == 31);
  CHECK(s["termination"] == "equilibrium");
  CHECK(s["config_hash"] == sc.config_hash);
}

TEST_CASE("backward override reverses time") {
  json d = qubit_doc();
  d["model"] = json::parse(R"({"kind": "sea", "tau": 1.0})");
  const Scenario sc = load_scenario(d);
  const RunResult r = run_scenario(sc, sc.dynamics, true);
  REQUIRE(r.points.size() == 31);
  CHECK(r.points.back().t == -3.0);
  for (std::size_t i = 1; i < r.points.size(); ++i) CHECK(r.points[i].t < r.points[i - 1].t);
  CHECK(r.points.back().drift.entropy < r.points.front().drift.entropy);
}

TEST_CASE("compare flags the kernel contrast") {
  const json d = json::parse(R"({
    "system": {"dimension": 2, "hamiltonian": {"diagonal": [0.0, 1.0]}},
    "initial_state": {"eigenvalues": [1.0, 0.0]},
    "model": {"kind": "sea", "tau_d": 1.0, "w_matrix": [[0.0, 0.2], [0.5, 0.0]]},
    "integration": {"t1": 2.0, "rel_tol": 1e-10, "abs_tol": 1e-12},
    "output": {"samples": 20}
  })");
  const Scenario sc = load_scenario(d);
  json base = sc.config["model"];
  base["kind"] = "ksgl_pauli";
  const RunResult rp = run_scenario(sc, sc.dynamics);
  const RunResult rb = run_scenario(sc, build_dynamics(base, sc));
  const json cmp = compare_json(sc, rp, "ksgl_pauli", rb);
  CHECK(cmp["aligned"] == true);
  CHECK(cmp["contrast"] == true);
  CHECK(cmp["zero_eigenvalues"]["primary_max_kernel_eigenvalue"].get<double>() == 0.0);
  CHECK(cmp["zero_eigenvalues"]["baseline_max_kernel_eigenvalue"].get<double>() > 0.1);
  CHECK(cmp["divergent_entropy_rate_rows"]["baseline"].get<long>() >= 1);

  json ham = sc.config["model"];
  ham["kind"] = "hamiltonian";
  const Dynamics hd = build_dynamics(ham, sc);
  const json same = compare_json(sc, run_scenario(sc, hd), "hamiltonian", run_scenario(sc, hd));
  CHECK(same["max_trace_distance"].get<double>() == 0.0);
  CHECK(same["contrast"] == false);
}

TEST_CASE("seeded random scenarios are reproducible") {
  const json d = json::parse(R"({
    "system": {"dimension": 3, "hamiltonian": {"random": {"scale": 1.0}}},
    "initial_state": {"random": {"rank": 2}},
    "model": {"kind": "sea", "tau": 1.0},
    "integration": {"t1": 1.0},
    "output": {"samples": 5}
  })");
  auto csv = [&](std::uint64_t seed) {
    const Scenario sc = load_scenario(d, seed);
    std::ostringstream os;
    write_csv(os, sc, run_scenario(sc, sc.dynamics));
    return os.str();
  };
  CHECK(csv(11) == csv(11));
  CHECK(csv(11) != csv(12));
  CHECK(load_scenario(d, 11).rho0.rank() == 2);
}

TEST_CASE("composite and observables parse") {
  const json d = json::parse(R"({
    "system": {"composite": {"dims": [2, 3], "h_a": {"diagonal": [0, 1]}, "h_b": {"diagonal": [0, 1, 2]}}},
    "initial_state": {"product": {"a": {"diagonal": [0.6, 0.4]}, "b": {"diagonal": [0.5, 0.3, 0.2]}}},
    "model": {"kind": "sea_composite", "tau_a": 1.0, "tau_b": 2.0},
    "output": {"observables": [{"name": "n_b", "matrix": {"diagonal": [0, 1, 2, 0, 1, 2]}}]}
  })");
  const Scenario sc = load_scenario(d);
  REQUIRE(sc.dims);
  CHECK(sc.dims->total() == 6);
  CHECK(sc.rho0.dim() == 6);
  CHECK(sc.observables.size() == 1);
  CHECK(sc.dynamics.name == "sea_composite");
}
