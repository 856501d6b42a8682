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

// sea_cli: run, compare and sweep scenario files; check runs a short
// invariant self-test.
//
//   sea_cli run scenarios/sea_three_level.json --set model.tau_d=2 --out out/
//   sea_cli compare scenarios/contrast_two_level.json --baseline ksgl_pauli
//   sea_cli run scenarios/sea_three_level.json --sweep model.tau_d=0.5,1,2
//   sea_cli check
//
// Exit codes: 0 success, 1 self-test failure, 2 invalid scenario, 3 integration failure.

#include <cstdlib>
#include <filesystem>
#include <fstream>
#include <iostream>
#include <random>
#include <sstream>
#include <string>
#include <vector>

#include "CLI11.hpp"
#include "json.hpp"
#include "sea/onsager.hpp"
#include "sea/scenario.hpp"

namespace fs = std::filesystem;
using nlohmann::json;

namespace {

constexpr int kExitCheckFailed = 1;
constexpr int kExitInvalid = 2;
constexpr int kExitIntegration = 3;

struct Options {
  std::string file;
  std::vector<std::string> sets;
  std::string sweep;
  std::uint64_t seed = 0;
  bool seed_given = false;
  std::string out;
  std::string direction = "forward";
  std::string baseline;
};

json read_document(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw sea::ScenarioError(path, "cannot open scenario file");
  try {
    return json::parse(in, nullptr, true, true);
  } catch (const json::parse_error& e) {
    throw sea::ScenarioError(path, std::string("parse error: ") + e.what());
  }
}

std::pair<std::string, std::string> split_assignment(const std::string& s, const char* flag) {
  const auto eq = s.find('=');
  if (eq == std::string::npos || eq == 0) throw sea::ScenarioError(flag, "expected key=value, got '" + s + "'");
  return {s.substr(0, eq), s.substr(eq + 1)};
}

fs::path output_dir(const Options& o, const sea::Scenario& sc) {
  if (!o.out.empty()) return o.out;
  if (!sc.output_path.empty()) return sc.output_path;
  if (const char* env = std::getenv("SEA_OUTPUT_DIR"); env != nullptr && *env != '\0') return env;
  return "sea_out";
}

void write_text(const fs::path& p, const std::string& text) {
  std::ofstream f(p);
  if (!f) throw std::runtime_error("cannot write " + p.string());
  f << text;
}

void write_run(const fs::path& dir, const std::string& stem, const sea::Scenario& sc, const sea::RunResult& r,
               json summary) {
  fs::create_directories(dir);
  std::ostringstream csv;
  sea::write_csv(csv, sc, r);
  write_text(dir / (stem + ".csv"), csv.str());
  write_text(dir / (stem == "trajectory" ? "summary.json" : stem + "_summary.json"), summary.dump(2) + "\n");
}

void print_drift(const std::string& label, const sea::RunResult& r) {
  const auto& d = r.diagnostics;
  std::cout << label << ": termination=" << sea::to_string(r.termination) << " steps=" << d.accepted_steps
            << " max|Tr-1|=" << sea::format_number(d.max_trace_error)
            << " max|dE|=" << sea::format_number(d.max_energy_drift)
            << " min_eig=" << sea::format_number(d.min_eigenvalue)
            << " max_dS_down=" << sea::format_number(d.max_entropy_decrease)
            << (r.degraded ? " DEGRADED" : "") << "\n";
  for (const auto& w : r.warnings) std::cout << "  warning: " << w << "\n";
}

int run_one(const Options& o, const json& doc, const fs::path& forced_dir) {
  const sea::Scenario sc = sea::load_scenario(doc, o.seed_given ? o.seed : doc.value("seed", std::uint64_t{0}));
  const bool backward = o.direction == "backward";
  const fs::path dir = forced_dir.empty() ? output_dir(o, sc) : forced_dir;
  const sea::RunResult r = sea::run_scenario(sc, sc.dynamics, backward);
  json summary = sea::summary_json(sc, r);
  summary["direction"] = o.direction;
  write_run(dir, "trajectory", sc, r, summary);
  print_drift(sc.kind, r);
  std::cout << "wrote " << (dir / "trajectory.csv").string() << "\n";
  return r.termination == sea::Termination::step_underflow ? kExitIntegration : 0;
}

int compare_one(const Options& o, const json& doc, const fs::path& forced_dir) {
  const sea::Scenario sc = sea::load_scenario(doc, o.seed_given ? o.seed : doc.value("seed", std::uint64_t{0}));
  json base_model = sc.config.contains("baseline") ? sc.config.at("baseline") : sc.config.at("model");
  base_model["kind"] = o.baseline;
  const sea::Dynamics base = sea::build_dynamics(base_model, sc);
  const bool backward = o.direction == "backward";
  sea::Scenario sampled = sc;
  if (sampled.samples == 0) sampled.samples = 100;
  const sea::RunResult rp = sea::run_scenario(sampled, sc.dynamics, backward);
  const sea::RunResult rb = sea::run_scenario(sampled, base, backward);
  const fs::path dir = forced_dir.empty() ? output_dir(o, sc) : forced_dir;
  write_run(dir, "primary", sampled, rp, sea::summary_json(sampled, rp));
  sea::Scenario relabeled = sampled;
  relabeled.kind = o.baseline;
  write_run(dir, "baseline", relabeled, rb, sea::summary_json(relabeled, rb));
  const json cmp = sea::compare_json(sampled, rp, o.baseline, rb);
  write_text(dir / "compare_summary.json", cmp.dump(2) + "\n");
  print_drift("primary " + sc.kind, rp);
  print_drift("baseline " + o.baseline, rb);
  std::cout << "max |dS| = " << sea::format_number(cmp["max_abs_entropy_difference"].is_number() ? cmp["max_abs_entropy_difference"].get<double>() : 0.0)
            << ", contrast = " << (cmp["contrast"].get<bool>() ? "yes" : "no") << "\n";
  const bool failed = rp.termination == sea::Termination::step_underflow || rb.termination == sea::Termination::step_underflow;
  return failed ? kExitIntegration : 0;
}

int dispatch(const Options& o, bool compare) {
  json doc = read_document(o.file);
  for (const auto& s : o.sets) {
    const auto [k, v] = split_assignment(s, "--set");
    sea::apply_override(doc, k, v);
  }
  auto once = [&](const json& d, const fs::path& dir) { return compare ? compare_one(o, d, dir) : run_one(o, d, dir); };
  if (o.sweep.empty()) return once(doc, {});

  const auto [key, list] = split_assignment(o.sweep, "--sweep");
  std::vector<std::string> values;
  std::stringstream ss(list);
  for (std::string v; std::getline(ss, v, ',');) {
    if (!v.empty()) values.push_back(v);
  }
  if (values.empty()) throw sea::ScenarioError("--sweep", "no values given");
  // Validate every variant before running any.
  std::vector<json> docs;
  for (const auto& v : values) {
    json d = doc;
    sea::apply_override(d, key, v);
    sea::load_scenario(d, o.seed_given ? o.seed : d.value("seed", std::uint64_t{0}));
    docs.push_back(std::move(d));
  }
  const sea::Scenario first = sea::load_scenario(docs.front(), o.seed_given ? o.seed : docs.front().value("seed", std::uint64_t{0}));
  const fs::path root = output_dir(o, first);
  int worst = 0;
  for (std::size_t i = 0; i < values.size(); ++i) {
    std::cout << "[" << key << "=" << values[i] << "]\n";
    worst = std::max(worst, once(docs[i], root / (key + "=" + values[i])));
  }
  return worst;
}

// Short invariant self-test on seeded random states.
int self_check(std::uint64_t seed) {
  std::mt19937_64 rng(seed);
  int failures = 0;
  auto report = [&](const std::string& name, bool ok, double worst) {
    std::cout << (ok ? "PASS " : "FAIL ") << name << " (worst " << sea::format_number(worst) << ")\n";
    if (!ok) ++failures;
  };

  double w_trace = 0.0, w_energy = 0.0, w_rate = 0.0, w_orth = 0.0;
  for (int i = 0; i < 200; ++i) {
    const Eigen::Index n = 2 + i % 4;
    const sea::DensityState s = sea::make_state(sea::random_density_matrix(n, 1 + i % n, rng));
    const sea::Operator h = sea::random_hermitian_matrix(n, 1.0, rng);
    const sea::SeaRhsResult r = sea::sea_rhs(s, h, 1.0);
    const double scale = std::max(1.0, sea::max_abs_entry(r.drho_dt));
    w_trace = std::max(w_trace, std::abs(r.drho_dt.trace()) / scale);
    w_energy = std::max(w_energy, std::abs((h * r.drho_dt).trace()) / (scale * std::max(1.0, sea::max_abs_entry(h))));
    w_rate = std::min(w_rate, r.entropy_rate);
    const sea::SqrtState g = sea::sqrt_state(s);
    w_orth = std::max(w_orth, std::abs(sea::real_inner(r.dgamma_d, g.gamma)));
  }
  report("trace conservation", w_trace <= 1e-12, w_trace);
  report("energy conservation", w_energy <= 1e-10, w_energy);
  report("nonnegative entropy production", w_rate >= -1e-12, w_rate);
  report("dissipative drift orthogonal to gamma", w_orth <= 1e-10, w_orth);

  double w_master = 0.0;
  for (int i = 0; i < 50; ++i) {
    const Eigen::Index n = 3 + i % 3;
    sea::RealVector p(n), e(n);
    std::uniform_real_distribution<double> u(0.05, 1.0);
    for (Eigen::Index k = 0; k < n; ++k) {
      p(k) = u(rng);
      e(k) = static_cast<double>(k) + u(rng);
    }
    p /= p.sum();
    const sea::RealVector a = sea::master_rhs_diagonal(p, e, 0.7);
    const sea::RealVector b = sea::master_rhs_alpha_beta(p, e, 0.7);
    w_master = std::max(w_master, (a - b).cwiseAbs().maxCoeff());
  }
  report("master equation closed forms agree", w_master <= 1e-12, w_master);

  double w_onsager = 0.0;
  for (int i = 0; i < 50; ++i) {
    const Eigen::Index n = 2 + i % 3;
    const sea::DensityState s = sea::make_state(sea::random_density_matrix(n, n, rng));
    const sea::Operator h = sea::random_hermitian_matrix(n, 1.0, rng);
    const sea::OnsagerReport r = sea::onsager_report(s, h, sea::quorum_basis(n), 1.0);
    const double ref = std::max(std::abs(r.entropy_rate_direct), 1e-300);
    w_onsager = std::max(w_onsager, std::abs(r.entropy_rate_quadratic - r.entropy_rate_direct) / ref);
  }
  report("Onsager quadratic form matches the entropy rate", w_onsager <= 1e-8, w_onsager);

  const sea::DensityState s = sea::make_state(sea::random_density_matrix(3, 3, rng));
  const sea::Operator h = sea::random_hermitian_matrix(3, 1.0, rng);
  sea::IntegrationConfig cfg;
  cfg.rel_tol = 1e-12;
  cfg.abs_tol = 1e-14;
  const double rt = sea::roundtrip_drift(sea::hamiltonian_dynamics(h), s, 2.0, cfg);
  report("unitary round trip", rt <= 1e-9, rt);

  return failures == 0 ? 0 : kExitCheckFailed;
}

void add_scenario_options(CLI::App* cmd, Options& o) {
  cmd->add_option("file", o.file, "Scenario file (JSON)")->required();
  cmd->add_option("--set", o.sets, "Override a scenario key, e.g. model.tau_d=2")->take_all();
  cmd->add_option("--sweep", o.sweep, "Run once per value: key=a,b,c");
  cmd->add_option("--seed", o.seed, "Seed for random scenario entries")->each([&o](const std::string&) { o.seed_given = true; });
  cmd->add_option("--out", o.out, "Output directory (default: output.path, $SEA_OUTPUT_DIR, ./sea_out)");
  cmd->add_option("--direction", o.direction, "forward or backward")->check(CLI::IsMember({"forward", "backward"}));
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"Steepest-entropy-ascent dynamics driver"};
  app.require_subcommand(1);
  Options o;
  CLI::App* run = app.add_subcommand("run", "Integrate a scenario and write CSV and JSON artifacts");
  add_scenario_options(run, o);
  CLI::App* compare = app.add_subcommand("compare", "Run a scenario against a baseline model on the same samples");
  add_scenario_options(compare, o);
  compare->add_option("--baseline", o.baseline, "Baseline model kind")->required()->check(CLI::IsMember(sea::model_kinds()));
  CLI::App* check = app.add_subcommand("check", "Run the invariant self-test suite");
  check->add_option("--seed", o.seed, "Seed for the random states");

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    const int rc = app.exit(e);
    return rc == 0 ? 0 : kExitInvalid;
  }

  try {
    if (check->parsed()) return self_check(o.seed);
    return dispatch(o, compare->parsed());
  } catch (const sea::ScenarioError& e) {
    std::cerr << "invalid scenario: " << e.what() << "\n";
    return kExitInvalid;
  } catch (const sea::IntegrationError& e) {
    std::cerr << "integration failed at t = " << sea::format_number(e.t()) << ": " << e.what() << "\n";
    return kExitIntegration;
  } catch (const std::exception& e) {
    std::cerr << "error: " << e.what() << "\n";
    return kExitIntegration;
  }
}
