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

#include "sea/scenario.hpp"

#include <algorithm>
#include <cmath>
#include <cstdio>
#include <limits>
#include <random>
#include <sstream>

namespace sea {

namespace {

using nlohmann::json;

constexpr double kTraceBound = 1e-9;
constexpr double kEnergyBound = 1e-8;
constexpr double kNegativeBound = -1e-9;
constexpr double kPinnedBound = 1e-8;

const json& require(const json& j, const std::string& key, const std::string& path) {
  if (!j.is_object() || !j.contains(key)) throw ScenarioError(path + "." + key, "missing");
  return j.at(key);
}

double number(const json& j, const std::string& path) {
  if (j.is_number()) return j.get<double>();
  if (j.is_string()) {
    const auto& s = j.get_ref<const std::string&>();
    if (s == "inf" || s == "+inf") return std::numeric_limits<double>::infinity();
    if (s == "-inf") return -std::numeric_limits<double>::infinity();
  }
  throw ScenarioError(path, "expected a number");
}

double positive(const json& table, const std::string& key, const std::string& path) {
  const double v = number(require(table, key, path), path + "." + key);
  if (!(v > 0.0) || !std::isfinite(v)) throw ScenarioError(path + "." + key, "must be positive and finite");
  return v;
}

double optional_number(const json& table, const std::string& key, double fallback, const std::string& path) {
  return table.contains(key) ? number(table.at(key), path + "." + key) : fallback;
}

Complex entry(const json& e, const std::string& path) {
  if (e.is_number()) return {e.get<double>(), 0.0};
  if (e.is_array() && e.size() == 2 && e[0].is_number() && e[1].is_number()) {
    return {e[0].get<double>(), e[1].get<double>()};
  }
  throw ScenarioError(path, "matrix entries are numbers or [re, im] pairs");
}

Operator parse_matrix(const json& j, Eigen::Index n, const std::string& path, std::mt19937_64* rng = nullptr) {
  if (j.is_object() && j.contains("diagonal")) {
    const json& d = j.at("diagonal");
    if (!d.is_array() || d.empty()) throw ScenarioError(path + ".diagonal", "expected a nonempty array");
    if (n > 0 && static_cast<Eigen::Index>(d.size()) != n) throw ScenarioError(path + ".diagonal", "length does not match the dimension");
    Operator m = Operator::Zero(static_cast<Eigen::Index>(d.size()), static_cast<Eigen::Index>(d.size()));
    for (std::size_t i = 0; i < d.size(); ++i) m(static_cast<Eigen::Index>(i), static_cast<Eigen::Index>(i)) = entry(d[i], path + ".diagonal");
    return m;
  }
  if (j.is_object() && j.contains("random")) {
    if (rng == nullptr || n <= 0) throw ScenarioError(path + ".random", "random matrices are not allowed here");
    const double scale = j.at("random").is_object() ? optional_number(j.at("random"), "scale", 1.0, path + ".random") : 1.0;
    return random_hermitian_matrix(n, scale, *rng);
  }
  if (!j.is_array() || j.empty()) throw ScenarioError(path, "expected a matrix (array of rows) or {\"diagonal\": [...]}");
  const auto rows = static_cast<Eigen::Index>(j.size());
  if (n > 0 && rows != n) throw ScenarioError(path, "matrix dimension does not match the system");
  Operator m(rows, rows);
  for (Eigen::Index i = 0; i < rows; ++i) {
    const json& row = j[static_cast<std::size_t>(i)];
    if (!row.is_array() || static_cast<Eigen::Index>(row.size()) != rows) throw ScenarioError(path, "matrix is not square");
    for (Eigen::Index k = 0; k < rows; ++k) m(i, k) = entry(row[static_cast<std::size_t>(k)], path);
  }
  return m;
}

Operator parse_hermitian(const json& j, Eigen::Index n, const std::string& path, std::mt19937_64* rng = nullptr) {
  const Operator m = parse_matrix(j, n, path, rng);
  if (!is_hermitian(m)) throw ScenarioError(path, "matrix is not hermitian");
  return m;
}

struct SystemView {
  const Operator& hamiltonian;
  const Units& units;
  std::optional<Dims> dims;
};

DensityState parse_state(const json& j, const SystemView& sc, Eigen::Index n, const std::string& path,
                         std::mt19937_64& rng) {
  if (!j.is_object()) throw ScenarioError(path, "expected a table");
  try {
    if (j.contains("matrix")) return make_state(parse_hermitian(j.at("matrix"), n, path + ".matrix"));
    if (j.contains("diagonal")) return make_state(parse_matrix(j, n, path));
    if (j.contains("eigenvalues")) {
      const json& ev = j.at("eigenvalues");
      if (!ev.is_array() || static_cast<Eigen::Index>(ev.size()) != n) {
        throw ScenarioError(path + ".eigenvalues", "expected " + std::to_string(n) + " values");
      }
      RealVector p(n);
      for (Eigen::Index k = 0; k < n; ++k) p(k) = number(ev[static_cast<std::size_t>(k)], path + ".eigenvalues");
      const std::string basis = j.value("basis", "hamiltonian");
      Operator v = identity(n);
      if (basis == "hamiltonian") {
        if (sc.hamiltonian.rows() != n) throw ScenarioError(path + ".basis", "hamiltonian basis needs the system Hamiltonian");
        v = Eigen::SelfAdjointEigenSolver<Operator>(sc.hamiltonian).eigenvectors();
      } else if (basis != "computational") {
        throw ScenarioError(path + ".basis", "expected \"hamiltonian\" or \"computational\"");
      }
      return make_state(v * p.cast<Complex>().asDiagonal() * v.adjoint());
    }
    if (j.contains("canonical")) {
      const double temp = number(require(j.at("canonical"), "temperature", path + ".canonical"), path + ".canonical.temperature");
      return canonical_state(sc.hamiltonian, temp, std::nullopt, sc.units);
    }
    if (j.contains("random")) {
      const json& r = j.at("random");
      const auto rank = static_cast<Eigen::Index>(r.is_object() ? optional_number(r, "rank", static_cast<double>(n), path + ".random") : n);
      if (rank < 1 || rank > n) throw ScenarioError(path + ".random.rank", "must lie in [1, dimension]");
      return make_state(random_density_matrix(n, rank, rng));
    }
    if (j.contains("product")) {
      if (!sc.dims) throw ScenarioError(path + ".product", "product states need a composite system");
      const json& pr = j.at("product");
      const Operator none;
      const SystemView local{none, sc.units, std::nullopt};
      const DensityState a = parse_state(require(pr, "a", path + ".product"), local, sc.dims->a, path + ".product.a", rng);
      const DensityState b = parse_state(require(pr, "b", path + ".product"), local, sc.dims->b, path + ".product.b", rng);
      return make_state(kron(a.rho(), b.rho()));
    }
  } catch (const InvalidState& e) {
    throw ScenarioError(path, e.what());
  } catch (const InvalidInput& e) {
    throw ScenarioError(path, e.what());
  }
  throw ScenarioError(path, "expected one of matrix, diagonal, eigenvalues, canonical, random, product");
}

std::string hex64(std::uint64_t v) {
  char buf[17];
  std::snprintf(buf, sizeof buf, "%016llx", static_cast<unsigned long long>(v));
  return buf;
}

json num(double v) {
  if (std::isfinite(v)) return v;
  return format_number(v);
}

json opt_num(const std::optional<double>& v) { return v ? num(*v) : json(nullptr); }

bool row_degraded(const TrajectoryPoint& p, double h_scale, bool energy_bound) {
  return p.drift.trace_error > kTraceBound || (energy_bound && p.drift.energy_drift > kEnergyBound * h_scale) ||
         p.drift.min_eigenvalue < kNegativeBound;
}

}  // namespace

Operator random_hermitian_matrix(Eigen::Index n, double scale, std::mt19937_64& rng) {
  std::normal_distribution<double> g;
  Operator a(n, n);
  for (Eigen::Index j = 0; j < n; ++j)
    for (Eigen::Index i = 0; i < n; ++i) a(i, j) = Complex(g(rng), g(rng));
  return hermitian_part(a) * scale;
}

Operator random_density_matrix(Eigen::Index n, Eigen::Index rank, std::mt19937_64& rng) {
  std::normal_distribution<double> g;
  std::uniform_real_distribution<double> u(0.05, 1.0);
  Operator a(n, n);
  for (Eigen::Index j = 0; j < n; ++j)
    for (Eigen::Index i = 0; i < n; ++i) a(i, j) = Complex(g(rng), g(rng));
  const Operator q = Eigen::HouseholderQR<Operator>(a).householderQ();
  RealVector p = RealVector::Zero(n);
  for (Eigen::Index k = 0; k < rank; ++k) p(k) = u(rng);
  p /= p.sum();
  return q * p.cast<Complex>().asDiagonal() * q.adjoint();
}

const std::vector<std::string>& model_kinds() {
  static const std::vector<std::string> kinds{"sea",          "hamiltonian",         "sea_composite",   "massieu",
                                              "helmholtz_theta_s", "helmholtz_reservoir", "heat_interaction", "ksgl_pauli"};
  return kinds;
}

void apply_override(json& doc, const std::string& key, const std::string& value) {
  if (key.empty()) throw ScenarioError(key, "empty override key");
  json* node = &doc;
  std::size_t start = 0;
  while (true) {
    const std::size_t dot = key.find('.', start);
    const std::string part = key.substr(start, dot == std::string::npos ? std::string::npos : dot - start);
    if (part.empty()) throw ScenarioError(key, "malformed override key");
    if (!node->is_object()) *node = json::object();
    node = &(*node)[part];
    if (dot == std::string::npos) break;
    start = dot + 1;
  }
  json parsed = json::parse(value, nullptr, false);
  *node = parsed.is_discarded() ? json(value) : std::move(parsed);
}

std::string config_hash(const json& doc) {
  const std::string s = doc.dump();
  std::uint64_t h = 1469598103934665603ULL;
  for (unsigned char c : s) {
    h ^= c;
    h *= 1099511628211ULL;
  }
  return hex64(h);
}

Dynamics build_dynamics(const json& model, const Scenario& sc) {
  const std::string path = "model";
  if (!model.is_object()) throw ScenarioError(path, "expected a table");
  const std::string kind = require(model, "kind", path).is_string() ? model.at("kind").get<std::string>() : "";
  const Operator& h = sc.hamiltonian;
  try {
    if (kind == "sea") {
      if (model.contains("tau")) return sea_dynamics(h, DissipationTime::constant_tau(positive(model, "tau", path)), sc.units);
      return sea_dynamics(h, DissipationTime(positive(model, "tau_d", path)), sc.units);
    }
    if (kind == "hamiltonian") return hamiltonian_dynamics(h, sc.units);
    if (kind == "sea_composite") {
      if (!sc.dims) throw ScenarioError("system.composite", "sea_composite needs a composite system");
      return composite_dynamics(h, *sc.dims, positive(model, "tau_a", path), positive(model, "tau_b", path), sc.units);
    }
    if (kind == "massieu") {
      const double theta = number(require(model, "theta", path), path + ".theta");
      if (theta == 0.0 || std::isnan(theta)) throw ScenarioError(path + ".theta", "must be nonzero");
      return pheno_dynamics(h, PhenoMode::massieu(theta, positive(model, "tau_g", path)), sc.units);
    }
    if (kind == "helmholtz_theta_s") return pheno_dynamics(h, PhenoMode::helmholtz_theta_s(positive(model, "tau_f", path)), sc.units);
    if (kind == "helmholtz_reservoir") {
      return pheno_dynamics(h, PhenoMode::helmholtz_reservoir(positive(model, "t_r", path), positive(model, "tau_f", path)), sc.units);
    }
    if (kind == "heat_interaction") {
      return pheno_dynamics(h, PhenoMode::heat_interaction(positive(model, "t_q", path), positive(model, "tau_f", path)), sc.units);
    }
    if (kind == "ksgl_pauli") {
      const Eigen::Index n = h.rows();
      std::vector<Operator> vs;
      if (model.contains("w_matrix")) {
        const json& wj = model.at("w_matrix");
        if (!wj.is_array() || static_cast<Eigen::Index>(wj.size()) != n) throw ScenarioError(path + ".w_matrix", "expected a d x d array");
        RealMatrix w(n, n);
        for (Eigen::Index i = 0; i < n; ++i) {
          const json& row = wj[static_cast<std::size_t>(i)];
          if (!row.is_array() || static_cast<Eigen::Index>(row.size()) != n) throw ScenarioError(path + ".w_matrix", "expected a d x d array");
          for (Eigen::Index k = 0; k < n; ++k) {
            w(i, k) = number(row[static_cast<std::size_t>(k)], path + ".w_matrix");
            if (!(w(i, k) >= 0.0) || !std::isfinite(w(i, k))) throw ScenarioError(path + ".w_matrix", "rates must be finite and nonnegative");
          }
        }
        vs = transition_operators(h, w);
      }
      if (model.contains("operators")) {
        const json& ops = model.at("operators");
        if (!ops.is_array()) throw ScenarioError(path + ".operators", "expected an array of matrices");
        for (std::size_t i = 0; i < ops.size(); ++i) vs.push_back(parse_matrix(ops[i], n, path + ".operators[" + std::to_string(i) + "]"));
      }
      if (!model.contains("w_matrix") && !model.contains("operators")) throw ScenarioError(path + ".w_matrix", "missing");
      Dynamics d = ksgl_dynamics(h, vs, sc.units);
      d.name = "ksgl_pauli";
      return d;
    }
  } catch (const InvalidInput& e) {
    throw ScenarioError(path, e.what());
  }
  std::string known;
  for (const auto& k : model_kinds()) known += (known.empty() ? "" : ", ") + k;
  throw ScenarioError(path + ".kind", "unknown model kind '" + kind + "' (expected one of " + known + ")");
}

Scenario load_scenario(const json& doc_in, std::uint64_t seed) {
  if (!doc_in.is_object()) throw ScenarioError("", "scenario must be a table");
  Scenario sc;
  sc.config = doc_in;
  sc.config["seed"] = seed;
  sc.config_hash = config_hash(sc.config);
  const json& doc = sc.config;
  std::mt19937_64 rng(seed);

  const json& sys = require(doc, "system", "scenario");
  if (sys.contains("units")) {
    sc.units.k_B = positive(sys.at("units"), "k_B", "system.units");
    sc.units.hbar = positive(sys.at("units"), "hbar", "system.units");
  }
  Eigen::Index n = 0;
  if (sys.contains("dimension")) {
    const json& dj = sys.at("dimension");
    if (!dj.is_number_integer() || dj.get<long>() < 2) throw ScenarioError("system.dimension", "must be an integer >= 2");
    n = dj.get<Eigen::Index>();
  }
  if (sys.contains("composite")) {
    const json& c = sys.at("composite");
    const json& dj = require(c, "dims", "system.composite");
    if (!dj.is_array() || dj.size() != 2 || !dj[0].is_number_integer() || !dj[1].is_number_integer() ||
        dj[0].get<long>() < 2 || dj[1].get<long>() < 2) {
      throw ScenarioError("system.composite.dims", "expected two integers >= 2");
    }
    sc.dims = Dims{dj[0].get<Eigen::Index>(), dj[1].get<Eigen::Index>()};
    if (n != 0 && n != sc.dims->total()) throw ScenarioError("system.dimension", "does not match composite dims");
    n = sc.dims->total();
    const Operator ha = parse_hermitian(require(c, "h_a", "system.composite"), sc.dims->a, "system.composite.h_a", &rng);
    const Operator hb = parse_hermitian(require(c, "h_b", "system.composite"), sc.dims->b, "system.composite.h_b", &rng);
    sc.hamiltonian = noninteracting_hamiltonian(ha, hb);
    if (c.contains("interaction")) sc.hamiltonian += parse_hermitian(c.at("interaction"), n, "system.composite.interaction", &rng);
  } else {
    const json& hj = require(sys, "hamiltonian", "system");
    if (n == 0) {
      if (hj.is_array()) n = static_cast<Eigen::Index>(hj.size());
      else if (hj.is_object() && hj.contains("diagonal") && hj.at("diagonal").is_array()) n = static_cast<Eigen::Index>(hj.at("diagonal").size());
      else throw ScenarioError("system.dimension", "missing");
    }
    sc.hamiltonian = parse_hermitian(hj, n, "system.hamiltonian", &rng);
  }

  sc.rho0 = parse_state(require(doc, "initial_state", "scenario"), SystemView{sc.hamiltonian, sc.units, sc.dims}, n,
                        "initial_state", rng);

  const json& model = require(doc, "model", "scenario");
  sc.dynamics = build_dynamics(model, sc);
  sc.kind = model.at("kind").get<std::string>();

  const json integ = doc.value("integration", json::object());
  const std::string ip = "integration";
  IntegrationConfig& cfg = sc.integration;
  cfg.t0 = optional_number(integ, "t0", 0.0, ip);
  cfg.t1 = optional_number(integ, "t1", 10.0, ip);
  cfg.dt_init = optional_number(integ, "dt_init", 1e-3, ip);
  cfg.dt_min = optional_number(integ, "dt_min", 1e-12, ip);
  cfg.dt_max = optional_number(integ, "dt_max", 0.1, ip);
  cfg.rel_tol = optional_number(integ, "rel_tol", 1e-9, ip);
  cfg.abs_tol = optional_number(integ, "abs_tol", 1e-12, ip);
  cfg.stop_on_equilibrium = integ.value("stop_on_equilibrium", true);
  cfg.equilibrium_threshold = optional_number(integ, "equilibrium_threshold", 1e-9, ip);
  try {
    cfg.validate();
  } catch (const InvalidInput& e) {
    throw ScenarioError(ip, e.what());
  }

  const json out = doc.value("output", json::object());
  sc.output_path = out.value("path", "");
  const double stride = optional_number(out, "stride", 1.0, "output");
  if (!(stride >= 1.0) || stride != std::floor(stride)) throw ScenarioError("output.stride", "must be a positive integer");
  cfg.record_stride = static_cast<int>(stride);
  const double samples = optional_number(out, "samples", 0.0, "output");
  if (!(samples >= 0.0) || samples != std::floor(samples)) throw ScenarioError("output.samples", "must be a nonnegative integer");
  sc.samples = static_cast<int>(samples);
  if (out.contains("observables")) {
    const json& obs = out.at("observables");
    if (!obs.is_array()) throw ScenarioError("output.observables", "expected an array");
    for (std::size_t i = 0; i < obs.size(); ++i) {
      const std::string op = "output.observables[" + std::to_string(i) + "]";
      const json& name = require(obs[i], "name", op);
      if (!name.is_string()) throw ScenarioError(op + ".name", "expected a string");
      sc.observables.push_back({name.get<std::string>(), parse_hermitian(require(obs[i], "matrix", op), n, op + ".matrix")});
    }
  }
  return sc;
}

RunResult run_scenario(const Scenario& sc, const Dynamics& dyn, bool backward) {
  IntegrationConfig cfg = sc.integration;
  if (backward) cfg.t1 = cfg.t0 - (cfg.t1 - cfg.t0);
  cfg.samples = sc.samples;
  const Trajectory tr = integrate(dyn, sc.rho0, cfg);

  RunResult r;
  r.points = tr.points;
  r.termination = tr.termination;
  r.diagnostics = tr.diagnostics;
  r.warnings = tr.warnings;

  // Sampled runs continue past an equilibrium event with the Hamiltonian term
  // alone (the dissipator vanishes there), so every sample time gets a row.
  if (sc.samples > 0 && tr.termination == Termination::equilibrium && tr.back().t != cfg.t1) {
    const int n = sc.samples;
    auto sample_time = [&](int i) { return i >= n ? cfg.t1 : cfg.t0 + (cfg.t1 - cfg.t0) * static_cast<double>(i) / n; };
    // The event row itself is off the sample grid unless it is t0.
    if (r.points.size() > 1) r.points.pop_back();
    int next = static_cast<int>(r.points.size());
    const Dynamics ham = hamiltonian_dynamics(sc.hamiltonian, sc.units);
    IntegrationConfig rest = cfg;
    rest.stop_on_equilibrium = false;
    rest.samples = 0;
    rest.record_stride = std::numeric_limits<int>::max();
    DensityState state = tr.back().state;
    double t = tr.back().t;
    for (; next <= n; ++next) {
      rest.t0 = t;
      rest.t1 = sample_time(next);
      const Trajectory seg = integrate(ham, state, rest);
      r.points.push_back(seg.back());
      state = seg.back().state;
      t = rest.t1;
    }
    r.warnings.push_back("dissipator vanished at t = " + format_number(tr.back().t) +
                         "; later rows follow the Hamiltonian term alone");
  }

  const double h_scale = std::max(1.0, max_abs_entry(sc.hamiltonian));
  const double e0 = mean_value(sc.rho0, sc.hamiltonian);
  for (auto& p : r.points) {
    p.drift.energy_drift = std::abs(p.functionals.mean_h - e0);
    if (dyn.entropy_rate) p.entropy_rate = dyn.entropy_rate(p.t, p.state);
    if (row_degraded(p, h_scale, dyn.conserves_energy)) r.degraded = true;
  }
  if (r.termination == Termination::step_underflow) r.degraded = true;
  r.conserves_energy = dyn.conserves_energy;
  return r;
}

std::string format_number(double v) {
  if (std::isnan(v)) return "nan";
  if (std::isinf(v)) return v > 0 ? "inf" : "-inf";
  char buf[32];
  std::snprintf(buf, sizeof buf, "%.17g", v);
  return buf;
}

void write_csv(std::ostream& os, const Scenario& sc, const RunResult& r) {
  const Eigen::Index n = sc.rho0.dim();
  os << "# config_hash=" << sc.config_hash << " model=" << sc.kind << "\n";
  os << "t,trace,energy,entropy,purity,theta_h,theta_s,entropy_rate,min_eig";
  for (Eigen::Index k = 0; k < n; ++k) os << ",eig_" << k;
  for (const auto& o : sc.observables) os << "," << o.name;
  os << "\n";
  constexpr double kNan = std::numeric_limits<double>::quiet_NaN();
  for (const auto& p : r.points) {
    const auto& f = p.functionals;
    os << format_number(p.t) << ',' << format_number(p.state.rho().trace().real()) << ',' << format_number(f.mean_h)
       << ',' << format_number(p.drift.entropy) << ',' << format_number(purity(p.state)) << ','
       << format_number(f.theta_h.value_or(kNan)) << ',' << format_number(f.theta_s.value_or(kNan)) << ','
       << format_number(p.entropy_rate) << ',' << format_number(p.drift.min_eigenvalue);
    for (Eigen::Index k = 0; k < n; ++k) os << ',' << format_number(p.state.eigenvalues()(k));
    for (const auto& o : sc.observables) os << ',' << format_number(mean_value(p.state, o.op));
    os << "\n";
  }
}

json summary_json(const Scenario& sc, const RunResult& r) {
  const auto& d = r.diagnostics;
  const auto& first = r.points.front();
  const auto& last = r.points.back();
  json eig = json::array();
  for (Eigen::Index k = 0; k < last.state.dim(); ++k) eig.push_back(num(last.state.eigenvalues()(k)));
  json j;
  j["config_hash"] = sc.config_hash;
  j["model"] = sc.kind;
  j["termination"] = to_string(r.termination);
  j["degraded"] = r.degraded;
  j["warnings"] = r.warnings;
  j["rows"] = r.points.size();
  j["drift_bounds"] = {{"trace", kTraceBound},
                       {"energy", r.conserves_energy ? json(kEnergyBound * std::max(1.0, max_abs_entry(sc.hamiltonian)))
                                                              : json(nullptr)},
                       {"min_eigenvalue", kNegativeBound}};
  j["diagnostics"] = {{"accepted_steps", d.accepted_steps},
                      {"rejected_steps", d.rejected_steps},
                      {"max_trace_error", num(d.max_trace_error)},
                      {"max_energy_drift", num(d.max_energy_drift)},
                      {"min_eigenvalue", num(d.min_eigenvalue)},
                      {"max_kernel_eigenvalue", num(d.max_kernel_eigenvalue)},
                      {"max_entropy_decrease", num(d.max_entropy_decrease)},
                      {"final_equilibrium_measure", num(d.final_equilibrium_measure)}};
  j["initial"] = {{"t", num(first.t)},
                  {"energy", num(first.functionals.mean_h)},
                  {"entropy", num(first.drift.entropy)},
                  {"rank", first.state.rank()}};
  j["final"] = {{"t", num(last.t)},
                {"energy", num(last.functionals.mean_h)},
                {"entropy", num(last.drift.entropy)},
                {"purity", num(purity(last.state))},
                {"theta_h", opt_num(last.functionals.theta_h)},
                {"theta_s", opt_num(last.functionals.theta_s)},
                {"entropy_rate", num(last.entropy_rate)},
                {"rank", last.state.rank()},
                {"eigenvalues", eig}};
  return j;
}

json compare_json(const Scenario& sc, const RunResult& primary, const std::string& baseline_kind,
                  const RunResult& baseline) {
  json j;
  j["config_hash"] = sc.config_hash;
  j["primary"] = sc.kind;
  j["baseline"] = baseline_kind;
  const std::size_t rows = std::min(primary.points.size(), baseline.points.size());
  bool aligned = primary.points.size() == baseline.points.size();
  double ds = 0.0, drate = 0.0, dist = 0.0;
  long div_p = 0, div_b = 0;
  json curves = json::array();
  for (std::size_t i = 0; i < rows; ++i) {
    const auto& p = primary.points[i];
    const auto& b = baseline.points[i];
    if (p.t != b.t) aligned = false;
    ds = std::max(ds, std::abs(p.drift.entropy - b.drift.entropy));
    if (std::isfinite(p.entropy_rate) && std::isfinite(b.entropy_rate)) {
      drate = std::max(drate, std::abs(p.entropy_rate - b.entropy_rate));
    }
    if (!std::isfinite(p.entropy_rate)) ++div_p;
    if (!std::isfinite(b.entropy_rate)) ++div_b;
    dist = std::max(dist, trace_distance(p.state.rho(), b.state.rho()));
    curves.push_back({{"t", num(p.t)}, {"primary_entropy_rate", num(p.entropy_rate)}, {"baseline_entropy_rate", num(b.entropy_rate)},
                      {"primary_kernel_max", num(p.drift.kernel_max)}, {"baseline_kernel_max", num(b.drift.kernel_max)}});
  }
  j["aligned"] = aligned;
  j["max_abs_entropy_difference"] = num(ds);
  j["max_abs_entropy_rate_difference"] = num(drate);
  j["max_trace_distance"] = num(dist);
  j["divergent_entropy_rate_rows"] = {{"primary", div_p}, {"baseline", div_b}};
  const double kp = primary.diagnostics.max_kernel_eigenvalue;
  const double kb = baseline.diagnostics.max_kernel_eigenvalue;
  j["zero_eigenvalues"] = {{"initial_rank", sc.rho0.rank()},
                           {"dimension", sc.rho0.dim()},
                           {"primary_max_kernel_eigenvalue", num(kp)},
                           {"baseline_max_kernel_eigenvalue", num(kb)},
                           {"primary_final_rank", primary.points.back().state.rank()},
                           {"baseline_final_rank", baseline.points.back().state.rank()}};
  // One model keeps the initially empty levels empty while the other fills them.
  j["contrast"] = sc.rho0.is_singular() && ((kp <= kPinnedBound) != (kb <= kPinnedBound));
  j["curves"] = curves;
  return j;
}

}  // namespace sea
