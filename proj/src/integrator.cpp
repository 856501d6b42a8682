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

#include "sea/integrator.hpp"

#include <algorithm>
#include <array>
#include <cmath>
#include <limits>
#include <utility>

namespace sea {

namespace {

constexpr double kInf = std::numeric_limits<double>::infinity();

// Dormand-Prince 5(4) tableau.
constexpr std::array<double, 7> kC{0.0, 1.0 / 5, 3.0 / 10, 4.0 / 5, 8.0 / 9, 1.0, 1.0};
constexpr double kA[7][6] = {
    {},
    {1.0 / 5},
    {3.0 / 40, 9.0 / 40},
    {44.0 / 45, -56.0 / 15, 32.0 / 9},
    {19372.0 / 6561, -25360.0 / 2187, 64448.0 / 6561, -212.0 / 729},
    {9017.0 / 3168, -355.0 / 33, 46732.0 / 5247, 49.0 / 176, -5103.0 / 18656},
    {35.0 / 384, 0.0, 500.0 / 1113, 125.0 / 192, -2187.0 / 6784, 11.0 / 84},
};
constexpr std::array<double, 7> kE{71.0 / 57600,      0.0,           -71.0 / 16695, 71.0 / 1920,
                                   -17253.0 / 339200, 22.0 / 525,    -1.0 / 40};

Operator unitary_generator(const DensityState& s, const Operator& h, const Units& units) {
  const double mh = mean_value(s, h);
  return Complex(0.0, 1.0 / units.hbar) * (h - mh * identity(h.rows()));
}

DensityState stage_state(const Operator& y, bool sqrt_rep) {
  if (sqrt_rep) return DensityState::from_sqrt(y, StateOptions::lenient());
  return DensityState::make(hermitian_part(y), StateOptions::lenient());
}

StateOptions snapshot_options() {
  StateOptions o;
  o.negative_tolerance = 1e-9;
  o.trace_tolerance = kInf;
  o.renormalize = false;
  return o;
}

double entropy_of_spectrum(const RealVector& p, const Units& units) {
  double s = 0.0;
  for (Eigen::Index k = 0; k < p.size(); ++k) {
    if (p(k) > 0.0) s -= p(k) * std::log(p(k));
  }
  return units.k_B * s;
}

double error_norm(const Operator& err, const Operator& y0, const Operator& y1, double rel, double abs) {
  double acc = 0.0;
  for (Eigen::Index j = 0; j < err.cols(); ++j) {
    for (Eigen::Index i = 0; i < err.rows(); ++i) {
      const double sc = abs + rel * std::max(std::abs(y0(i, j)), std::abs(y1(i, j)));
      const double e = std::abs(err(i, j)) / sc;
      acc += e * e;
    }
  }
  return std::sqrt(acc / static_cast<double>(err.size()));
}

}  // namespace

Dynamics sea_dynamics(const Operator& h, const DissipationTime& tau, const Units& units,
                      std::function<Operator(double)> h_of_t) {
  require_hermitian(h, "Hamiltonian");
  Dynamics d;
  d.name = "sea";
  d.units = units;
  d.representation = Dynamics::Representation::sqrt_state;
  if (h_of_t) {
    d.hamiltonian = std::move(h_of_t);
  } else {
    d.hamiltonian = [h](double) { return h; };
  }
  auto ham = d.hamiltonian;
  d.generator = [ham, tau, units](double t, const DensityState& s) -> Operator {
    const Operator ht = ham(t);
    const SeaGeometry geo = sea_geometry(s, ht, units);
    return unitary_generator(s, ht, units) + sea_generator(geo, s, ht, tau, units);
  };
  d.entropy_rate = [ham, tau, units](double t, const DensityState& s) {
    return sea_rhs(s, ham(t), tau, units).entropy_rate;
  };
  d.equilibrium_measure = [ham, units](double t, const DensityState& s) {
    return sea_geometry(s, ham(t), units).entropy_gradient_perp_norm / units.k_B;
  };
  d.dissipative_generator = [ham, tau, units](double t, const DensityState& s) -> Operator {
    const Operator ht = ham(t);
    return sea_generator(sea_geometry(s, ht, units), s, ht, tau, units);
  };
  return d;
}

Dynamics hamiltonian_dynamics(const Operator& h, const Units& units) {
  require_hermitian(h, "Hamiltonian");
  Dynamics d;
  d.name = "hamiltonian";
  d.units = units;
  d.representation = Dynamics::Representation::sqrt_state;
  d.hamiltonian = [h](double) { return h; };
  d.generator = [h, units](double, const DensityState& s) { return unitary_generator(s, h, units); };
  d.entropy_rate = [](double, const DensityState&) { return 0.0; };
  return d;
}

Dynamics zero_dynamics(Eigen::Index dim) {
  Dynamics d;
  d.name = "zero";
  d.representation = Dynamics::Representation::density;
  d.hamiltonian = [dim](double) { return Operator(Operator::Zero(dim, dim)); };
  d.rhs = [dim](double, const DensityState&) { return Operator(Operator::Zero(dim, dim)); };
  d.entropy_rate = [](double, const DensityState&) { return 0.0; };
  return d;
}

Dynamics pheno_dynamics(const Operator& h, const PhenoMode& mode, const Units& units) {
  require_hermitian(h, "Hamiltonian");
  Dynamics d;
  d.name = to_string(mode.kind);
  d.units = units;
  d.conserves_energy = false;
  d.representation = Dynamics::Representation::sqrt_state;
  d.hamiltonian = [h](double) { return h; };
  d.generator = [h, mode, units](double, const DensityState& s) -> Operator {
    return unitary_generator(s, h, units) + pheno_rhs(s, h, mode, units).generator;
  };
  d.entropy_rate = [h, mode, units](double, const DensityState& s) { return pheno_rhs(s, h, mode, units).ds_dt; };
  d.equilibrium_measure = [h, mode, units](double, const DensityState& s) {
    const PhenoResult r = pheno_rhs(s, h, mode, units);
    return r.fixed_point ? 0.0 : r.relative_gradient;
  };
  d.dissipative_generator = [h, mode, units](double, const DensityState& s) -> Operator {
    return pheno_rhs(s, h, mode, units).generator;
  };
  return d;
}

Dynamics composite_dynamics(const Operator& h, Dims dims, double tau_a, double tau_b, const Units& units) {
  require_hermitian(h, "Hamiltonian");
  if (h.rows() != dims.total()) throw InvalidInput("composite Hamiltonian does not match the dimensions");
  Dynamics d;
  d.name = "sea_composite";
  d.units = units;
  d.representation = Dynamics::Representation::density;
  d.hamiltonian = [h](double) { return h; };
  d.rhs = [h, dims, tau_a, tau_b, units](double, const DensityState& s) {
    return composite_rhs(CompositeState::make(s, dims, StateOptions::lenient()), h, tau_a, tau_b, units).drho_dt;
  };
  d.entropy_rate = [h, dims, tau_a, tau_b, units](double, const DensityState& s) {
    return composite_rhs(CompositeState::make(s, dims, StateOptions::lenient()), h, tau_a, tau_b, units).entropy_rate;
  };
  d.equilibrium_measure = [h, dims, units](double, const DensityState& s) {
    const LocalPerception p = local_perceptions(CompositeState::make(s, dims, StateOptions::lenient()), h, units);
    return 2.0 * (std::sqrt(p.a.cov_mm) + std::sqrt(p.b.cov_mm)) / units.k_B;
  };
  return d;
}

Dynamics ksgl_dynamics(const Operator& h, const std::vector<Operator>& vs, const Units& units) {
  require_hermitian(h, "Hamiltonian");
  for (const Operator& v : vs) {
    if (v.rows() != h.rows() || v.cols() != h.cols()) throw InvalidInput("KSGL operator dimension mismatch");
  }
  Dynamics d;
  d.name = "ksgl";
  d.units = units;
  d.conserves_energy = false;
  d.representation = Dynamics::Representation::density;
  d.hamiltonian = [h](double) { return h; };
  d.rhs = [h, vs, units](double, const DensityState& s) { return ksgl_rhs(s.rho(), h, vs, units); };
  d.entropy_rate = [vs, units](double, const DensityState& s) { return ksgl_entropy_rate(s, vs, units).rate; };
  return d;
}

void IntegrationConfig::validate() const {
  if (!std::isfinite(t0) || !std::isfinite(t1)) throw InvalidInput("integration: t0 and t1 must be finite");
  if (!(rel_tol > 0.0) || !(abs_tol > 0.0)) throw InvalidInput("integration: tolerances must be positive");
  if (!(dt_min > 0.0) || !(dt_min <= dt_init) || !(dt_init <= dt_max)) {
    throw InvalidInput("integration: require 0 < dt_min <= dt_init <= dt_max");
  }
  if (record_stride < 1) throw InvalidInput("integration: record_stride must be at least 1");
  if (samples < 0) throw InvalidInput("integration: samples must be nonnegative");
  if (stop_on_equilibrium && (!(equilibrium_threshold > 0.0) || !(crossing_threshold >= 0.0))) {
    throw InvalidInput("integration: equilibrium thresholds must be positive");
  }
  if (max_steps < 1) throw InvalidInput("integration: max_steps must be positive");
}

const char* to_string(Termination t) {
  switch (t) {
    case Termination::t_end:
      return "t_end";
    case Termination::equilibrium:
      return "equilibrium";
    case Termination::step_underflow:
      return "step_underflow";
  }
  return "unknown";
}

Trajectory integrate(const Dynamics& dyn, const DensityState& rho0, const IntegrationConfig& cfg) {
  cfg.validate();
  const bool sqrt_rep = dyn.representation == Dynamics::Representation::sqrt_state;
  if (sqrt_rep ? !dyn.generator : !dyn.rhs) throw InvalidInput("integrate: dynamics has no right-hand side");
  const Eigen::Index n = rho0.dim();
  if (dyn.hamiltonian && dyn.hamiltonian(cfg.t0).rows() != n) {
    throw InvalidInput("integrate: Hamiltonian dimension does not match the state");
  }

  const Units& units = dyn.units;
  const double dir = cfg.t1 >= cfg.t0 ? 1.0 : -1.0;
  const Eigen::Index rank0 = rho0.rank();
  const double energy0 = dyn.hamiltonian ? mean_value(rho0, dyn.hamiltonian(cfg.t0)) : 0.0;

  Trajectory traj;
  if (rank0 < n && sqrt_rep && dyn.equilibrium_measure) {
    traj.warnings.push_back("initial state is singular; its partially canonical limit is an unstable equilibrium");
  }

  // y is gamma (sqrt_state) or rho (density).
  Operator y = sqrt_rep ? sqrt_state(rho0).gamma : rho0.rho();
  auto deriv = [&](double t, const Operator& yy) -> Operator {
    const DensityState s = stage_state(yy, sqrt_rep);
    if (sqrt_rep) return yy * dyn.generator(t, s);
    return hermitian_part(dyn.rhs(t, s));
  };

  auto snapshot = [&](double t, const Operator& yy) -> DensityState {
    try {
      if (sqrt_rep) return DensityState::from_sqrt(yy, snapshot_options());
      return DensityState::make(hermitian_part(yy), snapshot_options());
    } catch (const InvalidState& e) {
      throw IntegrationError(std::string("state validation failed at t = ") + std::to_string(t) + ": " + e.what(), t);
    }
  };

  auto metrics = [&](double t, const DensityState& s) {
    DriftMetrics m;
    m.trace_error = std::abs(s.eigenvalues().sum() - 1.0);
    m.energy_drift = dyn.hamiltonian ? std::abs(mean_value(s, dyn.hamiltonian(t)) - energy0) : 0.0;
    m.min_eigenvalue = s.raw_min_eigenvalue();
    m.entropy = entropy_of_spectrum(s.eigenvalues(), units);
    double km = m.min_eigenvalue < 0.0 ? -m.min_eigenvalue : 0.0;
    for (Eigen::Index k = rank0; k < n; ++k) km = std::max(km, std::abs(s.eigenvalues()(k)));
    m.kernel_max = km;
    return m;
  };

  auto record = [&](double t, const DensityState& s, const DriftMetrics& m) {
    TrajectoryPoint p{t, s, {}, m, 0.0};
    if (dyn.hamiltonian) p.functionals = functionals(s, dyn.hamiltonian(t), units);
    if (dyn.entropy_rate) p.entropy_rate = dyn.entropy_rate(t, s);
    traj.points.push_back(std::move(p));
  };

  auto& diag = traj.diagnostics;
  auto account = [&](const DriftMetrics& m) {
    diag.max_trace_error = std::max(diag.max_trace_error, m.trace_error);
    diag.max_energy_drift = std::max(diag.max_energy_drift, m.energy_drift);
    diag.min_eigenvalue = std::min(diag.min_eigenvalue, m.min_eigenvalue);
    diag.max_kernel_eigenvalue = std::max(diag.max_kernel_eigenvalue, m.kernel_max);
  };

  // Under a unit-norm dissipator the flow reaches equilibrium in finite time
  // and the discrete solution then slides across it, or, from a singular
  // state, drifts off an unstable partially canonical point. Near equilibrium
  // either a turn of the dissipative generator by 90 degrees or more or a
  // rise of the measure between accepted steps ends the run.
  std::optional<Operator> last_generator;
  double last_measure = kInf;
  auto at_equilibrium = [&](double t, const DensityState& s) {
    if (!dyn.equilibrium_measure) {
      diag.final_equilibrium_measure = std::numeric_limits<double>::quiet_NaN();
      return false;
    }
    const double measure = dyn.equilibrium_measure(t, s);
    diag.final_equilibrium_measure = measure;
    if (!cfg.stop_on_equilibrium) return false;
    if (measure < cfg.equilibrium_threshold) return true;
    if (!dyn.dissipative_generator || !(measure < cfg.crossing_threshold)) {
      last_generator.reset();
      last_measure = kInf;
      return false;
    }
    Operator z = dyn.dissipative_generator(t, s);
    const bool turned = last_generator && real_inner(*last_generator, z) <= 0.0;
    const bool rising = measure > last_measure;
    last_generator = std::move(z);
    last_measure = measure;
    return turned || rising;
  };

  double t = cfg.t0;
  DensityState s = snapshot(t, y);
  DriftMetrics m = metrics(t, s);
  diag.min_eigenvalue = m.min_eigenvalue;
  account(m);
  record(t, s, m);
  if (cfg.on_step) cfg.on_step(t, s);
  if (at_equilibrium(t, s)) {
    traj.termination = Termination::equilibrium;
    return traj;
  }
  if (cfg.t1 == cfg.t0) return traj;

  double h = cfg.dt_init;
  std::array<Operator, 7> k;
  k[0] = deriv(t, y);
  bool recorded_last = true;
  long steps = 0;
  const double span = std::abs(cfg.t1 - cfg.t0);
  traj.termination = Termination::t_end;
  const int n_targets = cfg.samples > 0 ? cfg.samples : 1;
  int target_index = 1;
  auto target_time = [&](int i) {
    return i >= n_targets ? cfg.t1 : cfg.t0 + (cfg.t1 - cfg.t0) * static_cast<double>(i) / n_targets;
  };

  while (true) {
    const double remaining = std::abs(cfg.t1 - t);
    if (remaining <= 1e-14 * std::max(1.0, span)) break;
    if (++steps > cfg.max_steps) throw IntegrationError("integration: max_steps exceeded", t);
    const double target = target_time(target_index);
    const double to_target = std::abs(target - t);
    const bool hit = h >= to_target;
    const bool last = hit && target_index >= n_targets;
    const double hs = hit ? to_target : h;
    const double dt = dir * hs;

    Operator y_new;
    for (int st = 1; st < 7; ++st) {
      Operator yi = y;
      for (int j = 0; j < st; ++j) {
        if (kA[st][j] != 0.0) yi += (dt * kA[st][j]) * k[static_cast<std::size_t>(j)];
      }
      k[static_cast<std::size_t>(st)] = deriv(t + kC[static_cast<std::size_t>(st)] * dt, yi);
      // The last stage is evaluated at the 5th-order solution (FSAL).
      if (st == 6) y_new = std::move(yi);
    }
    Operator err = Operator::Zero(y.rows(), y.cols());
    for (std::size_t j = 0; j < 7; ++j) {
      if (kE[j] != 0.0) err += (dt * kE[j]) * k[j];
    }
    const double en = error_norm(err, y, y_new, cfg.rel_tol, cfg.abs_tol);

    if (!(en <= 1.0)) {
      ++diag.rejected_steps;
      const double fac = std::isfinite(en) ? std::max(0.2, 0.9 * std::pow(en, -0.2)) : 0.2;
      h = hs * fac;
      if (h < cfg.dt_min) {
        traj.termination = Termination::step_underflow;
        if (!recorded_last) record(t, s, m);
        traj.warnings.push_back("step size fell below dt_min at t = " + std::to_string(t));
        return traj;
      }
      continue;
    }

    ++diag.accepted_steps;
    y = std::move(y_new);
    t = hit ? target : t + dt;
    if (hit) ++target_index;
    k[0] = k[6];
    const double entropy_before = m.entropy;
    s = snapshot(t, y);
    m = metrics(t, s);
    account(m);
    diag.max_entropy_decrease = std::max(diag.max_entropy_decrease, entropy_before - m.entropy);
    if (cfg.on_step) cfg.on_step(t, s);

    const bool eq = at_equilibrium(t, s);
    recorded_last = false;
    const bool stride_due = cfg.samples == 0 && diag.accepted_steps % cfg.record_stride == 0;
    if (last || eq || stride_due || (hit && cfg.samples > 0)) {
      record(t, s, m);
      recorded_last = true;
    }
    if (eq) {
      traj.termination = Termination::equilibrium;
      return traj;
    }
    if (last) break;

    const double fac = en > 0.0 ? std::min(5.0, std::max(0.2, 0.9 * std::pow(en, -0.2))) : 5.0;
    double next = hs * fac;
    // A step shortened to land on a sample time does not shrink the next one.
    if (hit && fac >= 1.0) next = std::max(next, h);
    h = std::min(cfg.dt_max, std::max(cfg.dt_min, next));
  }
  if (!recorded_last) record(t, s, m);
  return traj;
}

double roundtrip_drift(const Dynamics& dyn, const DensityState& rho0, double T, IntegrationConfig cfg) {
  if (!(T >= 0.0) || !std::isfinite(T)) throw InvalidInput("roundtrip_drift: T must be finite and nonnegative");
  if (T == 0.0) return 0.0;
  cfg.stop_on_equilibrium = false;
  cfg.record_stride = std::numeric_limits<int>::max();
  cfg.samples = 0;
  const double t0 = cfg.t0;
  cfg.t1 = t0 + T;
  const Trajectory fwd = integrate(dyn, rho0, cfg);
  if (fwd.termination != Termination::t_end) throw IntegrationError("roundtrip_drift: forward leg did not finish", fwd.back().t);
  IntegrationConfig back = cfg;
  back.t0 = t0 + T;
  back.t1 = t0;
  const Trajectory bwd = integrate(dyn, fwd.back().state, back);
  if (bwd.termination != Termination::t_end) throw IntegrationError("roundtrip_drift: backward leg did not finish", bwd.back().t);
  return trace_distance(rho0.rho(), bwd.back().state.rho());
}

}  // namespace sea
