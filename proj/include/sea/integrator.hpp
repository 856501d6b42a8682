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

// Adaptive Dormand-Prince 5(4) integration of the model equations, forward or
// backward in time, with drift diagnostics and an equilibrium event.
//
// SEA and phenomenological models are advanced on the square-root state
// (gammadot = gamma Y, rho = gamma^dagger gamma), which keeps every stage
// positive semidefinite with fixed rank. KSGL and composite models advance rho.

#pragma once

#include <functional>
#include <optional>
#include <stdexcept>
#include <string>
#include <vector>

#include "sea/ksgl.hpp"
#include "sea/pheno.hpp"
#include "sea/sea_composite.hpp"
#include "sea/sea_single.hpp"

namespace sea {

/// A right-hand side ready for integration.
struct Dynamics {
  enum class Representation { sqrt_state, density };

  std::string name;
  Representation representation = Representation::density;
  /// sqrt_state: Y(t, rho) with gammadot = gamma Y.
  std::function<Operator(double, const DensityState&)> generator;
  /// density: rhodot(t, rho).
  std::function<Operator(double, const DensityState&)> rhs;
  /// Hamiltonian at time t, for energy diagnostics.
  std::function<Operator(double)> hamiltonian;
  /// d<S>/dt at (t, rho); may be +inf.
  std::function<double(double, const DensityState&)> entropy_rate;
  /// Norm compared against the equilibrium threshold; empty disables the event.
  std::function<double(double, const DensityState&)> equilibrium_measure;
  /// Generator of the dissipative part; a sign reversal between accepted
  /// steps marks a crossing of the equilibrium set.
  std::function<Operator(double, const DensityState&)> dissipative_generator;
  Units units;
  /// Whether <H> is a constant of the motion (false for reservoir and KSGL models).
  bool conserves_energy = true;
};

/// Full SEA equation. `h_of_t`, when given, overrides h at each time.
Dynamics sea_dynamics(const Operator& h, const DissipationTime& tau, const Units& units = {},
                      std::function<Operator(double)> h_of_t = {});

/// -i[H,rho]/hbar only.
Dynamics hamiltonian_dynamics(const Operator& h, const Units& units = {});

/// rhodot = 0.
Dynamics zero_dynamics(Eigen::Index dim);

/// Hamiltonian term plus a phenomenological dissipator.
Dynamics pheno_dynamics(const Operator& h, const PhenoMode& mode, const Units& units = {});

Dynamics composite_dynamics(const Operator& h, Dims dims, double tau_a, double tau_b, const Units& units = {});

Dynamics ksgl_dynamics(const Operator& h, const std::vector<Operator>& vs, const Units& units = {});

struct IntegrationConfig {
  double t0 = 0.0;
  /// t1 < t0 integrates backward.
  double t1 = 1.0;
  double dt_init = 1e-3;
  double dt_min = 1e-12;
  double dt_max = 0.1;
  double rel_tol = 1e-9;
  double abs_tol = 1e-12;
  /// Every record_stride-th accepted step is stored; the endpoints always are.
  int record_stride = 1;
  /// When positive, points are recorded only at t0 and at `samples` uniform
  /// times up to t1, and steps are shortened to land on them.
  int samples = 0;
  bool stop_on_equilibrium = true;
  double equilibrium_threshold = 1e-9;
  /// A dissipative-generator reversal below this measure also ends the run.
  double crossing_threshold = 1e-6;
  long max_steps = 10'000'000;
  /// Called on every accepted step (including t0).
  std::function<void(double, const DensityState&)> on_step;

  void validate() const;
};

struct DriftMetrics {
  double trace_error = 0.0;
  double energy_drift = 0.0;
  /// Smallest eigenvalue before clamping.
  double min_eigenvalue = 0.0;
  double entropy = 0.0;
  /// Largest |eigenvalue| among the d - rank(rho0) smallest (kernel pinning).
  double kernel_max = 0.0;
};

struct TrajectoryPoint {
  double t = 0.0;
  DensityState state;
  StateFunctionals functionals;
  DriftMetrics drift;
  double entropy_rate = 0.0;
};

enum class Termination { t_end, equilibrium, step_underflow };

const char* to_string(Termination t);

struct TrajectoryDiagnostics {
  long accepted_steps = 0;
  long rejected_steps = 0;
  double max_trace_error = 0.0;
  double max_energy_drift = 0.0;
  double min_eigenvalue = 0.0;
  double max_kernel_eigenvalue = 0.0;
  /// Largest entropy decrease over one accepted step, in run direction (0 if none).
  double max_entropy_decrease = 0.0;
  /// Equilibrium measure at the last accepted step (NaN without a measure).
  double final_equilibrium_measure = 0.0;
};

struct Trajectory {
  std::vector<TrajectoryPoint> points;
  Termination termination = Termination::t_end;
  TrajectoryDiagnostics diagnostics;
  std::vector<std::string> warnings;

  const TrajectoryPoint& back() const { return points.back(); }
};

/// A trajectory snapshot failed validation.
class IntegrationError : public std::runtime_error {
 public:
  IntegrationError(const std::string& what, double t) : std::runtime_error(what), t_(t) {}
  double t() const { return t_; }

 private:
  double t_;
};

Trajectory integrate(const Dynamics& dyn, const DensityState& rho0, const IntegrationConfig& cfg);

/// Trace distance between rho0 and the state after integrating over [t0, t0+T]
/// and back. The equilibrium event is disabled for both legs.
double roundtrip_drift(const Dynamics& dyn, const DensityState& rho0, double T, IntegrationConfig cfg);

}  // namespace sea
