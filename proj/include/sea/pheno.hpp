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

// Phenomenological dissipators built from nonequilibrium Massieu and Helmholtz
// operators, and the availability functionals they relax.
//
//   massieu:    rhodot_D = +{DeltaG, rho} / (2 tau_G sqrt(cov(G,G))),  G = S - H/theta
//   helmholtz:  rhodot_D = -{DeltaF, rho} / (2 tau_F sqrt(cov(F,F))),  F = H - theta S
//
// with theta = theta_S (isoentropic descent), T_R (reservoir) or theta_Q (heat
// interaction at T_Q). Only the dissipative term is returned.

#pragma once

#include <optional>

#include "sea/operators.hpp"
#include "sea/state.hpp"

namespace sea {

struct PhenoMode {
  enum class Kind { massieu_const_theta, helmholtz_theta_s, helmholtz_reservoir, heat_interaction };
  Kind kind = Kind::massieu_const_theta;
  /// theta for massieu (may be +-inf), T_R for reservoir, T_Q for heat; unused for theta_S.
  double theta = 0.0;
  /// tau_G or tau_F.
  double tau = 1.0;

  static PhenoMode massieu(double theta, double tau_g);
  static PhenoMode helmholtz_theta_s(double tau_f);
  static PhenoMode helmholtz_reservoir(double t_r, double tau_f);
  static PhenoMode heat_interaction(double t_q, double tau_f);
};

const char* to_string(PhenoMode::Kind kind);

struct PhenoResult {
  /// Dissipative rhodot only.
  Operator drho_dt;
  /// Hermitian Z with drho_dt = {Z, rho}.
  Operator generator;
  /// theta used to build G or F; empty at a fixed point where it is undefined.
  std::optional<double> theta;
  /// cov(G,G) or cov(F,F).
  double cov_potential = 0.0;
  /// 2 sqrt(cov_potential) over the mode scale (k_B, or max(k_B |theta|, max |H_ij|)).
  double relative_gradient = 0.0;
  /// Rates of the means of H and S.
  double dh_dt = 0.0;
  double ds_dt = 0.0;
  /// The potential gradient vanished or theta is undefined; drho_dt = 0.
  bool fixed_point = false;
  /// Heat mode with theta_S within 1e-10 |T_Q| of T_Q.
  bool theta_q_singular = false;
};

PhenoResult pheno_rhs(const DensityState& s, const Operator& h, const PhenoMode& mode, const Units& units = {});

/// theta_Q = (cov_HH - T_Q cov_SH) / (cov_SH - T_Q cov_SS); empty when singular.
std::optional<double> heat_theta(const StateFunctionals& f, double t_q);

struct PredictedRates {
  double dh_dt = 0.0;
  double ds_dt = 0.0;
  bool fixed_point = false;
};

/// Closed-form energy and entropy rates of the selected mode.
PredictedRates predicted_rates(const DensityState& s, const Operator& h, const PhenoMode& mode,
                               const Units& units = {});

/// <H> - <H>_s, with <H>_s the energy of the canonical state of equal entropy.
double adiabatic_availability(const DensityState& s, const Operator& h, const Units& units = {});

/// <H> - <H>_R - T_R (<S> - <S>_R) with respect to the canonical state at T_R.
double available_energy(const DensityState& s, const Operator& h, double t_r, const Units& units = {});

}  // namespace sea
