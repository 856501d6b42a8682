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

// Steepest-entropy-ascent dynamics of a single isolated system.
//
// The dissipative drift is the component of the entropy gradient S' = 2 gamma S
// orthogonal to the normalization and energy gradients, scaled to fixed norm
// 1/(2 tau_D):
//
//   gammadot_D = S'_perp / (2 tau_D |S'_perp|),   S'_perp = 2 gamma DeltaM,
//   rhodot     = -i[H,rho]/hbar + {DeltaM, rho} / (2 tau_D sqrt(cov(M,M))),
//
// with DeltaM = DeltaS - (cov(S,H)/cov(H,H)) DeltaH. Both gammadot_D and the
// density-operator dissipator are right/anti-commutator actions of the same
// hermitian generator Z = DeltaM / (2 tau_D sqrt(cov(M,M))):
// gammadot_D = gamma Z and rhodot_D = {Z, rho}.

#pragma once

#include <cstdint>
#include <functional>
#include <optional>
#include <vector>

#include "sea/operators.hpp"
#include "sea/state.hpp"

namespace sea {

/// Below this |S'_perp| (in units of k_B) the unit-norm drift is declared zero.
inline constexpr double kTolNondissipative = 1e-11;

/// The dissipation time scale tau_D, either a constant or a functional of the
/// state. constant_tau() fixes the rate scale tau = tau_D sqrt(cov(M,M))/k_B
/// instead, which makes the dissipator smooth at equilibrium.
class DissipationTime {
 public:
  using Functional = std::function<double(const DensityState&, const Operator&)>;
  enum class Kind { constant_tau_d, constant_tau, functional };

  DissipationTime(double tau_d);  // NOLINT(google-explicit-constructor)

  static DissipationTime constant(double tau_d) { return DissipationTime(tau_d); }
  static DissipationTime constant_tau(double tau);
  static DissipationTime functional(Functional f);

  Kind kind() const { return kind_; }
  double value() const { return value_; }

  /// tau_D at the given state; `cov_mm` is cov(M,M) there.
  double tau_d(const DensityState& s, const Operator& h, double cov_mm, const Units& units) const;

 private:
  DissipationTime() = default;
  Kind kind_ = Kind::constant_tau_d;
  double value_ = 1.0;
  Functional functional_;
};

/// Quantities of the SEA construction at one state.
struct SeaGeometry {
  StateFunctionals functionals;
  Operator gamma;
  Operator entropy_op;
  /// DeltaM in Gram form; equals S - H/theta_H - <.> whenever theta_H exists.
  Operator massieu_deviation;
  /// cov(S,H)/cov(H,H), or 0 when the energy gradient is dependent on gamma.
  double energy_coefficient = 0.0;
  bool energy_constraint_active = false;
  /// cov(M,M) = Tr(rho DeltaM^2) = |S'_perp|^2 / 4.
  double cov_mm = 0.0;
  /// S'_perp = 2 gamma DeltaM.
  Operator entropy_gradient_perp;
  double entropy_gradient_perp_norm = 0.0;
};

SeaGeometry sea_geometry(const DensityState& s, const Operator& h, const Units& units = {});

/// Hermitian Z with gammadot_D = gamma Z and rhodot_D = {Z, rho}.
Operator sea_generator(const SeaGeometry& geo, const DensityState& s, const Operator& h,
                       const DissipationTime& tau, const Units& units = {});

/// gammadot_H = i gamma DeltaH / hbar.
Operator hamiltonian_drift(const SqrtState& g, const Operator& h, const Units& units = {});

/// gammadot_D; zero at nondissipative states.
Operator sea_drift(const SqrtState& g, const Operator& h, const DissipationTime& tau,
                   const Units& units = {});

struct SeaRhsResult {
  Operator drho_dt;
  Operator dgamma_h;
  Operator dgamma_d;
  /// Generator Z of the dissipative part, rhodot_D = {Z, rho}.
  Operator dissipative_generator;
  /// d<S>/dt = S'.gammadot_D.
  double entropy_rate = 0.0;
  /// tau = tau_D sqrt(cov(M,M)) / k_B.
  double tau = 0.0;
  /// M = S - H/theta_H; empty when theta_H is undefined.
  std::optional<Operator> massieu_operator;
};

SeaRhsResult sea_rhs(const DensityState& s, const Operator& h, const DissipationTime& tau,
                     const Units& units = {});

double entropy_production_rate(const DensityState& s, const Operator& h, const DissipationTime& tau,
                               const Units& units = {});

/// Every closed form of the entropy production rate, for cross-checking.
struct EntropyRateForms {
  double gradient_inner = 0.0;   // S' . gammadot_D
  double gram_norm = 0.0;        // S'_perp . S'_perp / (4 k_B tau)
  double speed = 0.0;            // 4 k_B tau gammadot_D . gammadot_D
  double massieu_cov = 0.0;      // cov(M,M) / (k_B tau)
  std::optional<double> temperature_form;  // (cov(S,S) - cov(H,H)/theta_H^2) / (k_B tau)
  double sqrt_cov = 0.0;         // sqrt(cov(M,M)) / tau_D
};

EntropyRateForms entropy_rate_forms(const DensityState& s, const Operator& h, const DissipationTime& tau,
                                    const Units& units = {});

struct MasterCoefficients {
  double alpha = 0.0;
  double beta = 0.0;
};

/// alpha and beta of the diagonal master equation (k_B = 1 form).
MasterCoefficients master_coefficients(const RealVector& p, const RealVector& e);

/// pdot_n = p_n (Delta s_n - Delta e_n / theta_H) / (k_B tau) for a state commuting with H.
RealVector master_rhs_diagonal(const RealVector& p, const RealVector& e, double tau,
                               const Units& units = {});

/// Same rates from pdot_n = -(1/tau)[p_n ln p_n + alpha p_n + beta e_n p_n].
RealVector master_rhs_alpha_beta(const RealVector& p, const RealVector& e, double tau);

struct MasterFullResult {
  /// d rho_nm / dt in the H eigenbasis.
  Operator rates;
  /// Columns are the H eigenvectors |e_n>.
  Operator h_basis;
  RealVector energies;
};

/// Matrix-element form of the SEA equation in an H eigenbasis, evaluated
/// through the rho/H overlap matrix u_jk = <e_j|eta_k>.
MasterFullResult master_rhs_full(const DensityState& s, const Operator& h, const DissipationTime& tau,
                                 const Units& units = {});

struct NondissipativeReport {
  bool nondissipative = false;
  std::optional<Operator> support;
  std::optional<double> temperature;
  /// [B,H] != 0: the state moves unitarily on a limit cycle.
  bool limit_cycle = false;
};

NondissipativeReport nondissipative_check(const DensityState& s, const Operator& h, double tol = 1e-9,
                                          const Units& units = {});

struct VariationalReport {
  bool passed = false;
  double drift_rate = 0.0;
  double max_sample_rate = 0.0;
  int samples = 0;
};

/// Samples admissible directions (orthogonal to gamma and H', same norm as
/// gammadot_D) and verifies none yields a larger entropy rate.
VariationalReport variational_optimality_check(const SqrtState& g, const Operator& h,
                                               const DissipationTime& tau, int n_samples,
                                               std::uint64_t seed, const Units& units = {});

struct CharacteristicTimes {
  std::optional<double> tau_h;
  std::optional<double> tau;
  std::optional<double> tau_s;
  double entropy_rate = 0.0;
  double tau_d = 0.0;
  /// d<S>/dt <= sqrt(cov(S,S))/tau_D within 1e-10.
  bool rate_bound_holds = true;
  /// tau_S >= tau_D within 1e-10 (vacuous when tau_S is undefined).
  bool uncertainty_holds = true;
};

CharacteristicTimes characteristic_times(const DensityState& s, const Operator& h, const DissipationTime& tau,
                                         const Units& units = {});

}  // namespace sea
