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

// Locally perceived steepest-entropy-ascent dynamics of a bipartite system AB.
// Index ordering follows kron(): |a b> has index a * d_B + b.

#pragma once

#include <optional>
#include <utility>

#include "sea/operators.hpp"
#include "sea/state.hpp"

namespace sea {

struct Dims {
  Eigen::Index a = 0;
  Eigen::Index b = 0;
  Eigen::Index total() const { return a * b; }
};

enum class Subsystem { A, B };

/// Partial trace of an operator on H_A (x) H_B over the given subsystem.
Operator partial_trace(const Operator& x, Dims dims, Subsystem over);

/// Reduced density operator, validated with `options`.
DensityState partial_trace(const DensityState& s, Dims dims, Subsystem over,
                           const StateOptions& options = {});

/// Bipartite state with cached reduced states.
class CompositeState {
 public:
  static CompositeState make(const DensityState& rho_ab, Dims dims, const StateOptions& options = {});

  const DensityState& state() const { return rho_ab_; }
  const DensityState& rho_a() const { return rho_a_; }
  const DensityState& rho_b() const { return rho_b_; }
  Dims dims() const { return dims_; }

 private:
  CompositeState(DensityState ab, DensityState a, DensityState b, Dims d)
      : rho_ab_(std::move(ab)), rho_a_(std::move(a)), rho_b_(std::move(b)), dims_(d) {}
  DensityState rho_ab_;
  DensityState rho_a_;
  DensityState rho_b_;
  Dims dims_;
};

/// Locally perceived deviations and covariances of one subsystem J.
struct LocalTerms {
  Operator delta_h;
  Operator delta_s;
  Operator delta_m;
  double cov_hh = 0.0;
  double cov_sh = 0.0;
  double cov_ss = 0.0;
  double cov_mm = 0.0;
  std::optional<double> theta_h;
  /// False when the local energy gradient is dependent on sqrt(rho_J); then delta_m = delta_s.
  bool energy_constraint_active = false;
};

struct LocalPerception {
  LocalTerms a;
  LocalTerms b;
};

/// (X)^A = Tr_B[(I_A (x) rho_B) X]; (Delta X)^A = (X)^A - Tr(rho_A (X)^A) I_A, and
/// symmetrically for B. cov_J(X,Y) = 1/2 Tr(rho_J {(Delta X)^J, (Delta Y)^J}).
LocalPerception local_perceptions(const CompositeState& c, const Operator& h, const Units& units = {});

struct CompositeRhsResult {
  Operator drho_dt;
  /// {(Delta M)^A, rho_A} (x) rho_B / (2 k_B tau_A).
  Operator dissipator_a;
  Operator dissipator_b;
  /// cov_A(M,M)/(k_B tau_A) + cov_B(M,M)/(k_B tau_B).
  double entropy_rate = 0.0;
  double entropy_rate_a = 0.0;
  double entropy_rate_b = 0.0;
  LocalPerception perception;
};

CompositeRhsResult composite_rhs(const CompositeState& c, const Operator& h, double tau_a, double tau_b,
                                 const Units& units = {});

/// H_A (x) I + I (x) H_B.
Operator noninteracting_hamiltonian(const Operator& h_a, const Operator& h_b);

/// Splits a noninteracting H into local parts (H_B carries no trace); throws
/// InvalidInput when H has an interaction component beyond `tol`.
std::pair<Operator, Operator> split_noninteracting(const Operator& h, Dims dims, double tol = 1e-10);

struct SeparabilityReport {
  /// max |Tr_B rhodot(H_A, H_B) - Tr_B rhodot(H_A, H_B_alt)|.
  double reduced_rate_difference_a = 0.0;
  bool product_state = false;
  /// For product states, max |d/dt (rho - rho_A (x) rho_B)| at first order.
  std::optional<double> product_residual_rate;
  /// max |rho - rho_A (x) rho_B|.
  double correlation_norm = 0.0;
};

SeparabilityReport separability_diagnostic(const CompositeState& c, const Operator& h_a, const Operator& h_b,
                                           const Operator& h_b_alt, double tau_a, double tau_b,
                                           const Units& units = {});

/// Same, with the total Hamiltonian given; interacting Hamiltonians are rejected.
SeparabilityReport separability_diagnostic(const CompositeState& c, const Operator& h_ab, const Operator& h_b_alt,
                                           double tau_a, double tau_b, const Units& units = {});

}  // namespace sea
