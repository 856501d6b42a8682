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

// Affinity expansion of the SEA dissipator in a quorum of observables, the
// generalized conductivity matrix and the equivalent entropy-production forms.

#pragma once

#include <optional>
#include <vector>

#include "sea/sea_single.hpp"

namespace sea {

/// Traceless hermitian X_1..X_{d^2-1} with Tr(X_i X_j) = 2 delta_ij.
struct QuorumBasis {
  Eigen::Index dim = 0;
  std::vector<Operator> ops;
};

/// Generalized Gell-Mann matrices: symmetric, antisymmetric, then diagonal.
QuorumBasis quorum_basis(Eigen::Index dim);

struct Affinities {
  double f0 = 0.0;
  RealVector f;
  /// max |f0 I + sum f_j X_j + ln(rho + P_Ker)|.
  double residual = 0.0;
};

/// -ln(rho + P_Ker rho) = f0 I + sum_j f_j X_j.
Affinities affinities(const DensityState& s, const QuorumBasis& basis);

/// L_ij = (1/tau)[cov(X_i,X_j) - cov(X_i,H) cov(H,X_j)/cov(H,H)]. The
/// H-subtraction is dropped when the energy constraint is inactive.
RealMatrix conductivity_matrix(const DensityState& s, const Operator& h, const QuorumBasis& basis, double tau,
                               const Units& units = {});

struct OnsagerReport {
  double f0 = 0.0;
  RealVector f;
  RealMatrix l;
  /// Dissipative rates <Xdot_i>_D = gammadot_D . X_i'.
  RealVector rates;
  /// sum_j L_ij f_j.
  RealVector rates_from_l;
  double tau = 0.0;
  double entropy_rate_direct = 0.0;
  double entropy_rate_quadratic = 0.0;
  double entropy_rate_bilinear = 0.0;
  double psd_min_eigenvalue = 0.0;
  /// L^-1; empty when L is numerically singular (always so on a full quorum,
  /// where H itself lies in the span).
  std::optional<RealMatrix> resistance;
  bool resistance_singular = true;
};

OnsagerReport onsager_report(const DensityState& s, const Operator& h, const QuorumBasis& basis,
                             const DissipationTime& tau, const Units& units = {});

}  // namespace sea
