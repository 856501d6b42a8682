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

// Linear KSGL (Lindblad) and Pauli master equations, kept as a baseline for
// contrast with the nonlinear SEA dynamics.

#pragma once

#include <vector>

#include "sea/operators.hpp"
#include "sea/state.hpp"

namespace sea {

/// rhodot = -i[H,rho]/hbar + 1/2 sum_j (2 V_j rho V_j^dagger - {V_j^dagger V_j, rho}).
Operator ksgl_rhs(const DensityState& s, const Operator& h, const std::vector<Operator>& vs,
                  const Units& units = {});

/// Same equation on a raw hermitian matrix (no state validation).
Operator ksgl_rhs(const Operator& rho, const Operator& h, const std::vector<Operator>& vs,
                  const Units& units = {});

/// pdot_n = sum_r w[n][r] p_r - p_n sum_r w[r][n], with w[n][r] the rate r -> n.
RealVector pauli_rhs(const RealVector& p, const RealMatrix& w);

/// V = sqrt(w[n][r]) |e_n><e_r| for every positive rate, |e_n> the H eigenvectors
/// in ascending energy order. The resulting KSGL populations obey pauli_rhs.
std::vector<Operator> transition_operators(const Operator& h, const RealMatrix& w);

struct KsglEntropyRate {
  /// +inf when divergent.
  double rate = 0.0;
  /// A populated level feeds an empty one: the entropy rate is infinite.
  bool divergent = false;
};

/// k_B sum_j sum_{n,r} |(V_j)_nr|^2 rho_r (ln rho_r - ln rho_n) in the rho eigenbasis.
KsglEntropyRate ksgl_entropy_rate(const DensityState& s, const std::vector<Operator>& vs, const Units& units = {});

}  // namespace sea
