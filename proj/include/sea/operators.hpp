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

#pragma once

#include <complex>
#include <cstddef>
#include <span>
#include <stdexcept>
#include <string>
#include <string_view>
#include <vector>

#include <Eigen/Dense>

namespace sea {

using Complex = std::complex<double>;

/// Dense square operator on a finite-dimensional Hilbert space.
using Operator = Eigen::MatrixXcd;
using RealMatrix = Eigen::MatrixXd;
using RealVector = Eigen::VectorXd;

/// Symmetric positive semidefinite matrix of real inner products.
using GramMatrix = Eigen::MatrixXd;

/// Thrown when arguments violate a documented precondition.
class InvalidInput : public std::invalid_argument {
 public:
  using std::invalid_argument::invalid_argument;
};

inline constexpr double kTolHermitian = 1e-10;
inline constexpr double kTolRank = 1e-12;

/// Real scalar product X.Y = 1/2 Tr(X^dagger Y + Y^dagger X) = Re Tr(X^dagger Y).
double real_inner(const Operator& x, const Operator& y);

/// sqrt(X.X), i.e. the Frobenius norm.
double real_norm(const Operator& x);

Operator identity(Eigen::Index dim);
Operator commutator(const Operator& a, const Operator& b);
Operator anticommutator(const Operator& a, const Operator& b);
Operator kron(const Operator& a, const Operator& b);

/// Largest absolute entry, the scale used for the hermiticity tolerance.
double max_abs_entry(const Operator& x);

bool is_hermitian(const Operator& x, double rel_tol = kTolHermitian);

/// Throws InvalidInput naming `what` unless `x` is square, finite and hermitian.
void require_hermitian(const Operator& x, std::string_view what);

/// (X + X^dagger)/2.
Operator hermitian_part(const Operator& x);

/// 1/2 sum |eig(A - B)| for hermitian A, B.
double trace_distance(const Operator& a, const Operator& b);

GramMatrix gram_matrix(std::span<const Operator> vs);

/// Determinant of a Gram matrix from its LDL^T pivots.
double gram_determinant(const GramMatrix& m);

/// Indices of the maximal prefix-greedy linearly independent subset: vector k
/// is kept when det M(kept + k) > tol_rank * prod(diag M(kept + k)).
std::vector<std::size_t> select_independent(std::span<const Operator> vs,
                                            double tol_rank = kTolRank);

/// Component of b orthogonal to span(hs). The span is first reduced with
/// select_independent; an empty effective span returns b unchanged.
Operator project_orthogonal(const Operator& b, std::span<const Operator> hs);

/// Component of b inside span(hs); b = project_onto + project_orthogonal.
Operator project_onto(const Operator& b, std::span<const Operator> hs);

/// det M(b, hs) / det M(hs) = |b_perp|^2. Requires independent hs.
double gram_det_ratio_norm(const Operator& b, std::span<const Operator> hs);

}  // namespace sea
