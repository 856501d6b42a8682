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

// Seeded generators and independent reference computations shared by the tests.

#pragma once

#include <cmath>
#include <cstdint>
#include <random>
#include <vector>

#include "sea/operators.hpp"
#include "sea/state.hpp"

namespace sea::testing {

inline Operator random_matrix(Eigen::Index n, std::mt19937_64& rng) {
  std::normal_distribution<double> g(0.0, 1.0);
  Operator x(n, n);
  for (Eigen::Index i = 0; i < n; ++i)
    for (Eigen::Index j = 0; j < n; ++j) x(i, j) = Complex(g(rng), g(rng));
  return x;
}

inline Operator random_hermitian(Eigen::Index n, std::mt19937_64& rng) {
  return hermitian_part(random_matrix(n, rng));
}

/// Random density operator of the given rank with spectrum drawn uniformly.
inline Operator random_density(Eigen::Index n, Eigen::Index rank, std::mt19937_64& rng) {
  Eigen::HouseholderQR<Operator> qr(random_matrix(n, rng));
  const Operator q = qr.householderQ();
  std::uniform_real_distribution<double> u(0.05, 1.0);
  RealVector p = RealVector::Zero(n);
  for (Eigen::Index k = 0; k < rank; ++k) p(k) = u(rng);
  p /= p.sum();
  return hermitian_part(q * p.cast<Complex>().asDiagonal() * q.adjoint());
}

inline Operator diag(std::initializer_list<double> v) {
  RealVector d(static_cast<Eigen::Index>(v.size()));
  Eigen::Index k = 0;
  for (double x : v) d(k++) = x;
  return d.cast<Complex>().asDiagonal();
}

inline Operator pauli_x() {
  Operator m(2, 2);
  m << 0, 1, 1, 0;
  return m;
}

inline Operator pauli_y() {
  Operator m(2, 2);
  m << 0, Complex(0, -1), Complex(0, 1), 0;
  return m;
}

inline Operator pauli_z() { return diag({1.0, -1.0}); }

/// Plain bisection on a bracketing interval.
template <class F>
double bisect(F f, double a, double b, int iters = 200) {
  double fa = f(a);
  for (int k = 0; k < iters; ++k) {
    const double m = 0.5 * (a + b);
    const double fm = f(m);
    if ((fm < 0) == (fa < 0)) {
      a = m;
      fa = fm;
    } else {
      b = m;
    }
  }
  return 0.5 * (a + b);
}

/// Determinant by Laplace expansion along the first row.
inline double laplace_det(const RealMatrix& m) {
  const Eigen::Index n = m.rows();
  if (n == 1) return m(0, 0);
  double det = 0.0;
  for (Eigen::Index j = 0; j < n; ++j) {
    RealMatrix minor(n - 1, n - 1);
    for (Eigen::Index r = 1; r < n; ++r) {
      Eigen::Index c2 = 0;
      for (Eigen::Index c = 0; c < n; ++c) {
        if (c == j) continue;
        minor(r - 1, c2++) = m(r, c);
      }
    }
    det += ((j % 2 == 0) ? 1.0 : -1.0) * m(0, j) * laplace_det(minor);
  }
  return det;
}

/// Entropy -sum p ln p from eigenvalues of a hermitian matrix (k_B = 1).
inline double entropy_of(const Operator& rho) {
  Eigen::SelfAdjointEigenSolver<Operator> es(hermitian_part(rho), Eigen::EigenvaluesOnly);
  double s = 0.0;
  for (Eigen::Index k = 0; k < es.eigenvalues().size(); ++k) {
    const double p = es.eigenvalues()(k);
    if (p > 1e-300) s -= p * std::log(p);
  }
  return s;
}

inline double rel_close(double a, double b) { return std::abs(a - b) / std::max({1.0, std::abs(a), std::abs(b)}); }

}  // namespace sea::testing
