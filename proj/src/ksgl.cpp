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

#include "sea/ksgl.hpp"

#include <cmath>
#include <limits>
#include <string>

namespace sea {

namespace {

void check_rates(const RealMatrix& w) {
  if (w.rows() != w.cols() || w.rows() == 0) throw InvalidInput("transition rates: expected a square matrix");
  if (!w.allFinite()) throw InvalidInput("transition rates: non-finite entry");
  if ((w.array() < 0.0).any()) throw InvalidInput("transition rates: negative entry");
}

}  // namespace

Operator ksgl_rhs(const Operator& rho, const Operator& h, const std::vector<Operator>& vs, const Units& units) {
  require_hermitian(h, "Hamiltonian");
  if (h.rows() != rho.rows()) throw InvalidInput("Hamiltonian dimension does not match the state");
  Operator out = Complex(0.0, -1.0 / units.hbar) * commutator(h, rho);
  for (std::size_t j = 0; j < vs.size(); ++j) {
    const Operator& v = vs[j];
    if (v.rows() != rho.rows() || v.cols() != rho.cols()) {
      throw InvalidInput("transition operator " + std::to_string(j) + ": dimension mismatch");
    }
    const Operator vdv = v.adjoint() * v;
    out += v * rho * v.adjoint() - 0.5 * anticommutator(vdv, rho);
  }
  return hermitian_part(out);
}

Operator ksgl_rhs(const DensityState& s, const Operator& h, const std::vector<Operator>& vs, const Units& units) {
  return ksgl_rhs(s.rho(), h, vs, units);
}

RealVector pauli_rhs(const RealVector& p, const RealMatrix& w) {
  check_rates(w);
  if (p.size() != w.rows()) throw InvalidInput("pauli_rhs: probability and rate sizes differ");
  if (std::abs(p.sum() - 1.0) > 1e-8) throw InvalidInput("pauli_rhs: probabilities must sum to 1");
  // column sums are total outflow rates sum_r w[r][n]
  const RealVector outflow = w.colwise().sum().transpose();
  return w * p - p.cwiseProduct(outflow);
}

std::vector<Operator> transition_operators(const Operator& h, const RealMatrix& w) {
  require_hermitian(h, "Hamiltonian");
  check_rates(w);
  if (w.rows() != h.rows()) throw InvalidInput("transition rates: dimension does not match H");
  Eigen::SelfAdjointEigenSolver<Operator> es(hermitian_part(h));
  const Operator& basis = es.eigenvectors();
  std::vector<Operator> vs;
  for (Eigen::Index n = 0; n < w.rows(); ++n) {
    for (Eigen::Index r = 0; r < w.cols(); ++r) {
      if (n == r || w(n, r) == 0.0) continue;
      vs.push_back(std::sqrt(w(n, r)) * basis.col(n) * basis.col(r).adjoint());
    }
  }
  return vs;
}

KsglEntropyRate ksgl_entropy_rate(const DensityState& s, const std::vector<Operator>& vs, const Units& units) {
  const RealVector& p = s.eigenvalues();
  const Operator& u = s.eigenvectors();
  KsglEntropyRate out;
  double acc = 0.0;
  for (const Operator& v : vs) {
    if (v.rows() != s.dim()) throw InvalidInput("transition operator: dimension mismatch");
    const RealMatrix mag = (u.adjoint() * v * u).cwiseAbs2();
    for (Eigen::Index n = 0; n < p.size(); ++n) {
      for (Eigen::Index r = 0; r < p.size(); ++r) {
        if (mag(n, r) == 0.0 || p(r) == 0.0) continue;
        if (p(n) == 0.0) {
          if (mag(n, r) > 1e-28) out.divergent = true;
          continue;
        }
        acc += mag(n, r) * p(r) * (std::log(p(r)) - std::log(p(n)));
      }
    }
  }
  out.rate = out.divergent ? std::numeric_limits<double>::infinity() : units.k_B * acc;
  return out;
}

}  // namespace sea
