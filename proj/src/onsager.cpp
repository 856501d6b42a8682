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

#include "sea/onsager.hpp"

#include <cmath>

namespace sea {

namespace {

void check_basis(const DensityState& s, const QuorumBasis& basis) {
  if (basis.dim != s.dim()) throw InvalidInput("quorum basis dimension does not match the state");
}

}  // namespace

QuorumBasis quorum_basis(Eigen::Index dim) {
  if (dim < 2) throw InvalidInput("quorum_basis: dim must be at least 2");
  QuorumBasis b;
  b.dim = dim;
  const Complex i(0.0, 1.0);
  for (Eigen::Index j = 0; j < dim; ++j) {
    for (Eigen::Index k = j + 1; k < dim; ++k) {
      Operator x = Operator::Zero(dim, dim);
      x(j, k) = 1.0;
      x(k, j) = 1.0;
      b.ops.push_back(x);
    }
  }
  for (Eigen::Index j = 0; j < dim; ++j) {
    for (Eigen::Index k = j + 1; k < dim; ++k) {
      Operator y = Operator::Zero(dim, dim);
      y(j, k) = -i;
      y(k, j) = i;
      b.ops.push_back(y);
    }
  }
  for (Eigen::Index l = 1; l < dim; ++l) {
    Operator z = Operator::Zero(dim, dim);
    const double c = std::sqrt(2.0 / static_cast<double>(l * (l + 1)));
    for (Eigen::Index m = 0; m < l; ++m) z(m, m) = c;
    z(l, l) = -c * static_cast<double>(l);
    b.ops.push_back(z);
  }
  // For dim 2 this yields sigma_x, sigma_y, sigma_z.
  return b;
}

Affinities affinities(const DensityState& s, const QuorumBasis& basis) {
  check_basis(s, basis);
  const Eigen::Index n = s.dim();
  // -ln(rho + P_Ker) is S/k_B.
  const Operator minus_log = entropy_operator(s, Units{1.0, 1.0});
  Affinities a;
  a.f0 = minus_log.trace().real() / static_cast<double>(n);
  a.f.resize(static_cast<Eigen::Index>(basis.ops.size()));
  Operator rebuilt = a.f0 * identity(n);
  for (std::size_t j = 0; j < basis.ops.size(); ++j) {
    const double fj = 0.5 * (basis.ops[j] * minus_log).trace().real();
    a.f(static_cast<Eigen::Index>(j)) = fj;
    rebuilt += fj * basis.ops[j];
  }
  a.residual = max_abs_entry(rebuilt - minus_log);
  return a;
}

RealMatrix conductivity_matrix(const DensityState& s, const Operator& h, const QuorumBasis& basis, double tau,
                               const Units& units) {
  check_basis(s, basis);
  if (!(tau > 0.0) || !std::isfinite(tau)) throw InvalidInput("conductivity_matrix: tau must be positive and finite");
  const SeaGeometry geo = sea_geometry(s, h, units);
  const auto m = static_cast<Eigen::Index>(basis.ops.size());
  RealVector cxh(m);
  for (Eigen::Index i = 0; i < m; ++i) cxh(i) = covariance(s, basis.ops[static_cast<std::size_t>(i)], h);
  RealMatrix l(m, m);
  for (Eigen::Index i = 0; i < m; ++i) {
    for (Eigen::Index j = i; j < m; ++j) {
      double v = covariance(s, basis.ops[static_cast<std::size_t>(i)], basis.ops[static_cast<std::size_t>(j)]);
      if (geo.energy_constraint_active) v -= cxh(i) * cxh(j) / geo.functionals.cov_hh;
      l(i, j) = v / tau;
      l(j, i) = l(i, j);
    }
  }
  return l;
}

OnsagerReport onsager_report(const DensityState& s, const Operator& h, const QuorumBasis& basis,
                             const DissipationTime& tau, const Units& units) {
  check_basis(s, basis);
  const SeaRhsResult rhs = sea_rhs(s, h, tau, units);
  const SqrtState g = sqrt_state(s);
  const Affinities a = affinities(s, basis);
  const auto m = static_cast<Eigen::Index>(basis.ops.size());

  OnsagerReport r;
  r.f0 = a.f0;
  r.f = a.f;
  r.tau = rhs.tau;
  r.entropy_rate_direct = rhs.entropy_rate;
  r.rates.resize(m);
  for (Eigen::Index i = 0; i < m; ++i) {
    r.rates(i) = real_inner(rhs.dgamma_d, Operator(2.0 * g.gamma * basis.ops[static_cast<std::size_t>(i)]));
  }
  // At a nondissipative state tau_D fixed makes tau -> 0 and L unbounded on
  // directions orthogonal to f; report L = 0 there, as the dissipator is.
  const bool dissipative = tau.kind() == DissipationTime::Kind::constant_tau ||
                           sea_geometry(s, h, units).entropy_gradient_perp_norm >= kTolNondissipative * units.k_B;
  if (dissipative && rhs.tau > 0.0) {
    r.l = conductivity_matrix(s, h, basis, rhs.tau, units);
  } else {
    r.l = RealMatrix::Zero(m, m);
  }
  r.rates_from_l = r.l * r.f;
  r.entropy_rate_quadratic = units.k_B * r.f.dot(r.rates_from_l);
  r.entropy_rate_bilinear = units.k_B * r.f.dot(r.rates);

  const Eigen::SelfAdjointEigenSolver<RealMatrix> es(r.l, Eigen::EigenvaluesOnly);
  r.psd_min_eigenvalue = es.eigenvalues()(0);
  const double top = std::max(std::abs(es.eigenvalues()(0)), std::abs(es.eigenvalues()(m - 1)));
  r.resistance_singular = !(es.eigenvalues()(0) > 1e-10 * top);
  if (!r.resistance_singular) r.resistance = r.l.inverse();
  return r;
}

}  // namespace sea
