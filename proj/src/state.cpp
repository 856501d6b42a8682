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

#include "sea/state.hpp"

#include <algorithm>
#include <cmath>
#include <cstdint>
#include <limits>
#include <utility>

#include <boost/math/tools/roots.hpp>

namespace sea {

namespace {

constexpr double kInf = std::numeric_limits<double>::infinity();

// Probabilities of the canonical distribution over `energies` at inverse
// temperature beta, shifted for overflow safety. Infinite beta selects the
// ground (beta > 0) or top (beta < 0) level uniformly.
RealVector boltzmann_weights(const RealVector& energies, double beta) {
  const Eigen::Index n = energies.size();
  RealVector w(n);
  const double lo = energies.minCoeff();
  const double hi = energies.maxCoeff();
  const double spread = hi - lo;
  if (std::isinf(beta)) {
    const double target = beta > 0 ? lo : hi;
    const double tol = 1e-12 * std::max(spread, 1.0);
    for (Eigen::Index k = 0; k < n; ++k) w(k) = std::abs(energies(k) - target) <= tol ? 1.0 : 0.0;
  } else {
    const double ref = beta >= 0 ? lo : hi;
    for (Eigen::Index k = 0; k < n; ++k) w(k) = std::exp(-beta * (energies(k) - ref));
  }
  return w / w.sum();
}

double canonical_mean(const RealVector& energies, double beta) {
  return boltzmann_weights(energies, beta).dot(energies);
}

double shannon(const RealVector& p) {
  double s = 0.0;
  for (Eigen::Index k = 0; k < p.size(); ++k) {
    if (p(k) > 0.0) s -= p(k) * std::log(p(k));
  }
  return s;
}

double beta_bound(const RealVector& energies) {
  const double spread = energies.maxCoeff() - energies.minCoeff();
  return 700.0 / spread;
}

template <class F>
double solve_root(F f, double a, double b) {
  double fa = f(a);
  double fb = f(b);
  if (fa == 0.0) return a;
  if (fb == 0.0) return b;
  std::uintmax_t max_iter = 200;
  boost::math::tools::eps_tolerance<double> tol(std::numeric_limits<double>::digits - 2);
  auto r = boost::math::tools::toms748_solve(f, a, b, fa, fb, tol, max_iter);
  const double x = 0.5 * (r.first + r.second);
  return std::abs(f(r.first)) < std::abs(f(x)) ? r.first : x;
}

void require_projector(const Operator& b, Eigen::Index dim) {
  require_hermitian(b, "support projector");
  if (b.rows() != dim) throw InvalidInput("support projector: dimension mismatch");
  if ((b * b - b).cwiseAbs().maxCoeff() > 1e-10) {
    throw InvalidInput("support projector: operator is not idempotent");
  }
}

// Orthonormal basis (columns) of the range of a projector.
Operator range_basis(const Operator& b) {
  Eigen::SelfAdjointEigenSolver<Operator> es(hermitian_part(b));
  std::vector<Eigen::Index> cols;
  for (Eigen::Index k = 0; k < b.rows(); ++k) {
    if (es.eigenvalues()(k) > 0.5) cols.push_back(k);
  }
  Operator q(b.rows(), static_cast<Eigen::Index>(cols.size()));
  for (std::size_t j = 0; j < cols.size(); ++j) {
    q.col(static_cast<Eigen::Index>(j)) = es.eigenvectors().col(cols[j]);
  }
  return q;
}

}  // namespace

DensityState DensityState::make(const Operator& rho_raw, const StateOptions& options) {
  require_hermitian(rho_raw, "density operator");
  const Operator herm = hermitian_part(rho_raw);
  Eigen::SelfAdjointEigenSolver<Operator> es(herm);
  if (es.info() != Eigen::Success) throw InvalidState("density operator: eigensolver failed");
  return finish(herm, es.eigenvalues().reverse(), es.eigenvectors().rowwise().reverse(), options);
}

DensityState DensityState::from_sqrt(const Operator& gamma, const StateOptions& options) {
  if (gamma.rows() != gamma.cols() || gamma.rows() == 0) throw InvalidInput("gamma must be square and nonempty");
  if (!gamma.allFinite()) throw InvalidState("gamma has non-finite entries");
  Eigen::JacobiSVD<Operator> svd(gamma, Eigen::ComputeFullV);
  const RealVector sv = svd.singularValues();
  return finish(hermitian_part(gamma.adjoint() * gamma), sv.cwiseProduct(sv), svd.matrixV(), options);
}

DensityState DensityState::finish(Operator herm, RealVector eigvals, Operator eigvecs, const StateOptions& options) {
  const Eigen::Index n = herm.rows();
  DensityState s;
  s.zero_threshold_ = options.zero_threshold;
  s.eigvals_ = std::move(eigvals);
  s.eigvecs_ = std::move(eigvecs);
  s.raw_min_eig_ = s.eigvals_(n - 1);

  const double neg_tol = options.negative_tolerance.value_or(options.zero_threshold);
  if (s.raw_min_eig_ < -neg_tol) {
    throw InvalidState("density operator: negative eigenvalue " + std::to_string(s.raw_min_eig_) +
                       " beyond threshold");
  }
  const double trace = s.eigvals_.sum();
  if (!(std::abs(trace - 1.0) <= options.trace_tolerance)) {
    throw InvalidState("density operator: trace " + std::to_string(trace) + " is not 1");
  }

  bool modified = false;
  for (Eigen::Index k = 0; k < n; ++k) {
    if (s.eigvals_(k) < options.zero_threshold) {
      if (s.eigvals_(k) != 0.0) modified = true;
      s.eigvals_(k) = 0.0;
    }
  }
  const double surviving = s.eigvals_.sum();
  if (!(surviving > 0.0)) throw InvalidState("density operator: no positive eigenvalue");
  if (options.renormalize && std::abs(surviving - 1.0) > 4 * std::numeric_limits<double>::epsilon()) {
    s.eigvals_ /= surviving;
    modified = true;
  }

  if (modified) {
    s.rho_ = s.eigvecs_ * s.eigvals_.cast<Complex>().asDiagonal() * s.eigvecs_.adjoint();
    s.rho_ = hermitian_part(s.rho_);
  } else {
    s.rho_ = std::move(herm);
  }

  s.rank_ = (s.eigvals_.array() > 0.0).count();
  const Operator vr = s.eigvecs_.leftCols(s.rank_);
  s.range_projector_ = vr * vr.adjoint();
  s.kernel_projector_ = identity(n) - s.range_projector_;
  return s;
}

DensityState make_state(const Operator& rho_raw, double zero_threshold) {
  StateOptions o;
  o.zero_threshold = zero_threshold;
  return DensityState::make(rho_raw, o);
}

SqrtState sqrt_state(const DensityState& s) {
  const RealVector roots = s.eigenvalues().cwiseSqrt();
  Operator gamma = s.eigenvectors() * roots.cast<Complex>().asDiagonal() * s.eigenvectors().adjoint();
  return SqrtState{hermitian_part(gamma), s};
}

Operator entropy_operator(const DensityState& s, const Units& units) {
  const RealVector& p = s.eigenvalues();
  RealVector sk = RealVector::Zero(p.size());
  for (Eigen::Index k = 0; k < p.size(); ++k) {
    if (p(k) > 0.0) sk(k) = -units.k_B * std::log(p(k));
  }
  return hermitian_part(s.eigenvectors() * sk.cast<Complex>().asDiagonal() *
                        s.eigenvectors().adjoint());
}

double mean_value(const DensityState& s, const Operator& a) {
  if (a.rows() != s.dim() || a.cols() != s.dim()) {
    throw InvalidInput("mean_value: operator dimension does not match the state");
  }
  // Normalized by Tr rho so deviations stay centered when an integrator lets
  // the trace drift.
  return (s.rho() * a).trace().real() / s.rho().trace().real();
}

double covariance(const DensityState& s, const Operator& a, const Operator& b) {
  const Operator da = a - mean_value(s, a) * identity(s.dim());
  const Operator db = b - mean_value(s, b) * identity(s.dim());
  const Operator rda = s.rho() * da;
  // 1/2 Tr(rho{dA,dB}) = Re Tr(rho dA dB); symmetrized so cov(a,b) == cov(b,a) bitwise.
  const Operator rdb = s.rho() * db;
  return 0.5 * ((rda * db).trace().real() + (rdb * da).trace().real()) / s.rho().trace().real();
}

double von_neumann_entropy(const DensityState& s, const Units& units) {
  return units.k_B * shannon(s.eigenvalues());
}

double purity(const DensityState& s) { return s.eigenvalues().squaredNorm(); }

StateFunctionals functionals(const DensityState& s, const Operator& h, const Units& units) {
  if (h.rows() != s.dim()) throw InvalidInput("functionals: Hamiltonian dimension mismatch");
  const Operator sop = entropy_operator(s, units);
  StateFunctionals f;
  f.mean_h = mean_value(s, h);
  f.mean_s = von_neumann_entropy(s, units);
  f.cov_hh = std::max(0.0, covariance(s, h, h));
  // S is diagonal in the eigenbasis of rho, so cov(S,S) has an exact spectral form.
  const RealVector& p = s.eigenvalues();
  double norm = 0.0, ms = 0.0;
  for (Eigen::Index k = 0; k < p.size(); ++k) {
    if (p(k) <= 0.0) continue;
    norm += p(k);
    ms -= units.k_B * p(k) * std::log(p(k));
  }
  ms /= norm;
  for (Eigen::Index k = 0; k < p.size(); ++k) {
    if (p(k) <= 0.0) continue;
    const double ds = -units.k_B * std::log(p(k)) - ms;
    f.cov_ss += p(k) * ds * ds;
  }
  f.cov_ss /= norm;
  f.cov_sh = covariance(s, sop, h);

  const bool ss_negligible = !(f.cov_ss > kTolTheta * kTolTheta * units.k_B * units.k_B);
  const bool sh_negligible = ss_negligible || f.cov_sh == 0.0 || !(f.cov_hh > 0.0) ||
                             std::abs(f.cov_sh) < kTolTheta * std::sqrt(f.cov_hh * f.cov_ss);
  if (!sh_negligible) f.theta_h = f.cov_hh / f.cov_sh;
  if (!ss_negligible) f.theta_s = f.cov_sh / f.cov_ss;
  return f;
}

GradientBundle gradients(const SqrtState& g, const Operator& h, const Units& units) {
  const DensityState& s = g.source;
  if (h.rows() != s.dim()) throw InvalidInput("gradients: Hamiltonian dimension mismatch");
  const Operator sop = entropy_operator(s, units);
  const Operator id = identity(s.dim());
  const double mh = mean_value(s, h);
  const double ms = von_neumann_entropy(s, units);
  GradientBundle b;
  b.normalization = 2.0 * g.gamma;
  b.energy = 2.0 * g.gamma * h;
  b.entropy = 2.0 * g.gamma * sop;
  b.energy_deviation = 2.0 * g.gamma * (h - mh * id);
  b.entropy_deviation = 2.0 * g.gamma * (sop - ms * id);
  return b;
}

DensityState canonical_state_beta(const Operator& h, double beta, const std::optional<Operator>& support) {
  require_hermitian(h, "Hamiltonian");
  Eigen::SelfAdjointEigenSolver<Operator> es(hermitian_part(h));
  const RealVector w = boltzmann_weights(es.eigenvalues(), beta);
  Operator x = es.eigenvectors() * w.cast<Complex>().asDiagonal() * es.eigenvectors().adjoint();
  if (support) {
    require_projector(*support, h.rows());
    x = (*support) * x * (*support);
  }
  const double tr = x.trace().real();
  if (!(tr > 1e-300)) throw InvalidInput("canonical_state: Tr[B exp(-H/kT) B] vanishes (degenerate support)");
  return make_state(hermitian_part(x / tr));
}

DensityState canonical_state(const Operator& h, double temperature, const std::optional<Operator>& support,
                             const Units& units) {
  if (temperature == 0.0 || std::isnan(temperature)) {
    throw InvalidInput("canonical_state: temperature must be nonzero");
  }
  const double beta = std::isinf(temperature) ? 0.0 : 1.0 / (units.k_B * temperature);
  return canonical_state_beta(h, beta, support);
}

double canonical_beta_for_energy(const RealVector& energies, double energy) {
  const double lo = energies.minCoeff();
  const double hi = energies.maxCoeff();
  const double spread = hi - lo;
  const double slack = 1e-12 * std::max({std::abs(lo), std::abs(hi), 1.0});
  if (energy < lo - slack || energy > hi + slack) {
    throw UnreachableTarget("canonical_for_energy: energy " + std::to_string(energy) +
                            " outside the spectrum [" + std::to_string(lo) + ", " +
                            std::to_string(hi) + "]");
  }
  if (spread <= slack) return 0.0;
  if (energy <= lo + slack * 1e-2) return kInf;
  if (energy >= hi - slack * 1e-2) return -kInf;
  const double bmax = beta_bound(energies);
  auto f = [&](double b) { return canonical_mean(energies, b) - energy; };
  if (f(bmax) >= 0.0) return bmax;
  if (f(-bmax) <= 0.0) return -bmax;
  return solve_root(f, -bmax, bmax);
}

DensityState canonical_for_energy(const Operator& h, double energy, const std::optional<Operator>& support) {
  require_hermitian(h, "Hamiltonian");
  const Eigen::Index n = h.rows();
  Operator q = identity(n);
  if (support) {
    require_projector(*support, n);
    if (commutator(*support, h).cwiseAbs().maxCoeff() > 1e-10 * std::max(1.0, max_abs_entry(h))) {
      throw InvalidInput("canonical_for_energy: support projector must commute with H");
    }
    q = range_basis(*support);
    if (q.cols() == 0) throw InvalidInput("canonical_for_energy: empty support");
  }
  const Operator hq = hermitian_part(q.adjoint() * h * q);
  Eigen::SelfAdjointEigenSolver<Operator> es(hq);
  const double beta = canonical_beta_for_energy(es.eigenvalues(), energy);
  const RealVector w = boltzmann_weights(es.eigenvalues(), beta);
  const Operator rq = es.eigenvectors() * w.cast<Complex>().asDiagonal() * es.eigenvectors().adjoint();
  return make_state(hermitian_part(q * rq * q.adjoint()));
}

DensityState canonical_for_entropy(const Operator& h, double s_target, const Units& units) {
  require_hermitian(h, "Hamiltonian");
  Eigen::SelfAdjointEigenSolver<Operator> es(hermitian_part(h));
  const RealVector& e = es.eigenvalues();
  const auto n = static_cast<double>(e.size());
  const double s = s_target / units.k_B;
  const double smax = std::log(n);
  const double slack = 1e-12;
  if (s < -slack || s > smax + slack) {
    throw UnreachableTarget("canonical_for_entropy: entropy " + std::to_string(s_target) +
                            " outside [0, k_B ln d]");
  }
  const double lo = e.minCoeff();
  const double spread = e.maxCoeff() - lo;
  const double deg_tol = 1e-12 * std::max(spread, 1.0);
  const auto ground = static_cast<double>((e.array() - lo <= deg_tol).count());
  const double smin = std::log(ground);
  double beta = 0.0;
  if (s >= smax - slack * 1e-2 || spread <= deg_tol) {
    beta = 0.0;
  } else if (s < smin - slack) {
    throw UnreachableTarget("canonical_for_entropy: entropy below ground-space entropy k_B ln g");
  } else if (s <= smin + slack * 1e-2) {
    beta = kInf;
  } else {
    const double bmax = beta_bound(e);
    auto f = [&](double b) { return shannon(boltzmann_weights(e, b)) - s; };
    beta = f(bmax) >= 0.0 ? bmax : solve_root(f, 0.0, bmax);
  }
  const RealVector w = boltzmann_weights(e, beta);
  return make_state(hermitian_part(es.eigenvectors() * w.cast<Complex>().asDiagonal() *
                                   es.eigenvectors().adjoint()));
}

}  // namespace sea
