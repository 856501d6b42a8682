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

#include "sea/sea_single.hpp"

#include <array>
#include <cmath>
#include <limits>
#include <random>
#include <utility>

namespace sea {

namespace {

constexpr double kInf = std::numeric_limits<double>::infinity();

void check_hamiltonian(const DensityState& s, const Operator& h) {
  require_hermitian(h, "Hamiltonian");
  if (h.rows() != s.dim()) throw InvalidInput("Hamiltonian dimension does not match the state");
}

void check_tau(double tau, const char* what) {
  if (!(tau > 0.0) || !std::isfinite(tau)) {
    throw InvalidInput(std::string(what) + " must be positive and finite");
  }
}

double plogp(double p) { return p > 0.0 ? p * std::log(p) : 0.0; }

}  // namespace

DissipationTime::DissipationTime(double tau_d) : kind_(Kind::constant_tau_d), value_(tau_d) {
  check_tau(tau_d, "tau_D");
}

DissipationTime DissipationTime::constant_tau(double tau) {
  check_tau(tau, "tau");
  DissipationTime d;
  d.kind_ = Kind::constant_tau;
  d.value_ = tau;
  return d;
}

DissipationTime DissipationTime::functional(Functional f) {
  if (!f) throw InvalidInput("tau_D functional is empty");
  DissipationTime d;
  d.kind_ = Kind::functional;
  d.value_ = std::numeric_limits<double>::quiet_NaN();
  d.functional_ = std::move(f);
  return d;
}

double DissipationTime::tau_d(const DensityState& s, const Operator& h, double cov_mm,
                              const Units& units) const {
  switch (kind_) {
    case Kind::constant_tau_d:
      return value_;
    case Kind::constant_tau:
      return cov_mm > 0.0 ? units.k_B * value_ / std::sqrt(cov_mm) : kInf;
    case Kind::functional: {
      const double t = functional_(s, h);
      check_tau(t, "tau_D functional value");
      return t;
    }
  }
  return value_;
}

SeaGeometry sea_geometry(const DensityState& s, const Operator& h, const Units& units) {
  check_hamiltonian(s, h);
  const Eigen::Index n = s.dim();
  const Operator id = identity(n);
  SeaGeometry g;
  g.functionals = functionals(s, h, units);
  g.gamma = sqrt_state(s).gamma;
  g.entropy_op = entropy_operator(s, units);

  // Independence of {gamma, H'} is judged with the trace-free part of H so the
  // verdict does not depend on the energy zero.
  const Operator h_centred = h - (h.trace().real() / static_cast<double>(n)) * id;
  const std::array<Operator, 2> span{Operator(2.0 * g.gamma), Operator(2.0 * g.gamma * h_centred)};
  const auto kept = select_independent(span);
  g.energy_constraint_active = kept.size() == 2 && g.functionals.cov_hh > 0.0;

  const Operator ds = g.entropy_op - mean_value(s, g.entropy_op) * id;
  const Operator dh = h - g.functionals.mean_h * id;
  g.energy_coefficient = g.energy_constraint_active ? g.functionals.cov_sh / g.functionals.cov_hh : 0.0;
  g.massieu_deviation = hermitian_part(ds - g.energy_coefficient * dh);
  // One refinement pass: near equilibrium DeltaM is a small difference of
  // large terms and the unit-norm scaling amplifies its residual projections.
  g.massieu_deviation -= mean_value(s, g.massieu_deviation) * id;
  if (g.energy_constraint_active) {
    g.massieu_deviation -= (covariance(s, g.massieu_deviation, h) / g.functionals.cov_hh) * dh;
  }
  g.entropy_gradient_perp = 2.0 * g.gamma * g.massieu_deviation;
  g.entropy_gradient_perp_norm = real_norm(g.entropy_gradient_perp);
  g.cov_mm = 0.25 * g.entropy_gradient_perp_norm * g.entropy_gradient_perp_norm;
  return g;
}

Operator sea_generator(const SeaGeometry& geo, const DensityState& s, const Operator& h,
                       const DissipationTime& tau, const Units& units) {
  const Eigen::Index n = s.dim();
  if (tau.kind() == DissipationTime::Kind::constant_tau) {
    return geo.massieu_deviation / (2.0 * units.k_B * tau.value());
  }
  if (geo.entropy_gradient_perp_norm < kTolNondissipative * units.k_B) return Operator::Zero(n, n);
  const double tau_d = tau.tau_d(s, h, geo.cov_mm, units);
  return geo.massieu_deviation / (2.0 * tau_d * std::sqrt(geo.cov_mm));
}

Operator hamiltonian_drift(const SqrtState& g, const Operator& h, const Units& units) {
  check_hamiltonian(g.source, h);
  const double mh = mean_value(g.source, h);
  const Operator dh = h - mh * identity(h.rows());
  return Complex(0.0, 1.0 / units.hbar) * (g.gamma * dh);
}

Operator sea_drift(const SqrtState& g, const Operator& h, const DissipationTime& tau, const Units& units) {
  const SeaGeometry geo = sea_geometry(g.source, h, units);
  return g.gamma * sea_generator(geo, g.source, h, tau, units);
}

SeaRhsResult sea_rhs(const DensityState& s, const Operator& h, const DissipationTime& tau, const Units& units) {
  const SeaGeometry geo = sea_geometry(s, h, units);
  const Operator z = sea_generator(geo, s, h, tau, units);
  const Operator& rho = s.rho();
  const Operator id = identity(s.dim());

  SeaRhsResult r;
  r.dissipative_generator = z;
  r.dgamma_h = Complex(0.0, 1.0 / units.hbar) * (geo.gamma * (h - geo.functionals.mean_h * id));
  r.dgamma_d = geo.gamma * z;
  r.drho_dt = hermitian_part(Complex(0.0, -1.0 / units.hbar) * commutator(h, rho) + anticommutator(z, rho));
  r.entropy_rate = real_inner(geo.entropy_gradient_perp, r.dgamma_d);
  if (tau.kind() == DissipationTime::Kind::constant_tau) {
    r.tau = tau.value();
  } else {
    r.tau = tau.tau_d(s, h, geo.cov_mm, units) * std::sqrt(geo.cov_mm) / units.k_B;
  }
  if (geo.functionals.theta_h) r.massieu_operator = geo.entropy_op - h / *geo.functionals.theta_h;
  return r;
}

double entropy_production_rate(const DensityState& s, const Operator& h, const DissipationTime& tau,
                               const Units& units) {
  return sea_rhs(s, h, tau, units).entropy_rate;
}

EntropyRateForms entropy_rate_forms(const DensityState& s, const Operator& h, const DissipationTime& tau,
                                    const Units& units) {
  const SeaGeometry geo = sea_geometry(s, h, units);
  const SeaRhsResult r = sea_rhs(s, h, tau, units);
  EntropyRateForms f;
  f.gradient_inner = r.entropy_rate;
  const double ktau = units.k_B * r.tau;
  const double tau_d = tau.tau_d(s, h, geo.cov_mm, units);
  f.speed = 4.0 * ktau * real_inner(r.dgamma_d, r.dgamma_d);
  if (ktau > 0.0) {
    const double perp2 = geo.entropy_gradient_perp_norm * geo.entropy_gradient_perp_norm;
    f.gram_norm = perp2 / (4.0 * ktau);
    f.massieu_cov = geo.cov_mm / ktau;
    if (geo.functionals.theta_h) {
      const double th = *geo.functionals.theta_h;
      f.temperature_form = (geo.functionals.cov_ss - geo.functionals.cov_hh / (th * th)) / ktau;
    }
  }
  f.sqrt_cov = std::isfinite(tau_d) ? std::sqrt(geo.cov_mm) / tau_d : 0.0;
  return f;
}

MasterCoefficients master_coefficients(const RealVector& p, const RealVector& e) {
  if (p.size() != e.size() || p.size() == 0) throw InvalidInput("master_coefficients: size mismatch");
  double mean_e = 0.0, mean_e2 = 0.0, plp = 0.0;
  for (Eigen::Index n = 0; n < p.size(); ++n) {
    if (p(n) < 0.0) throw InvalidInput("master_coefficients: negative probability");
    mean_e += p(n) * e(n);
    mean_e2 += p(n) * e(n) * e(n);
    plp += plogp(p(n));
  }
  // Centered sums: var = sum p (e - <e>)^2, num = sum p ln p (e - <e>).
  double var_e = 0.0, num = 0.0;
  for (Eigen::Index n = 0; n < p.size(); ++n) {
    const double de = e(n) - mean_e;
    var_e += p(n) * de * de;
    num += plogp(p(n)) * de;
  }
  const double scale = std::max(1.0, mean_e2);
  if (!(var_e > 1e-14 * scale)) {
    throw InvalidInput("master_coefficients: degenerate spectrum (zero energy variance)");
  }
  MasterCoefficients c;
  c.beta = -num / var_e;
  c.alpha = -plp - c.beta * mean_e;
  return c;
}

RealVector master_rhs_diagonal(const RealVector& p, const RealVector& e, double tau, const Units& units) {
  check_tau(tau, "tau");
  if (p.size() != e.size() || p.size() == 0) throw InvalidInput("master_rhs_diagonal: size mismatch");
  double mean_e = 0.0, mean_s = 0.0;
  for (Eigen::Index n = 0; n < p.size(); ++n) {
    if (p(n) < 0.0) throw InvalidInput("master_rhs_diagonal: negative probability");
    mean_e += p(n) * e(n);
    mean_s -= units.k_B * plogp(p(n));
  }
  double cov_hh = 0.0, cov_sh = 0.0;
  for (Eigen::Index n = 0; n < p.size(); ++n) {
    const double s_n = p(n) > 0.0 ? -units.k_B * std::log(p(n)) : 0.0;
    cov_hh += p(n) * (e(n) - mean_e) * (e(n) - mean_e);
    cov_sh += p(n) * (e(n) - mean_e) * (s_n - mean_s);
  }
  const double spread = e.maxCoeff() - e.minCoeff();
  if (!(spread > 1e-14 * std::max(1.0, e.cwiseAbs().maxCoeff()))) {
    throw InvalidInput("master_rhs_diagonal: degenerate spectrum (zero energy variance)");
  }
  // Zero variance under p (populations on one level) drops the energy constraint.
  const double inv_theta = cov_hh > 1e-14 * spread * spread ? cov_sh / cov_hh : 0.0;
  RealVector out(p.size());
  for (Eigen::Index n = 0; n < p.size(); ++n) {
    if (p(n) == 0.0) {
      out(n) = 0.0;
      continue;
    }
    const double ds = -units.k_B * std::log(p(n)) - mean_s;
    out(n) = p(n) * (ds - (e(n) - mean_e) * inv_theta) / (units.k_B * tau);
  }
  return out;
}

RealVector master_rhs_alpha_beta(const RealVector& p, const RealVector& e, double tau) {
  check_tau(tau, "tau");
  const MasterCoefficients c = master_coefficients(p, e);
  RealVector out(p.size());
  for (Eigen::Index n = 0; n < p.size(); ++n) {
    out(n) = -(plogp(p(n)) + c.alpha * p(n) + c.beta * e(n) * p(n)) / tau;
  }
  return out;
}

MasterFullResult master_rhs_full(const DensityState& s, const Operator& h, const DissipationTime& tau,
                                 const Units& units) {
  check_hamiltonian(s, h);
  const Eigen::Index n = s.dim();
  Eigen::SelfAdjointEigenSolver<Operator> hes(hermitian_part(h));
  MasterFullResult out;
  out.energies = hes.eigenvalues();
  out.h_basis = hes.eigenvectors();

  const RealVector& p = s.eigenvalues();
  const Operator u = out.h_basis.adjoint() * s.eigenvectors();

  RealVector sr = RealVector::Zero(n);
  for (Eigen::Index r = 0; r < n; ++r) {
    if (p(r) > 0.0) sr(r) = -units.k_B * std::log(p(r));
  }
  const double mean_s = p.dot(sr);
  // Populations in the H basis, sum_r |u_jr|^2 p_r.
  const RealVector pop = u.cwiseAbs2() * p;
  const double mean_e = pop.dot(out.energies);
  double cov_hh = 0.0;
  for (Eigen::Index j = 0; j < n; ++j) cov_hh += pop(j) * std::pow(out.energies(j) - mean_e, 2);
  // cov(S,H) = sum_r p_r (s_r - <S>) <eta_r|H|eta_r> with <eta_r|H|eta_r> = sum_j |u_jr|^2 e_j.
  const RealVector h_diag = u.cwiseAbs2().transpose() * out.energies;
  double cov_sh = 0.0, cov_ss = 0.0;
  for (Eigen::Index r = 0; r < n; ++r) {
    cov_sh += p(r) * (sr(r) - mean_s) * (h_diag(r) - mean_e);
    cov_ss += p(r) * (sr(r) - mean_s) * (sr(r) - mean_s);
  }

  const SeaGeometry geo = sea_geometry(s, h, units);
  const double c = geo.energy_constraint_active ? cov_sh / cov_hh : 0.0;
  const double cov_mm = std::max(0.0, cov_ss - c * cov_sh);

  double inv_ktau = 0.0;
  if (tau.kind() == DissipationTime::Kind::constant_tau) {
    inv_ktau = 1.0 / (units.k_B * tau.value());
  } else if (2.0 * std::sqrt(cov_mm) >= kTolNondissipative * units.k_B) {
    inv_ktau = 1.0 / (tau.tau_d(s, h, cov_mm, units) * std::sqrt(cov_mm));
  }

  out.rates = Operator::Zero(n, n);
  for (Eigen::Index a = 0; a < n; ++a) {
    for (Eigen::Index b = 0; b < n; ++b) {
      const double de_avg = 0.5 * (out.energies(a) + out.energies(b)) - mean_e;
      Complex rho_ab = 0.0;
      Complex diss = 0.0;
      for (Eigen::Index r = 0; r < n; ++r) {
        if (p(r) == 0.0) continue;
        const Complex w = u(a, r) * std::conj(u(b, r)) * p(r);
        rho_ab += w;
        diss += w * (sr(r) - mean_s - c * de_avg);
      }
      const Complex unitary = Complex(0.0, -1.0 / units.hbar) * (out.energies(a) - out.energies(b)) * rho_ab;
      out.rates(a, b) = unitary + inv_ktau * diss;
    }
  }
  return out;
}

NondissipativeReport nondissipative_check(const DensityState& s, const Operator& h, double tol,
                                          const Units& units) {
  const SeaGeometry geo = sea_geometry(s, h, units);
  const double grad_norm = real_norm(Operator(2.0 * geo.gamma * geo.entropy_op));
  NondissipativeReport rep;
  const double scale = units.k_B * std::max(1.0, grad_norm / units.k_B);
  rep.nondissipative = geo.entropy_gradient_perp_norm <= tol * scale;
  if (!rep.nondissipative) return rep;
  rep.support = s.range_projector();
  if (geo.energy_constraint_active && geo.functionals.theta_h) rep.temperature = geo.functionals.theta_h;
  const double hscale = std::max(1.0, max_abs_entry(h));
  rep.limit_cycle = commutator(s.range_projector(), h).cwiseAbs().maxCoeff() > 1e-10 * hscale;
  return rep;
}

VariationalReport variational_optimality_check(const SqrtState& g, const Operator& h, const DissipationTime& tau,
                                               int n_samples, std::uint64_t seed, const Units& units) {
  if (n_samples <= 0) throw InvalidInput("variational_optimality_check: n_samples must be positive");
  const DensityState& s = g.source;
  const SeaGeometry geo = sea_geometry(s, h, units);
  const Operator drift = g.gamma * sea_generator(geo, s, h, tau, units);
  const double drift_norm = real_norm(drift);
  if (!(drift_norm > 0.0)) {
    throw InvalidInput("variational_optimality_check: state is nondissipative (zero drift)");
  }
  const Operator s_grad = 2.0 * g.gamma * geo.entropy_op;
  const std::array<Operator, 2> constraints{Operator(2.0 * g.gamma), Operator(2.0 * g.gamma * h)};

  VariationalReport rep;
  rep.drift_rate = real_inner(s_grad, drift);
  rep.max_sample_rate = -kInf;

  std::mt19937_64 rng(seed);
  std::normal_distribution<double> normal(0.0, 1.0);
  const Eigen::Index n = s.dim();
  for (int k = 0; k < n_samples; ++k) {
    Operator x(n, n);
    for (Eigen::Index i = 0; i < n; ++i) {
      for (Eigen::Index j = 0; j < n; ++j) x(i, j) = Complex(normal(rng), normal(rng));
    }
    const Operator dir = project_orthogonal(Operator(g.gamma * hermitian_part(x)), constraints);
    const double nrm = real_norm(dir);
    if (!(nrm > 1e-14 * drift_norm)) continue;
    const double rate = real_inner(s_grad, Operator(dir * (drift_norm / nrm)));
    rep.max_sample_rate = std::max(rep.max_sample_rate, rate);
    ++rep.samples;
  }
  const double slack = 1e-10 * std::abs(rep.drift_rate) + 1e-14;
  rep.passed = rep.samples > 0 && rep.max_sample_rate <= rep.drift_rate + slack;
  return rep;
}

CharacteristicTimes characteristic_times(const DensityState& s, const Operator& h, const DissipationTime& tau,
                                         const Units& units) {
  const SeaGeometry geo = sea_geometry(s, h, units);
  const SeaRhsResult r = sea_rhs(s, h, tau, units);
  CharacteristicTimes t;
  t.entropy_rate = r.entropy_rate;
  t.tau_d = tau.tau_d(s, h, geo.cov_mm, units);
  if (geo.functionals.cov_hh > 0.0) t.tau_h = units.hbar / (2.0 * std::sqrt(geo.functionals.cov_hh));
  if (r.tau > 0.0) t.tau = r.tau;
  const double sd_s = std::sqrt(geo.functionals.cov_ss);
  if (r.entropy_rate > 0.0) t.tau_s = sd_s / r.entropy_rate;
  if (std::isfinite(t.tau_d)) {
    const double bound = sd_s / t.tau_d;
    t.rate_bound_holds = r.entropy_rate <= bound * (1.0 + 1e-10) + 1e-14;
    if (t.tau_s) t.uncertainty_holds = *t.tau_s >= t.tau_d * (1.0 - 1e-10);
  }
  return t;
}

}  // namespace sea
