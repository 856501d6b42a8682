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

#include "sea/pheno.hpp"

#include <algorithm>
#include <cmath>
#include <complex>
#include <optional>
#include <string>

#include "sea/sea_single.hpp"

namespace sea {

namespace {

void check_positive(double v, const char* what) {
  if (!(v > 0.0) || !std::isfinite(v)) throw InvalidInput(std::string(what) + " must be positive and finite");
}

bool theta_s_near(const StateFunctionals& f, double t_q) {
  return f.theta_s && std::abs(*f.theta_s - t_q) < 1e-10 * std::abs(t_q);
}

// theta of the selected mode at the current state; empty when undefined.
std::optional<double> mode_theta(const StateFunctionals& f, const PhenoMode& mode, bool& singular) {
  singular = false;
  switch (mode.kind) {
    case PhenoMode::Kind::massieu_const_theta:
    case PhenoMode::Kind::helmholtz_reservoir:
      return mode.theta;
    case PhenoMode::Kind::helmholtz_theta_s:
      return f.theta_s;
    case PhenoMode::Kind::heat_interaction: {
      auto t = heat_theta(f, mode.theta);
      singular = !t.has_value();
      return t;
    }
  }
  return std::nullopt;
}

bool is_massieu(const PhenoMode& mode) { return mode.kind == PhenoMode::Kind::massieu_const_theta; }

}  // namespace

PhenoMode PhenoMode::massieu(double theta, double tau_g) {
  check_positive(tau_g, "tau_G");
  if (theta == 0.0 || std::isnan(theta)) throw InvalidInput("massieu theta must be nonzero");
  return PhenoMode{Kind::massieu_const_theta, theta, tau_g};
}

PhenoMode PhenoMode::helmholtz_theta_s(double tau_f) {
  check_positive(tau_f, "tau_F");
  return PhenoMode{Kind::helmholtz_theta_s, 0.0, tau_f};
}

PhenoMode PhenoMode::helmholtz_reservoir(double t_r, double tau_f) {
  check_positive(tau_f, "tau_F");
  check_positive(t_r, "T_R");
  return PhenoMode{Kind::helmholtz_reservoir, t_r, tau_f};
}

PhenoMode PhenoMode::heat_interaction(double t_q, double tau_f) {
  check_positive(tau_f, "tau_F");
  check_positive(t_q, "T_Q");
  return PhenoMode{Kind::heat_interaction, t_q, tau_f};
}

const char* to_string(PhenoMode::Kind kind) {
  switch (kind) {
    case PhenoMode::Kind::massieu_const_theta:
      return "massieu";
    case PhenoMode::Kind::helmholtz_theta_s:
      return "helmholtz_theta_s";
    case PhenoMode::Kind::helmholtz_reservoir:
      return "helmholtz_reservoir";
    case PhenoMode::Kind::heat_interaction:
      return "heat_interaction";
  }
  return "unknown";
}

std::optional<double> heat_theta(const StateFunctionals& f, double t_q) {
  if (!f.theta_s || theta_s_near(f, t_q)) return std::nullopt;
  const double den = f.cov_sh - t_q * f.cov_ss;
  if (den == 0.0) return std::nullopt;
  return (f.cov_hh - t_q * f.cov_sh) / den;
}

PhenoResult pheno_rhs(const DensityState& s, const Operator& h, const PhenoMode& mode, const Units& units) {
  require_hermitian(h, "Hamiltonian");
  if (h.rows() != s.dim()) throw InvalidInput("Hamiltonian dimension does not match the state");
  const Eigen::Index n = s.dim();
  const StateFunctionals f = functionals(s, h, units);

  PhenoResult r;
  r.drho_dt = Operator::Zero(n, n);
  r.generator = Operator::Zero(n, n);
  r.theta = mode_theta(f, mode, r.theta_q_singular);
  if (!r.theta) {
    r.fixed_point = true;
    return r;
  }
  const double th = *r.theta;

  // Everything below lives in the eigenbasis of rho, where S is diagonal, and
  // runs in extended precision: near a fixed point the rates are many orders
  // below the size of the terms that produce them.
  using LComplex = std::complex<long double>;
  using LOperator = Eigen::Matrix<LComplex, Eigen::Dynamic, Eigen::Dynamic>;
  using LVector = Eigen::Matrix<long double, Eigen::Dynamic, 1>;
  const LOperator v = s.eigenvectors().cast<LComplex>();
  const LVector p = s.eigenvalues().cast<long double>();
  const long double tr = p.sum();
  auto mean = [&](const LOperator& a) { return p.dot(a.diagonal().real()) / tr; };
  auto cov = [&](const LOperator& a, const LOperator& b) { return p.dot((a * b).diagonal().real()) / tr; };
  auto herm = [](const LOperator& a) { return LOperator((a + a.adjoint()) * 0.5L); };
  const LOperator id = LOperator::Identity(n, n);
  LOperator sk = LOperator::Zero(n, n);
  for (Eigen::Index k = 0; k < n; ++k) {
    if (p(k) > 0.0L) sk(k, k) = -static_cast<long double>(units.k_B) * std::log(p(k));
  }
  const LOperator hk = herm(v.adjoint() * h.cast<LComplex>() * v);
  const LOperator ds = sk - mean(sk) * id;
  const LOperator dh = hk - mean(hk) * id;

  // Delta G = Delta S - Delta H / theta; Delta F = Delta H - theta Delta S.
  const long double lth = th;
  LOperator dpot;
  if (is_massieu(mode)) {
    dpot = std::isinf(th) ? ds : LOperator(ds - dh / lth);
  } else {
    dpot = dh - lth * ds;
  }
  // One re-projection against the operator the mode must leave stationary:
  // Delta H - T_Q Delta S for heat, Delta S for the theta_S mode.
  std::optional<LOperator> kept;
  if (mode.kind == PhenoMode::Kind::heat_interaction) kept = LOperator(dh - static_cast<long double>(mode.theta) * ds);
  if (mode.kind == PhenoMode::Kind::helmholtz_theta_s) kept = ds;
  if (kept) {
    const long double kk = cov(*kept, *kept);
    if (kk > 0.0L) dpot = herm(dpot - (cov(dpot, *kept) / kk) * (*kept));
  }
  dpot -= mean(dpot) * id;
  const long double cp = std::max(0.0L, cov(dpot, dpot));
  r.cov_potential = static_cast<double>(cp);
  const double grad_norm = 2.0 * std::sqrt(r.cov_potential);
  const double scale = is_massieu(mode) ? units.k_B : std::max(units.k_B * std::abs(th), max_abs_entry(h));
  r.relative_gradient = grad_norm / scale;
  if (grad_norm < kTolNondissipative * scale) {
    r.fixed_point = true;
    return r;
  }
  const long double sign = is_massieu(mode) ? 1.0L : -1.0L;
  const LOperator gk = sign * dpot / (2.0L * static_cast<long double>(mode.tau) * std::sqrt(cp));
  LOperator drho_k(n, n);
  for (Eigen::Index j = 0; j < n; ++j) {
    for (Eigen::Index k = 0; k < n; ++k) drho_k(j, k) = gk(j, k) * (p(j) + p(k));
  }
  drho_k = herm(drho_k);
  // Rates of the trace-normalized means.
  r.dh_dt = static_cast<double>((dh * drho_k).trace().real() / tr);
  r.ds_dt = static_cast<double>((ds * drho_k).trace().real() / tr);
  r.generator = hermitian_part(LOperator(v * gk * v.adjoint()).cast<Complex>());
  r.drho_dt = hermitian_part(LOperator(v * drho_k * v.adjoint()).cast<Complex>());
  return r;
}

PredictedRates predicted_rates(const DensityState& s, const Operator& h, const PhenoMode& mode, const Units& units) {
  const StateFunctionals f = functionals(s, h, units);
  bool singular = false;
  const std::optional<double> theta = mode_theta(f, mode, singular);
  PredictedRates p;
  if (!theta) {
    p.fixed_point = true;
    return p;
  }
  const double th = *theta;
  // Covariances of the potential itself rather than their expansion in
  // cov_SS, cov_SH and cov_HH, which cancels at fixed points.
  const Operator sop = entropy_operator(s, units);
  if (is_massieu(mode)) {
    const double inv = std::isinf(th) ? 0.0 : 1.0 / th;
    const Operator g = sop - inv * h;
    const double cov_gg = std::max(0.0, covariance(s, g, g));
    if (2.0 * std::sqrt(cov_gg) < kTolNondissipative * units.k_B) {
      p.fixed_point = true;
      return p;
    }
    const double den = mode.tau * std::sqrt(cov_gg);
    p.dh_dt = covariance(s, h, g) / den;
    p.ds_dt = covariance(s, sop, g) / den;
  } else {
    const Operator fop = h - th * sop;
    const double cov_ff = std::max(0.0, covariance(s, fop, fop));
    if (2.0 * std::sqrt(cov_ff) < kTolNondissipative * std::max(units.k_B * std::abs(th), max_abs_entry(h))) {
      p.fixed_point = true;
      return p;
    }
    const double den = mode.tau * std::sqrt(cov_ff);
    p.dh_dt = -covariance(s, h, fop) / den;
    p.ds_dt = -covariance(s, sop, fop) / den;
  }
  return p;
}

double adiabatic_availability(const DensityState& s, const Operator& h, const Units& units) {
  require_hermitian(h, "Hamiltonian");
  const double entropy = von_neumann_entropy(s, units);
  const DensityState eq = canonical_for_entropy(h, entropy, units);
  return mean_value(s, h) - mean_value(eq, h);
}

double available_energy(const DensityState& s, const Operator& h, double t_r, const Units& units) {
  check_positive(t_r, "T_R");
  const DensityState r = canonical_state(h, t_r, std::nullopt, units);
  return mean_value(s, h) - mean_value(r, h) - t_r * (von_neumann_entropy(s, units) - von_neumann_entropy(r, units));
}

}  // namespace sea
