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

#include "sea/sea_composite.hpp"

#include <array>
#include <cmath>

namespace sea {

namespace {

void check_dims(const Operator& x, Dims dims, const char* what) {
  if (dims.a < 1 || dims.b < 1) throw InvalidInput(std::string(what) + ": subsystem dimensions must be positive");
  if (x.rows() != dims.total() || x.cols() != dims.total()) {
    throw InvalidInput(std::string(what) + ": dimension " + std::to_string(x.rows()) + " does not factorize as " +
                       std::to_string(dims.a) + " x " + std::to_string(dims.b));
  }
}

void check_tau(double tau, const char* what) {
  if (!(tau > 0.0) || !std::isfinite(tau)) throw InvalidInput(std::string(what) + " must be positive and finite");
}

// Perception of x by subsystem `j`: Tr_other[(rho_other on the other factor) x].
Operator perceived(const Operator& x, const CompositeState& c, Subsystem j) {
  const Dims d = c.dims();
  if (j == Subsystem::A) {
    return partial_trace(Operator(kron(identity(d.a), c.rho_b().rho()) * x), d, Subsystem::B);
  }
  return partial_trace(Operator(kron(c.rho_a().rho(), identity(d.b)) * x), d, Subsystem::A);
}

double local_cov(const DensityState& s, const Operator& x, const Operator& y) {
  const Operator& r = s.rho();
  return 0.5 * ((r * x * y).trace().real() + (r * y * x).trace().real());
}

LocalTerms local_terms(const CompositeState& c, Subsystem j, const Operator& h, const Operator& s_op) {
  const DensityState& rj = j == Subsystem::A ? c.rho_a() : c.rho_b();
  const Eigen::Index n = rj.dim();
  const Operator id = identity(n);
  const Operator hp = hermitian_part(perceived(h, c, j));
  const Operator sp = hermitian_part(perceived(s_op, c, j));

  LocalTerms t;
  t.delta_h = hp - mean_value(rj, hp) * id;
  t.delta_s = sp - mean_value(rj, sp) * id;
  t.cov_hh = std::max(0.0, local_cov(rj, t.delta_h, t.delta_h));
  t.cov_ss = std::max(0.0, local_cov(rj, t.delta_s, t.delta_s));
  t.cov_sh = local_cov(rj, t.delta_s, t.delta_h);

  const Operator gamma = sqrt_state(rj).gamma;
  const Operator h_centred = hp - (hp.trace().real() / static_cast<double>(n)) * id;
  const std::array<Operator, 2> span{Operator(2.0 * gamma), Operator(2.0 * gamma * h_centred)};
  t.energy_constraint_active = select_independent(span).size() == 2 && t.cov_hh > 0.0;
  const double coeff = t.energy_constraint_active ? t.cov_sh / t.cov_hh : 0.0;
  t.delta_m = t.delta_s - coeff * t.delta_h;
  t.cov_mm = std::max(0.0, local_cov(rj, t.delta_m, t.delta_m));

  const bool sh_negligible = !(t.cov_ss > kTolTheta * kTolTheta) || t.cov_sh == 0.0 || !(t.cov_hh > 0.0) ||
                             std::abs(t.cov_sh) < kTolTheta * std::sqrt(t.cov_hh * t.cov_ss);
  if (!sh_negligible) t.theta_h = t.cov_hh / t.cov_sh;
  return t;
}

}  // namespace

Operator partial_trace(const Operator& x, Dims dims, Subsystem over) {
  check_dims(x, dims, "partial_trace");
  if (over == Subsystem::B) {
    Operator out = Operator::Zero(dims.a, dims.a);
    for (Eigen::Index a = 0; a < dims.a; ++a)
      for (Eigen::Index a2 = 0; a2 < dims.a; ++a2)
        for (Eigen::Index b = 0; b < dims.b; ++b) out(a, a2) += x(a * dims.b + b, a2 * dims.b + b);
    return out;
  }
  Operator out = Operator::Zero(dims.b, dims.b);
  for (Eigen::Index b = 0; b < dims.b; ++b)
    for (Eigen::Index b2 = 0; b2 < dims.b; ++b2)
      for (Eigen::Index a = 0; a < dims.a; ++a) out(b, b2) += x(a * dims.b + b, a * dims.b + b2);
  return out;
}

DensityState partial_trace(const DensityState& s, Dims dims, Subsystem over, const StateOptions& options) {
  return DensityState::make(hermitian_part(partial_trace(s.rho(), dims, over)), options);
}

CompositeState CompositeState::make(const DensityState& rho_ab, Dims dims, const StateOptions& options) {
  check_dims(rho_ab.rho(), dims, "composite state");
  DensityState a = partial_trace(rho_ab, dims, Subsystem::B, options);
  DensityState b = partial_trace(rho_ab, dims, Subsystem::A, options);
  return CompositeState(rho_ab, std::move(a), std::move(b), dims);
}

LocalPerception local_perceptions(const CompositeState& c, const Operator& h, const Units& units) {
  require_hermitian(h, "Hamiltonian");
  check_dims(h, c.dims(), "Hamiltonian");
  const Operator s_op = entropy_operator(c.state(), units);
  return LocalPerception{local_terms(c, Subsystem::A, h, s_op), local_terms(c, Subsystem::B, h, s_op)};
}

CompositeRhsResult composite_rhs(const CompositeState& c, const Operator& h, double tau_a, double tau_b,
                                 const Units& units) {
  check_tau(tau_a, "tau_A");
  check_tau(tau_b, "tau_B");
  CompositeRhsResult r;
  r.perception = local_perceptions(c, h, units);
  const Operator& ra = c.rho_a().rho();
  const Operator& rb = c.rho_b().rho();
  r.dissipator_a = kron(anticommutator(r.perception.a.delta_m, ra), rb) / (2.0 * units.k_B * tau_a);
  r.dissipator_b = kron(ra, anticommutator(r.perception.b.delta_m, rb)) / (2.0 * units.k_B * tau_b);
  const Operator& rho = c.state().rho();
  r.drho_dt = hermitian_part(Complex(0.0, -1.0 / units.hbar) * commutator(h, rho) + r.dissipator_a + r.dissipator_b);
  r.entropy_rate_a = r.perception.a.cov_mm / (units.k_B * tau_a);
  r.entropy_rate_b = r.perception.b.cov_mm / (units.k_B * tau_b);
  r.entropy_rate = r.entropy_rate_a + r.entropy_rate_b;
  return r;
}

Operator noninteracting_hamiltonian(const Operator& h_a, const Operator& h_b) {
  require_hermitian(h_a, "H_A");
  require_hermitian(h_b, "H_B");
  return kron(h_a, identity(h_b.rows())) + kron(identity(h_a.rows()), h_b);
}

std::pair<Operator, Operator> split_noninteracting(const Operator& h, Dims dims, double tol) {
  require_hermitian(h, "Hamiltonian");
  check_dims(h, dims, "Hamiltonian");
  const double da = static_cast<double>(dims.a);
  const double db = static_cast<double>(dims.b);
  const Operator h_a = hermitian_part(partial_trace(h, dims, Subsystem::B)) / db;
  Operator h_b = hermitian_part(partial_trace(h, dims, Subsystem::A)) / da;
  h_b -= (h.trace().real() / (da * db)) * identity(dims.b);
  const Operator residual = h - noninteracting_hamiltonian(h_a, h_b);
  if (max_abs_entry(residual) > tol * std::max(1.0, max_abs_entry(h))) {
    throw InvalidInput("separability diagnostic requires a noninteracting Hamiltonian (interaction norm " +
                       std::to_string(max_abs_entry(residual)) + ")");
  }
  return {h_a, h_b};
}

SeparabilityReport separability_diagnostic(const CompositeState& c, const Operator& h_a, const Operator& h_b,
                                           const Operator& h_b_alt, double tau_a, double tau_b,
                                           const Units& units) {
  const Dims d = c.dims();
  if (h_a.rows() != d.a || h_b.rows() != d.b || h_b_alt.rows() != d.b) {
    throw InvalidInput("separability_diagnostic: local Hamiltonian dimensions do not match the state");
  }
  const CompositeRhsResult r1 = composite_rhs(c, noninteracting_hamiltonian(h_a, h_b), tau_a, tau_b, units);
  const CompositeRhsResult r2 = composite_rhs(c, noninteracting_hamiltonian(h_a, h_b_alt), tau_a, tau_b, units);
  SeparabilityReport rep;
  rep.reduced_rate_difference_a =
      max_abs_entry(partial_trace(r1.drho_dt, d, Subsystem::B) - partial_trace(r2.drho_dt, d, Subsystem::B));

  const Operator& ra = c.rho_a().rho();
  const Operator& rb = c.rho_b().rho();
  rep.correlation_norm = max_abs_entry(c.state().rho() - kron(ra, rb));
  rep.product_state = rep.correlation_norm <= 1e-12;
  if (rep.product_state) {
    const Operator dra = partial_trace(r1.drho_dt, d, Subsystem::B);
    const Operator drb = partial_trace(r1.drho_dt, d, Subsystem::A);
    rep.product_residual_rate = max_abs_entry(r1.drho_dt - kron(dra, rb) - kron(ra, drb));
  }
  return rep;
}

SeparabilityReport separability_diagnostic(const CompositeState& c, const Operator& h_ab, const Operator& h_b_alt,
                                           double tau_a, double tau_b, const Units& units) {
  const auto [h_a, h_b] = split_noninteracting(h_ab, c.dims());
  return separability_diagnostic(c, h_a, h_b, h_b_alt, tau_a, tau_b, units);
}

}  // namespace sea
