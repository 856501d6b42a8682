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

#include <cmath>
#include <random>

#include "doctest.h"
#include "sea/sea_composite.hpp"
#include "sea/sea_single.hpp"
#include "support.hpp"

using namespace sea;
using namespace sea::testing;

namespace {

// Tr_B X = sum_b (I (x) <b|) X (I (x) |b>).
Operator trace_out_b(const Operator& x, Eigen::Index da, Eigen::Index db) {
  Operator out = Operator::Zero(da, da);
  for (Eigen::Index b = 0; b < db; ++b) {
    Operator ket = Operator::Zero(db, 1);
    ket(b, 0) = 1.0;
    const Operator emb = kron(identity(da), ket);
    out += emb.adjoint() * x * emb;
  }
  return out;
}

Operator trace_out_a(const Operator& x, Eigen::Index da, Eigen::Index db) {
  Operator out = Operator::Zero(db, db);
  for (Eigen::Index a = 0; a < da; ++a) {
    Operator ket = Operator::Zero(da, 1);
    ket(a, 0) = 1.0;
    const Operator emb = kron(ket, identity(db));
    out += emb.adjoint() * x * emb;
  }
  return out;
}

Operator bell_state() {
  Operator psi = Operator::Zero(4, 1);
  psi(0, 0) = psi(3, 0) = 1.0 / std::sqrt(2.0);
  return psi * psi.adjoint();
}

// Entangled mixed state: Bell state mixed with a random full-rank state.
Operator entangled_mixed(std::mt19937_64& rng) {
  return 0.7 * bell_state() + 0.3 * random_density(4, 4, rng);
}

}  // namespace

TEST_CASE("partial trace") {
  std::mt19937_64 rng(131);
  const Operator ra = random_density(2, 2, rng);
  const Operator rb = random_density(3, 3, rng);
  const Dims d{2, 3};
  CHECK(max_abs_entry(partial_trace(kron(ra, rb), d, Subsystem::B) - ra) < 1e-14);
  CHECK(max_abs_entry(partial_trace(kron(ra, rb), d, Subsystem::A) - rb) < 1e-14);
  CHECK(max_abs_entry(partial_trace(bell_state(), Dims{2, 2}, Subsystem::B) - identity(2) / 2.0) < 1e-15);

  for (int trial = 0; trial < 20; ++trial) {
    const Eigen::Index da = 2 + trial % 2, db = 2 + (trial / 2) % 3;
    const DensityState s = make_state(random_density(da * db, 1 + trial % (da * db), rng));
    const DensityState sa = partial_trace(s, Dims{da, db}, Subsystem::B);
    const DensityState sb = partial_trace(s, Dims{da, db}, Subsystem::A);
    CHECK(max_abs_entry(sa.rho() - trace_out_b(s.rho(), da, db)) < 1e-14);
    CHECK(max_abs_entry(sb.rho() - trace_out_a(s.rho(), da, db)) < 1e-14);
    CHECK(sa.rho().trace().real() == doctest::Approx(1.0).epsilon(1e-12));
    CHECK(sa.raw_min_eigenvalue() >= -1e-14);
  }
  CHECK_THROWS_AS(partial_trace(identity(5), Dims{2, 2}, Subsystem::A), InvalidInput);
  CHECK_THROWS_AS(CompositeState::make(make_state(identity(6) / 6.0), Dims{4, 2}), InvalidInput);
}

TEST_CASE("local perceptions") {
  std::mt19937_64 rng(137);
  const DensityState sa = make_state(random_density(2, 2, rng));
  const DensityState sb = make_state(random_density(3, 3, rng));
  const Dims d{2, 3};
  const CompositeState prod = CompositeState::make(make_state(kron(sa.rho(), sb.rho())), d);
  const Operator h = noninteracting_hamiltonian(random_hermitian(2, rng), random_hermitian(3, rng));
  const LocalPerception lp = local_perceptions(prod, h);
  const Operator sa_op = entropy_operator(sa);
  const Operator oracle_a = sa_op - von_neumann_entropy(sa) * identity(2);
  CHECK(max_abs_entry(lp.a.delta_s - oracle_a) < 1e-12);
  const Operator oracle_b = entropy_operator(sb) - von_neumann_entropy(sb) * identity(3);
  CHECK(max_abs_entry(lp.b.delta_s - oracle_b) < 1e-12);
  // Local covariances reduce to the single-system ones on product states.
  const StateFunctionals fa = functionals(sa, partial_trace(h, d, Subsystem::B) / 3.0);
  CHECK(lp.a.cov_ss == doctest::Approx(fa.cov_ss).epsilon(1e-10));
  CHECK(lp.a.cov_hh == doctest::Approx(fa.cov_hh).epsilon(1e-10));

  const CompositeState mixed = CompositeState::make(make_state(identity(6) / 6.0), d);
  CHECK(max_abs_entry(local_perceptions(mixed, h).a.delta_s) < 1e-14);

  for (int trial = 0; trial < 50; ++trial) {
    const CompositeState c = CompositeState::make(make_state(random_density(6, 1 + trial % 6, rng)), d);
    const Operator hr = random_hermitian(6, rng);
    const LocalPerception p = local_perceptions(c, hr);
    CHECK(std::abs((c.rho_a().rho() * p.a.delta_h).trace()) < 1e-12);
    CHECK(std::abs((c.rho_b().rho() * p.b.delta_h).trace()) < 1e-12);
    CHECK(std::abs((c.rho_a().rho() * p.a.delta_s).trace()) < 1e-12);
    CHECK(std::abs((c.rho_b().rho() * p.b.delta_m).trace()) < 1e-12);
  }
}

TEST_CASE("composite rhs conserves trace and energy with nonnegative local entropy terms") {
  std::mt19937_64 rng(139);
  for (int trial = 0; trial < 400; ++trial) {
    const Eigen::Index da = 2 + trial % 2, db = 2 + (trial / 2) % 2;
    const Dims d{da, db};
    const DensityState s = make_state(random_density(da * db, 1 + trial % (da * db), rng));
    const CompositeState c = CompositeState::make(s, d);
    const Operator h = trial % 3 == 0 ? random_hermitian(da * db, rng)
                                      : noninteracting_hamiltonian(random_hermitian(da, rng), random_hermitian(db, rng));
    const CompositeRhsResult r = composite_rhs(c, h, 0.7, 1.9);
    const double scale = std::max(1.0, max_abs_entry(r.drho_dt));
    CHECK(std::abs(r.drho_dt.trace()) < 1e-12 * scale);
    CHECK(std::abs((h * r.drho_dt).trace()) < 1e-10 * scale * max_abs_entry(h));
    CHECK(std::abs((h * r.dissipator_a).trace()) < 1e-10 * scale * max_abs_entry(h));
    CHECK(std::abs((h * r.dissipator_b).trace()) < 1e-10 * scale * max_abs_entry(h));
    CHECK(r.entropy_rate_a >= -1e-12);
    CHECK(r.entropy_rate_b >= -1e-12);
    // Direct contraction d<S>/dt = Tr(rhodot S).
    const double direct = (r.drho_dt * entropy_operator(s)).trace().real();
    CHECK(std::abs(direct - r.entropy_rate) < 1e-10 * std::max(1.0, r.entropy_rate));
  }
}

TEST_CASE("composite equilibrium and pure product cases") {
  const Operator ha = diag({0.0, 1.0});
  const Operator hb = diag({0.0, 0.5, 1.5});
  const DensityState ca = canonical_state(ha, 0.8);
  const DensityState cb = canonical_state(hb, 0.8);
  const CompositeState c = CompositeState::make(make_state(kron(ca.rho(), cb.rho())), Dims{2, 3});
  const CompositeRhsResult r = composite_rhs(c, noninteracting_hamiltonian(ha, hb), 1.0, 1.0);
  CHECK(max_abs_entry(r.perception.a.delta_m) < 1e-12);
  CHECK(max_abs_entry(r.perception.b.delta_m) < 1e-12);
  CHECK(max_abs_entry(r.drho_dt) < 1e-12);

  std::mt19937_64 rng(149);
  const Operator pa = random_density(2, 1, rng);
  const Operator pb = random_density(3, 1, rng);
  const CompositeState pp = CompositeState::make(make_state(kron(pa, pb)), Dims{2, 3});
  const Operator h = random_hermitian(6, rng);
  const CompositeRhsResult u = composite_rhs(pp, h, 1.0, 1.0);
  CHECK(max_abs_entry(u.drho_dt - Complex(0, -1) * commutator(h, pp.state().rho())) < 1e-12);
  CHECK(u.entropy_rate == 0.0);
}

TEST_CASE("strong separability and product preservation") {
  std::mt19937_64 rng(151);
  const Dims d{2, 2};
  for (int trial = 0; trial < 50; ++trial) {
    const Operator ha = random_hermitian(2, rng);
    const Operator hb = random_hermitian(2, rng);
    const Operator hb_alt = random_hermitian(2, rng);

    const CompositeState prod =
        CompositeState::make(make_state(kron(random_density(2, 2, rng), random_density(2, 2, rng))), d);
    const SeparabilityReport rp = separability_diagnostic(prod, ha, hb, hb_alt, 0.5, 2.0);
    CHECK(rp.reduced_rate_difference_a <= 1e-12);
    CHECK(rp.product_state);
    REQUIRE(rp.product_residual_rate.has_value());
    CHECK(*rp.product_residual_rate <= 1e-10);

    const CompositeState ent = CompositeState::make(make_state(entangled_mixed(rng)), d);
    const SeparabilityReport re = separability_diagnostic(ent, ha, hb, hb_alt, 0.5, 2.0);
    CHECK(re.reduced_rate_difference_a <= 1e-12);
    CHECK_FALSE(re.product_state);
    CHECK_FALSE(re.product_residual_rate.has_value());

    // Total-Hamiltonian overload.
    const SeparabilityReport rt = separability_diagnostic(ent, noninteracting_hamiltonian(ha, hb), hb_alt, 0.5, 2.0);
    CHECK(rt.reduced_rate_difference_a <= 1e-12);
  }
  CHECK_THROWS_AS(separability_diagnostic(CompositeState::make(make_state(bell_state()), d), random_hermitian(4, rng),
                                          random_hermitian(2, rng), 1.0, 1.0),
                  InvalidInput);
}

TEST_CASE("reduction to single-system dynamics on product states") {
  std::mt19937_64 rng(157);
  for (int trial = 0; trial < 30; ++trial) {
    const DensityState sa = make_state(random_density(2, 2, rng));
    const DensityState sb = make_state(random_density(3, 3, rng));
    const Operator ha = random_hermitian(2, rng);
    const Operator hb = random_hermitian(3, rng);
    const Dims d{2, 3};
    const CompositeState c = CompositeState::make(make_state(kron(sa.rho(), sb.rho())), d);
    const CompositeRhsResult r = composite_rhs(c, noninteracting_hamiltonian(ha, hb), 0.8, 1.4);
    const Operator reduced_a = partial_trace(r.drho_dt, d, Subsystem::B);
    const Operator reduced_b = partial_trace(r.drho_dt, d, Subsystem::A);
    const SeaRhsResult single_a = sea_rhs(sa, ha, DissipationTime::constant_tau(0.8));
    const SeaRhsResult single_b = sea_rhs(sb, hb, DissipationTime::constant_tau(1.4));
    CHECK(max_abs_entry(reduced_a - single_a.drho_dt) < 1e-10);
    CHECK(max_abs_entry(reduced_b - single_b.drho_dt) < 1e-10);
    CHECK(r.entropy_rate_a == doctest::Approx(single_a.entropy_rate).epsilon(1e-10));
  }
}

TEST_CASE("entangled reduced dynamics differs from single-system SEA of the marginal") {
  std::mt19937_64 rng(163);
  const Dims d{2, 2};
  const CompositeState c = CompositeState::make(make_state(entangled_mixed(rng)), d);
  const Operator ha = diag({0.0, 1.0});
  const Operator hb = diag({0.0, 0.7});
  const CompositeRhsResult r = composite_rhs(c, noninteracting_hamiltonian(ha, hb), 1.0, 1.0);
  const SeaRhsResult single = sea_rhs(c.rho_a(), ha, DissipationTime::constant_tau(1.0));
  const double diff = max_abs_entry(partial_trace(r.drho_dt, d, Subsystem::B) - single.drho_dt);
  MESSAGE("reduced-rate difference vs marginal SEA: " << diff);
  CHECK(diff > 1e-6);
}
