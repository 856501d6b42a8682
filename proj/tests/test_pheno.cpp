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
#include <limits>
#include <random>

#include "doctest.h"
#include "sea/pheno.hpp"
#include "sea/sea_single.hpp"
#include "support.hpp"

using namespace sea;
using namespace sea::testing;

namespace {

const Operator kH3 = diag({0.0, 1.0, 2.0});
const Operator kP3 = diag({0.5, 0.2, 0.3});

double fd_entropy_rate(const DensityState& s, const Operator& drho) {
  const double dt = 1e-6;
  return (entropy_of(s.rho() + dt * drho) - entropy_of(s.rho() - dt * drho)) / (2 * dt);
}

}  // namespace

TEST_CASE("pheno mode validation") {
  CHECK_THROWS_AS(PhenoMode::massieu(0.0, 1.0), InvalidInput);
  CHECK_THROWS_AS(PhenoMode::massieu(1.0, -1.0), InvalidInput);
  CHECK_THROWS_AS(PhenoMode::helmholtz_reservoir(-1.0, 1.0), InvalidInput);
  CHECK_THROWS_AS(PhenoMode::heat_interaction(0.0, 1.0), InvalidInput);
  CHECK_NOTHROW(PhenoMode::massieu(std::numeric_limits<double>::infinity(), 1.0));
}

TEST_CASE("fixed points of the Helmholtz modes") {
  std::mt19937_64 rng(167);
  const Operator h = random_hermitian(3, rng);
  const DensityState rr = canonical_state(h, 0.9);
  const PhenoResult res = pheno_rhs(rr, h, PhenoMode::helmholtz_reservoir(0.9, 1.0));
  CHECK(max_abs_entry(res.drho_dt) < 1e-12);
  const PredictedRates pr = predicted_rates(rr, h, PhenoMode::helmholtz_reservoir(0.9, 1.0));
  CHECK(std::abs(pr.dh_dt) < 1e-10);
  CHECK(std::abs(pr.ds_dt) < 1e-10);

  const DensityState can = canonical_state(h, 0.4);
  CHECK(max_abs_entry(pheno_rhs(can, h, PhenoMode::helmholtz_theta_s(1.0)).drho_dt) < 1e-12);
  // theta_S undefined (pure state) is a fixed point.
  const PhenoResult pure = pheno_rhs(make_state(random_density(3, 1, rng)), h, PhenoMode::helmholtz_theta_s(1.0));
  CHECK(pure.fixed_point);
}

TEST_CASE("isoentropic mode conserves entropy and lowers energy") {
  std::mt19937_64 rng(173);
  for (int trial = 0; trial < 300; ++trial) {
    const Eigen::Index n = 2 + trial % 5;
    const DensityState s = make_state(random_density(n, 1 + trial % n, rng));
    const Operator h = random_hermitian(n, rng);
    const PhenoResult r = pheno_rhs(s, h, PhenoMode::helmholtz_theta_s(0.7));
    CHECK(std::abs(r.ds_dt) < 1e-10);
    CHECK(r.dh_dt <= 1e-12);
    CHECK(std::abs(r.drho_dt.trace()) < 1e-12);
  }
}

TEST_CASE("heat interaction keeps dH/dt = T_Q dS/dt") {
  const PhenoResult two = pheno_rhs(make_state(diag({0.9, 0.1})), diag({0.0, 1.0}), PhenoMode::heat_interaction(0.5, 1.0));
  CHECK(std::abs(two.dh_dt - 0.5 * two.ds_dt) <= 1e-10);

  const PhenoResult d3 = pheno_rhs(make_state(kP3), kH3, PhenoMode::heat_interaction(0.5, 1.0));
  REQUIRE_FALSE(d3.fixed_point);
  CHECK(std::abs(d3.dh_dt - 0.5 * d3.ds_dt) <= 1e-10);
  CHECK(std::abs(d3.ds_dt) > 1e-3);

  // Algebraic and temperature forms of theta_Q agree.
  const StateFunctionals f = functionals(make_state(kP3), kH3);
  const double alt = *f.theta_s * (*f.theta_h - 0.5) / (*f.theta_s - 0.5);
  CHECK(*heat_theta(f, 0.5) == doctest::Approx(alt).epsilon(1e-12));

  std::mt19937_64 rng(179);
  std::uniform_real_distribution<double> u(0.1, 3.0);
  for (int trial = 0; trial < 300; ++trial) {
    const Eigen::Index n = 2 + trial % 4;
    const DensityState s = make_state(random_density(n, n, rng));
    const Operator h = random_hermitian(n, rng);
    const double tq = u(rng);
    const PhenoResult r = pheno_rhs(s, h, PhenoMode::heat_interaction(tq, 1.3));
    if (r.fixed_point) continue;
    if (std::abs(r.ds_dt) > 1e-10) CHECK(rel_close(r.dh_dt / r.ds_dt, tq) < 1e-8);
    CHECK(std::abs(r.dh_dt - tq * r.ds_dt) < 1e-10 * std::max(1.0, std::abs(r.dh_dt)));
  }
}

TEST_CASE("heat interaction flags the theta_S = T_Q singularity") {
  const DensityState s = make_state(kP3);
  const StateFunctionals f = functionals(s, kH3);
  const PhenoResult r = pheno_rhs(s, kH3, PhenoMode::heat_interaction(*f.theta_s, 1.0));
  CHECK(r.theta_q_singular);
  CHECK(r.fixed_point);
  CHECK(max_abs_entry(r.drho_dt) == 0.0);
}

TEST_CASE("closed-form rates match the dissipator") {
  std::mt19937_64 rng(181);
  std::uniform_real_distribution<double> u(0.2, 3.0);
  for (int trial = 0; trial < 200; ++trial) {
    const Eigen::Index n = 2 + trial % 4;
    const DensityState s = make_state(random_density(n, n, rng));
    const Operator h = random_hermitian(n, rng);
    const PhenoMode modes[] = {PhenoMode::massieu(u(rng), 0.8), PhenoMode::massieu(-u(rng), 0.8),
                               PhenoMode::helmholtz_theta_s(1.1), PhenoMode::helmholtz_reservoir(u(rng), 0.6),
                               PhenoMode::heat_interaction(u(rng), 0.9)};
    for (const PhenoMode& m : modes) {
      const PhenoResult r = pheno_rhs(s, h, m);
      const PredictedRates p = predicted_rates(s, h, m);
      CHECK(r.fixed_point == p.fixed_point);
      if (r.fixed_point) continue;
      const double sc = std::max(1.0, std::abs(r.dh_dt));
      CHECK(std::abs(p.dh_dt - r.dh_dt) < 1e-8 * sc);
      CHECK(std::abs(p.ds_dt - r.ds_dt) < 1e-8 * std::max(1.0, std::abs(r.ds_dt)));
      CHECK(std::abs(p.ds_dt - fd_entropy_rate(s, r.drho_dt)) < 1e-6 * std::max(1.0, std::abs(p.ds_dt)));
    }
  }
}

TEST_CASE("Massieu mode limits and sign") {
  std::mt19937_64 rng(191);
  for (int trial = 0; trial < 100; ++trial) {
    const Eigen::Index n = 2 + trial % 4;
    const DensityState s = make_state(random_density(n, n, rng));
    const Operator h = random_hermitian(n, rng);
    const StateFunctionals f = functionals(s, h);
    REQUIRE(f.theta_h.has_value());

    // theta = theta_H reproduces SEA with tau_D = tau_G.
    const PhenoResult at_h = pheno_rhs(s, h, PhenoMode::massieu(*f.theta_h, 0.9));
    CHECK(std::abs(at_h.dh_dt) < 1e-10);
    CHECK(std::abs(predicted_rates(s, h, PhenoMode::massieu(*f.theta_h, 0.9)).dh_dt) < 1e-10);
    const SeaRhsResult sea = sea_rhs(s, h, 0.9);
    const Operator sea_diss = sea.drho_dt - Complex(0, -1) * commutator(h, s.rho());
    CHECK(max_abs_entry(at_h.drho_dt - sea_diss) < 1e-10);

    // theta -> infinity.
    const PhenoResult inf = pheno_rhs(s, h, PhenoMode::massieu(std::numeric_limits<double>::infinity(), 0.9));
    CHECK(rel_close(inf.ds_dt, f.cov_ss / (0.9 * std::sqrt(inf.cov_potential))) < 1e-10);
    CHECK(inf.ds_dt > 0.0);

    // tau_G d<G>/dt = +sqrt(cov(G,G)) for constant theta.
    const double theta = 1.7;
    const PhenoResult r = pheno_rhs(s, h, PhenoMode::massieu(theta, 0.9));
    const double dg = r.ds_dt - r.dh_dt / theta;
    CHECK(rel_close(0.9 * dg, std::sqrt(r.cov_potential)) < 1e-10);

    // cov(F_Psi, F_Psi) / cov(M, M) = theta_H theta_S.
    const PhenoResult fpsi = pheno_rhs(s, h, PhenoMode::helmholtz_theta_s(1.0));
    CHECK(rel_close(fpsi.cov_potential / at_h.cov_potential, *f.theta_h * *f.theta_s) < 1e-9);
  }
}

TEST_CASE("adiabatic availability") {
  std::mt19937_64 rng(193);
  const Operator h = random_hermitian(3, rng);
  CHECK(std::abs(adiabatic_availability(canonical_state(h, 1.1), h)) < 1e-10);
  const double eps = 0.37;
  CHECK(adiabatic_availability(make_state(diag({0.0, 1.0})), diag({0.0, eps})) == doctest::Approx(eps).epsilon(1e-12));

  const DensityState s = make_state(diag({0.2, 0.8}));
  const double target = -(0.2 * std::log(0.2) + 0.8 * std::log(0.8));
  const double beta = bisect(
      [&](double b) {
        const double p1 = std::exp(-b) / (1 + std::exp(-b));
        return -(p1 * std::log(p1) + (1 - p1) * std::log(1 - p1)) - target;
      },
      0.0, 30.0);
  const double e_s = std::exp(-beta) / (1 + std::exp(-beta));
  CHECK(adiabatic_availability(s, diag({0.0, 1.0})) == doctest::Approx(0.8 - e_s).epsilon(1e-9));
  CHECK(adiabatic_availability(s, diag({0.0, 1.0})) == doctest::Approx(0.6).epsilon(1e-9));
}

TEST_CASE("available energy") {
  const DensityState s = make_state(diag({0.2, 0.8}));
  const double z = 1 + std::exp(-1.0);
  const double hr = std::exp(-1.0) / z;
  const double sr = -((1 / z) * std::log(1 / z) + hr * std::log(hr));
  const double ss = -(0.2 * std::log(0.2) + 0.8 * std::log(0.8));
  CHECK(available_energy(s, diag({0.0, 1.0}), 1.0) == doctest::Approx(0.8 - hr - (ss - sr)).epsilon(1e-12));
  std::mt19937_64 rng(197);
  const Operator h = random_hermitian(3, rng);
  CHECK(std::abs(available_energy(canonical_state(h, 0.6), h, 0.6)) < 1e-12);

  for (int trial = 0; trial < 100; ++trial) {
    const Eigen::Index n = 2 + trial % 4;
    const DensityState st = make_state(random_density(n, 1 + trial % n, rng));
    const Operator hh = random_hermitian(n, rng);
    const double psi = adiabatic_availability(st, hh);
    const double omega = available_energy(st, hh, 0.8);
    CHECK(psi >= -1e-12);
    CHECK(omega >= -1e-12);
    CHECK(omega >= psi - 1e-10);
  }
}
