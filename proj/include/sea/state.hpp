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

#include <limits>
#include <optional>
#include <stdexcept>

#include "sea/operators.hpp"

namespace sea {

/// Boltzmann constant and reduced Planck constant. Dimensionless by default.
struct Units {
  double k_B = 1.0;
  double hbar = 1.0;
};

/// Thrown when a matrix cannot be accepted as a density operator.
class InvalidState : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

/// Thrown when a canonical-state target (energy or entropy) is out of range.
class UnreachableTarget : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

inline constexpr double kZeroThreshold = 1e-12;
inline constexpr double kTolTheta = 1e-13;

struct StateOptions {
  /// Eigenvalues below this are exact zeros (kernel members).
  double zero_threshold = kZeroThreshold;
  /// Most negative eigenvalue accepted before rejecting; defaults to -zero_threshold.
  std::optional<double> negative_tolerance;
  double trace_tolerance = 1e-8;
  /// Rescale the surviving spectrum to unit trace after clamping.
  bool renormalize = true;

  /// Accepts any hermitian input, clamps negatives, never rescales. Used for
  /// intermediate Runge-Kutta stages.
  static StateOptions lenient() {
    StateOptions o;
    o.negative_tolerance = std::numeric_limits<double>::infinity();
    o.trace_tolerance = std::numeric_limits<double>::infinity();
    o.renormalize = false;
    return o;
  }
};

/// Validated density operator with a cached spectral decomposition.
class DensityState {
 public:
  static DensityState make(const Operator& rho_raw, const StateOptions& options = {});
  /// rho = gamma^dagger gamma, with the spectrum taken from the singular values
  /// of gamma. Eigenvectors of eigenvalues near zero are resolved to about
  /// eps / sqrt(gap) instead of eps / gap.
  static DensityState from_sqrt(const Operator& gamma, const StateOptions& options = {});

  const Operator& rho() const { return rho_; }
  Eigen::Index dim() const { return rho_.rows(); }
  /// Descending eigenvalues; entries below zero_threshold are exactly 0.
  const RealVector& eigenvalues() const { return eigvals_; }
  /// Columns are eigenvectors, in the order of eigenvalues().
  const Operator& eigenvectors() const { return eigvecs_; }
  double zero_threshold() const { return zero_threshold_; }
  Eigen::Index rank() const { return rank_; }
  bool is_singular() const { return rank_ < dim(); }
  const Operator& range_projector() const { return range_projector_; }
  const Operator& kernel_projector() const { return kernel_projector_; }
  /// Smallest eigenvalue of the raw input, before clamping.
  double raw_min_eigenvalue() const { return raw_min_eig_; }

 private:
  DensityState() = default;
  static DensityState finish(Operator herm, RealVector eigvals, Operator eigvecs, const StateOptions& options);

  Operator rho_;
  RealVector eigvals_;
  Operator eigvecs_;
  double zero_threshold_ = kZeroThreshold;
  Eigen::Index rank_ = 0;
  Operator range_projector_;
  Operator kernel_projector_;
  double raw_min_eig_ = 0.0;
};

DensityState make_state(const Operator& rho_raw, double zero_threshold = kZeroThreshold);

/// Square-root representative gamma = sqrt(rho) (U = I), gamma^dagger gamma = rho.
struct SqrtState {
  Operator gamma;
  DensityState source;
};

SqrtState sqrt_state(const DensityState& s);

/// S = -k_B P_Ran ln(rho), built spectrally so that degenerate eigenspaces are
/// basis independent and the kernel is annihilated.
Operator entropy_operator(const DensityState& s, const Units& units = {});

/// Means, covariances and nonequilibrium temperatures of energy and entropy.
struct StateFunctionals {
  double mean_h = 0.0;
  double mean_s = 0.0;
  double cov_hh = 0.0;
  double cov_sh = 0.0;
  double cov_ss = 0.0;
  /// cov_hh / cov_sh; empty when cov_sh vanishes relative to sqrt(cov_hh cov_ss).
  std::optional<double> theta_h;
  /// cov_sh / cov_ss; empty when cov_ss vanishes.
  std::optional<double> theta_s;
};

StateFunctionals functionals(const DensityState& s, const Operator& h, const Units& units = {});

/// Mean Tr(rho A).
double mean_value(const DensityState& s, const Operator& a);

/// 1/2 Tr(rho {A - <A>, B - <B>}) for hermitian A, B.
double covariance(const DensityState& s, const Operator& a, const Operator& b);

double von_neumann_entropy(const DensityState& s, const Units& units = {});

double purity(const DensityState& s);

/// 2 gamma, H' = 2 gamma H, S' = 2 gamma S, (Delta H)' and (Delta S)'.
struct GradientBundle {
  Operator normalization;
  Operator energy;
  Operator entropy;
  Operator energy_deviation;
  Operator entropy_deviation;
};

GradientBundle gradients(const SqrtState& g, const Operator& h, const Units& units = {});

/// B exp(-beta H) B / Tr[...] with beta = 1/(k_B T); T = +-inf gives beta = 0.
/// `support` defaults to the identity and must be an orthogonal projector.
DensityState canonical_state(const Operator& h, double temperature,
                             const std::optional<Operator>& support = std::nullopt,
                             const Units& units = {});

/// Same as canonical_state but parameterized by beta = 1/(k_B T).
DensityState canonical_state_beta(const Operator& h, double beta,
                                  const std::optional<Operator>& support = std::nullopt);

/// Canonical (or partially canonical on Ran support, which must commute with H)
/// state with Tr(rho H) = energy. Negative temperatures are allowed.
DensityState canonical_for_energy(const Operator& h, double energy,
                                  const std::optional<Operator>& support = std::nullopt);

/// Positive-temperature canonical state with entropy s_target (the minimum
/// energy state at that entropy).
DensityState canonical_for_entropy(const Operator& h, double s_target, const Units& units = {});

/// Inverse temperature beta of the canonical state with energy E (0 at Tr H / d).
double canonical_beta_for_energy(const RealVector& energies, double energy);

}  // namespace sea
