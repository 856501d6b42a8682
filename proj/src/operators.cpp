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

#include "sea/operators.hpp"

#include <algorithm>
#include <cmath>

#include <unsupported/Eigen/KroneckerProduct>

namespace sea {

namespace {

void require_same_dim(const Operator& x, const Operator& y) {
  if (x.rows() != y.rows() || x.cols() != y.cols()) {
    throw InvalidInput("operator dimension mismatch: " + std::to_string(x.rows()) + "x" +
                       std::to_string(x.cols()) + " vs " + std::to_string(y.rows()) + "x" +
                       std::to_string(y.cols()));
  }
}

std::vector<Operator> gather(std::span<const Operator> vs, const std::vector<std::size_t>& idx) {
  std::vector<Operator> out;
  out.reserve(idx.size());
  for (auto k : idx) out.push_back(vs[k]);
  return out;
}

}  // namespace

double real_inner(const Operator& x, const Operator& y) {
  require_same_dim(x, y);
  // Re Tr(X^dagger Y) = sum Re(conj(x_ij) y_ij)
  double acc = 0.0;
  const Eigen::Index n = x.size();
  const Complex* px = x.data();
  const Complex* py = y.data();
  for (Eigen::Index i = 0; i < n; ++i) {
    acc += px[i].real() * py[i].real() + px[i].imag() * py[i].imag();
  }
  return acc;
}

double real_norm(const Operator& x) { return std::sqrt(real_inner(x, x)); }

Operator identity(Eigen::Index dim) { return Operator::Identity(dim, dim); }

Operator commutator(const Operator& a, const Operator& b) { return a * b - b * a; }

Operator anticommutator(const Operator& a, const Operator& b) { return a * b + b * a; }

Operator kron(const Operator& a, const Operator& b) {
  Operator out = Eigen::kroneckerProduct(a, b);
  return out;
}

double max_abs_entry(const Operator& x) {
  return x.size() == 0 ? 0.0 : x.cwiseAbs().maxCoeff();
}

bool is_hermitian(const Operator& x, double rel_tol) {
  if (x.rows() != x.cols()) return false;
  if (!x.allFinite()) return false;
  const double scale = std::max(max_abs_entry(x), 1e-300);
  return (x - x.adjoint()).cwiseAbs().maxCoeff() <= rel_tol * scale;
}

void require_hermitian(const Operator& x, std::string_view what) {
  if (x.rows() == 0 || x.rows() != x.cols()) {
    throw InvalidInput(std::string(what) + ": expected a non-empty square matrix");
  }
  if (!x.allFinite()) throw InvalidInput(std::string(what) + ": non-finite entries");
  if (!is_hermitian(x)) throw InvalidInput(std::string(what) + ": matrix is not hermitian");
}

Operator hermitian_part(const Operator& x) { return 0.5 * (x + x.adjoint()); }

double trace_distance(const Operator& a, const Operator& b) {
  require_same_dim(a, b);
  Eigen::SelfAdjointEigenSolver<Operator> es(hermitian_part(a - b), Eigen::EigenvaluesOnly);
  return 0.5 * es.eigenvalues().cwiseAbs().sum();
}

GramMatrix gram_matrix(std::span<const Operator> vs) {
  if (vs.empty()) throw InvalidInput("gram_matrix: empty operator list");
  const auto r = static_cast<Eigen::Index>(vs.size());
  GramMatrix m(r, r);
  for (Eigen::Index k = 0; k < r; ++k) {
    for (Eigen::Index j = k; j < r; ++j) {
      const double v = real_inner(vs[k], vs[j]);
      m(k, j) = v;
      m(j, k) = v;
    }
  }
  return m;
}

double gram_determinant(const GramMatrix& m) {
  if (m.rows() == 0) return 1.0;
  Eigen::LDLT<GramMatrix> ldlt(m);
  return ldlt.vectorD().prod();
}

std::vector<std::size_t> select_independent(std::span<const Operator> vs, double tol_rank) {
  if (vs.empty()) throw InvalidInput("select_independent: empty operator list");
  std::vector<std::size_t> kept;
  for (std::size_t k = 0; k < vs.size(); ++k) {
    auto trial = kept;
    trial.push_back(k);
    const auto ops = gather(vs, trial);
    const GramMatrix m = gram_matrix(ops);
    const double diag_prod = m.diagonal().prod();
    if (!(diag_prod > 0.0)) continue;
    if (gram_determinant(m) > tol_rank * diag_prod) kept = std::move(trial);
  }
  return kept;
}

Operator project_onto(const Operator& b, std::span<const Operator> hs) {
  Operator out = Operator::Zero(b.rows(), b.cols());
  if (hs.empty()) return out;
  const auto idx = select_independent(hs);
  if (idx.empty()) return out;
  const auto basis = gather(hs, idx);
  const GramMatrix m = gram_matrix(basis);
  RealVector rhs(static_cast<Eigen::Index>(basis.size()));
  for (std::size_t k = 0; k < basis.size(); ++k) {
    rhs(static_cast<Eigen::Index>(k)) = real_inner(b, basis[k]);
  }
  const RealVector coeff = m.ldlt().solve(rhs);
  for (std::size_t k = 0; k < basis.size(); ++k) {
    out += coeff(static_cast<Eigen::Index>(k)) * basis[k];
  }
  return out;
}

Operator project_orthogonal(const Operator& b, std::span<const Operator> hs) {
  return b - project_onto(b, hs);
}

double gram_det_ratio_norm(const Operator& b, std::span<const Operator> hs) {
  if (hs.empty()) return real_inner(b, b);
  const GramMatrix mh = gram_matrix(hs);
  const double det_h = gram_determinant(mh);
  if (!(det_h > kTolRank * mh.diagonal().prod())) {
    throw InvalidInput("gram_det_ratio_norm: spanning operators are not linearly independent");
  }
  std::vector<Operator> all;
  all.reserve(hs.size() + 1);
  all.push_back(b);
  all.insert(all.end(), hs.begin(), hs.end());
  const double det_bh = gram_determinant(gram_matrix(all));
  return std::max(0.0, det_bh / det_h);
}

}  // namespace sea
