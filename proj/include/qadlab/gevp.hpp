// Copyright 2026 The qadlab Authors
//
// Licensed under the Apache License, Version 2.0 (the "License");
// you may not use this file except in compliance with the License.
// You may obtain a copy of the License at
//
//      http://www.apache.org/licenses/LICENSE-2.0
//
// Unless required by applicable law or agreed to in writing, software
// distributed under the License is distributed on an "AS IS" BASIS,
// WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
// See the License for the specific language governing permissions and
// limitations under the License.

#pragma once

// Double-commutator generalized eigenproblem for adaptive group selection.
//
// For a candidate operator basis {B_k} with Hilbert-Schmidt Gram matrix G,
// M_ij = Tr(B_i^+ [rho, [rho, B_j]]) = Tr([rho, B_i]^+ [rho, B_j]) is PSD, and
// M c = lambda G c has lambda_min = 0 exactly when some combination of the
// B_k commutes with rho. The eigenvector of the smallest eigenvalue gives the
// generator A* = sum_k c_k B_k, and U* = exp(i pi A* / |A*|_F).

#include <cmath>
#include <cstdint>
#include <numbers>
#include <string>
#include <vector>

#include "qadlab/estimators.hpp"
#include "qadlab/groups.hpp"
#include "qadlab/linalg.hpp"
#include "qadlab/metrics.hpp"
#include "qadlab/povm.hpp"
#include "qadlab/rng.hpp"

namespace qadlab {

class OperatorBasis {
 public:
  explicit OperatorBasis(std::vector<Matrix> operators)
      : ops_(std::move(operators)) {
    if (ops_.empty()) throw ValidationError("OperatorBasis: empty basis");
    dim_ = ops_.front().rows();
    const auto n = static_cast<Eigen::Index>(ops_.size());
    for (auto& b : ops_) {
      detail::require_square(b, "OperatorBasis");
      if (b.rows() != dim_) {
        throw ValidationError("OperatorBasis: operators of different dimension");
      }
      if (hermiticity_defect(b) > tol::kHermitian * std::max(1.0, b.norm())) {
        throw ValidationError("OperatorBasis: operator is not Hermitian");
      }
      b = hermitian_part(b);
    }
    gram_.resize(n, n);
    for (Eigen::Index i = 0; i < n; ++i) {
      for (Eigen::Index j = 0; j < n; ++j) {
        gram_(i, j) = (ops_[static_cast<std::size_t>(i)].adjoint() *
                       ops_[static_cast<std::size_t>(j)])
                          .trace()
                          .real();
      }
    }
    gram_ = 0.5 * (gram_ + gram_.transpose()).eval();
    const double min_eig =
        Eigen::SelfAdjointEigenSolver<RealMatrix>(gram_).eigenvalues().minCoeff();
    if (!(min_eig > 1e-12)) {
      throw ValidationError("OperatorBasis: Gram matrix is not positive definite");
    }
  }

  Eigen::Index dim() const { return dim_; }
  std::size_t size() const { return ops_.size(); }
  const std::vector<Matrix>& operators() const { return ops_; }
  const Matrix& operator[](std::size_t k) const { return ops_[k]; }
  const RealMatrix& gram() const { return gram_; }

  /// sum_k c_k B_k.
  Matrix combine(const Vector& c) const {
    Matrix a = Matrix::Zero(dim_, dim_);
    for (std::size_t k = 0; k < ops_.size(); ++k) {
      a += c(static_cast<Eigen::Index>(k)) * ops_[k];
    }
    return a;
  }

 private:
  Eigen::Index dim_ = 0;
  std::vector<Matrix> ops_;
  RealMatrix gram_;
};

/// Generalized Gell-Mann matrices normalized to Tr(B_i B_j) = delta_ij:
/// for each pair j < k the symmetric then antisymmetric element, followed by
/// the d - 1 diagonal elements.
inline OperatorBasis gell_mann_basis(Eigen::Index d) {
  if (d < 2) throw ValidationError("gell_mann_basis: d must be >= 2");
  const double s = 1.0 / std::sqrt(2.0);
  std::vector<Matrix> ops;
  for (Eigen::Index j = 0; j < d; ++j) {
    for (Eigen::Index k = j + 1; k < d; ++k) {
      Matrix sym = Matrix::Zero(d, d);
      sym(j, k) = s;
      sym(k, j) = s;
      ops.push_back(sym);
      Matrix anti = Matrix::Zero(d, d);
      anti(j, k) = Complex(0.0, -s);
      anti(k, j) = Complex(0.0, s);
      ops.push_back(anti);
    }
  }
  for (Eigen::Index l = 1; l < d; ++l) {
    const double ll = static_cast<double>(l);
    const double scale = 1.0 / std::sqrt(ll * (ll + 1.0));
    Matrix diag = Matrix::Zero(d, d);
    for (Eigen::Index j = 0; j < l; ++j) diag(j, j) = scale;
    diag(l, l) = -ll * scale;
    ops.push_back(diag);
  }
  return OperatorBasis(std::move(ops));
}

/// M_ij = Tr(B_i^+ [rho, [rho, B_j]]).
inline Matrix double_commutator_matrix(const DensityMatrix& rho,
                                       const OperatorBasis& basis) {
  if (rho.dim() != basis.dim()) {
    throw ValidationError("double_commutator_matrix: dimension mismatch");
  }
  const auto n = static_cast<Eigen::Index>(basis.size());
  std::vector<Matrix> nested;
  nested.reserve(basis.size());
  for (const auto& b : basis.operators()) {
    nested.push_back(commutator(rho.matrix(), commutator(rho.matrix(), b)));
  }
  Matrix m(n, n);
  for (Eigen::Index i = 0; i < n; ++i) {
    for (Eigen::Index j = 0; j < n; ++j) {
      m(i, j) = (basis[static_cast<std::size_t>(i)].adjoint() *
                 nested[static_cast<std::size_t>(j)])
                    .trace();
    }
  }
  return hermitian_part(m);
}

struct GevpResult {
  RealVector eigenvalues;  // ascending
  Matrix coefficients;     // columns c_k with c_i^+ G c_j = delta_ij
};

/// M c = lambda G c for Hermitian M and SPD G, via G = L L^+ and the
/// standard problem L^{-1} M L^{-+} y = lambda y, c = L^{-+} y.
inline GevpResult solve_gevp(const Matrix& m, const Matrix& gram) {
  detail::require_square(m, "solve_gevp");
  detail::require_same_shape(m, gram, "solve_gevp");
  if (hermiticity_defect(gram) > 1e-10 * std::max(1.0, gram.norm())) {
    throw ValidationError("solve_gevp: Gram matrix is not Hermitian");
  }
  Eigen::LLT<Matrix> llt(hermitian_part(gram));
  if (llt.info() != Eigen::Success ||
      llt.matrixL().toDenseMatrix().diagonal().real().minCoeff() <= 1e-12) {
    throw ValidationError("solve_gevp: Gram matrix is not positive definite");
  }
  const Matrix l = llt.matrixL();
  const auto lower = l.triangularView<Eigen::Lower>();
  // C = L^{-1} M L^{-+}
  Matrix tmp = lower.solve(m);
  Matrix c = lower.solve(tmp.adjoint()).adjoint();
  const EigenSystem sys = hermitian_eig(hermitian_part(c));
  GevpResult out;
  out.eigenvalues = sys.values;
  out.coefficients = l.adjoint().triangularView<Eigen::Upper>().solve(sys.vectors);
  return out;
}

inline GevpResult solve_gevp(const Matrix& m, const RealMatrix& gram) {
  return solve_gevp(m, Matrix(gram.cast<Complex>()));
}

struct OptimalGenerator {
  Matrix generator;  // Hermitian, |A*|_F = 1
  UnitaryMatrix unitary;
  double eigenvalue;
  std::size_t index;
};

/// Generator from the smallest eigenvalue (lowest index on ties, which the
/// ascending solver order already provides). The coefficient vector is
/// phased so its largest entry is real positive before combining.
inline OptimalGenerator optimal_generator(const GevpResult& result,
                                          const OperatorBasis& basis) {
  if (result.coefficients.rows() != static_cast<Eigen::Index>(basis.size())) {
    throw ValidationError("optimal_generator: basis size mismatch");
  }
  Vector c = result.coefficients.col(0);
  Eigen::Index pivot = 0;
  c.cwiseAbs().maxCoeff(&pivot);
  c *= std::polar(1.0, -std::arg(c(pivot)));
  Matrix a = hermitian_part(basis.combine(c));
  a /= a.norm();
  UnitaryMatrix u(unitary_exp(a, std::numbers::pi));
  return {a, std::move(u), result.eigenvalues(0), 0};
}

// ---------------------------------------------------------------------------
// Two-stage adaptive protocol

/// Linear-inversion SIC estimate sum_m [(d+1) f_m - 1/d] Pi_m with Pi = d E,
/// projected onto the state space by clipping negative eigenvalues.
inline DensityMatrix sic_linear_inversion(const Povm& sic,
                                          const std::vector<double>& frequencies) {
  const Eigen::Index d = sic.dim();
  if (frequencies.size() != sic.size()) {
    throw ValidationError("sic_linear_inversion: frequency count mismatch");
  }
  const double dd = static_cast<double>(d);
  Matrix est = Matrix::Zero(d, d);
  for (std::size_t m = 0; m < sic.size(); ++m) {
    est += ((dd + 1.0) * frequencies[m] - 1.0 / dd) * (dd * sic.effect(m));
  }
  EigenSystem sys = hermitian_eig(hermitian_part(est));
  sys.values = sys.values.cwiseMax(0.0);
  if (!(sys.values.sum() > 0.0)) {
    throw NumericalError("sic_linear_inversion: estimate has no positive part");
  }
  sys.values /= sys.values.sum();
  return DensityMatrix(hermitian_part(spectral_apply(sys, [](double x) { return x; })));
}

struct AdaptiveReport {
  int d = 0;
  std::uint64_t seed = 0;
  std::size_t n_coarse = 0;
  std::vector<double> lambda_spectrum;
  double delta_q_before = 0.0;  // fixed baseline group vs rho_true
  double delta_q_after = 0.0;   // GEVP-derived group vs rho_true
  double fidelity_gevp_group = 0.0;
  double fidelity_baseline_group = 0.0;
  double coarse_trace_distance = 0.0;
  double generator_commutator = 0.0;  // |[rho_true, A*]|_F
  std::size_t gevp_group_order = 0;
  std::string baseline_group;
};

struct AdaptiveOptions {
  SicSearchConfig sic{16, 5000, 1e-10, 1, true};
  // Use the Born probabilities themselves as stage-1 frequencies (the
  // infinite-shot limit); n_coarse is then only recorded.
  bool exact_probabilities = false;
};

/// Stage 1: n_coarse SIC outcomes and a coarse linear-inversion estimate.
/// Stage 2: GEVP on the coarse estimate and the cyclic group of U*.
/// Stage 3: commutativity residuals and expected-estimator fidelities of the
/// derived group against the plain cyclic-shift baseline.
inline AdaptiveReport adaptive_pipeline(const DensityMatrix& rho_true,
                                        std::size_t n_coarse, Rng& rng,
                                        const AdaptiveOptions& options = {}) {
  const Eigen::Index d = rho_true.dim();
  if (n_coarse < static_cast<std::size_t>(d * d)) {
    throw ValidationError("adaptive_pipeline: n_coarse must be at least d^2 = " +
                          std::to_string(d * d));
  }
  AdaptiveReport report;
  report.d = static_cast<int>(d);
  report.n_coarse = n_coarse;

  const FiducialVector fid = find_sic_fiducial(d, options.sic);
  if (!fid.converged) {
    throw NumericalError("adaptive_pipeline: SIC fiducial search did not converge");
  }
  const Povm sic = build_sic_povm(d, fid);
  const BornDistribution dist = born_probabilities(rho_true, sic);
  std::vector<double> freq(sic.size(), 0.0);
  if (options.exact_probabilities) {
    freq = dist.probabilities;
  } else {
    for (std::size_t k = 0; k < n_coarse; ++k) {
      freq[sample_index(dist, rng)] += 1.0;
    }
    for (double& f : freq) f /= static_cast<double>(n_coarse);
  }
  const DensityMatrix coarse = sic_linear_inversion(sic, freq);
  report.coarse_trace_distance = trace_distance(coarse, rho_true);

  const OperatorBasis basis = gell_mann_basis(d);
  const GevpResult gevp =
      solve_gevp(double_commutator_matrix(coarse, basis), basis.gram());
  report.lambda_spectrum.assign(gevp.eigenvalues.data(),
                                gevp.eigenvalues.data() + gevp.eigenvalues.size());
  const OptimalGenerator gen = optimal_generator(gevp, basis);
  report.generator_commutator = commutator(rho_true.matrix(), gen.generator).norm();

  const GroupRep derived = build_cyclic_from_generator(gen.unitary, "GEVP-cyclic");
  const GroupRep baseline = build_cyclic_shift(d);
  report.gevp_group_order = derived.order();
  report.baseline_group = baseline.name();
  report.delta_q_before = commutativity_residual(baseline, rho_true);
  report.delta_q_after = derived.generator_indices().empty()
                             ? 0.0
                             : commutativity_residual(derived, rho_true);

  const Povm computational = computational_povm(d);
  report.fidelity_gevp_group = uhlmann_fidelity(
      expected_estimator(rho_true, derived, computational), rho_true);
  report.fidelity_baseline_group = uhlmann_fidelity(
      expected_estimator(rho_true, baseline, computational), rho_true);
  return report;
}

}  // namespace qadlab
