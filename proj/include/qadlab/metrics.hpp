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

#include <algorithm>
#include <cmath>
#include <optional>
#include <string>

#include "qadlab/linalg.hpp"

namespace qadlab {

namespace detail {
inline void require_same_dim(const DensityMatrix& a, const DensityMatrix& b,
                             const char* what) {
  if (a.dim() != b.dim()) {
    throw ValidationError(std::string(what) + ": dimension mismatch");
  }
}
}  // namespace detail

/// Uhlmann fidelity, squared convention: (Tr sqrt(sqrt(rho) sigma sqrt(rho)))^2.
inline double uhlmann_fidelity(const DensityMatrix& rho,
                               const DensityMatrix& sigma) {
  detail::require_same_dim(rho, sigma, "uhlmann_fidelity");
  // (|sqrt(rho) sqrt(sigma)|_1)^2; singular values avoid the sqrt-of-noise
  // blowup that eigenvalues of sqrt(rho) sigma sqrt(rho) suffer at low rank.
  const Matrix m = psd_sqrt(rho.matrix()) * psd_sqrt(sigma.matrix());
  const double root_trace = Eigen::JacobiSVD<Matrix>(m).singularValues().sum();
  return std::clamp(root_trace * root_trace, 0.0, 1.0);
}

/// Tr(rho sigma).
inline double linear_fidelity(const DensityMatrix& rho,
                              const DensityMatrix& sigma) {
  detail::require_same_dim(rho, sigma, "linear_fidelity");
  return (rho.matrix() * sigma.matrix()).trace().real();
}

/// (1/2) |rho - sigma|_1.
inline double trace_distance(const DensityMatrix& rho,
                             const DensityMatrix& sigma) {
  detail::require_same_dim(rho, sigma, "trace_distance");
  const RealVector eigs = hermitian_eigenvalues(rho.matrix() - sigma.matrix());
  return std::clamp(0.5 * eigs.cwiseAbs().sum(), 0.0, 1.0);
}

struct StateMetrics {
  double purity = 0.0;
  double kappa = 0.0;                // structural capacity 1 + 1/purity
  double von_neumann_entropy = 0.0;  // bits
  double renyi2_entropy = 0.0;       // bits
};

inline StateMetrics state_metrics(const DensityMatrix& rho) {
  StateMetrics m;
  m.purity = rho.purity();
  m.kappa = 1.0 + 1.0 / m.purity;
  m.renyi2_entropy = -std::log2(m.purity);
  double s = 0.0;
  for (double x : rho.eigenvalues()) {
    if (x > 0.0) s -= x * std::log2(x);
  }
  m.von_neumann_entropy = std::max(s, 0.0);
  return m;
}

/// l2 distance between the ascending spectra.
inline double spectral_error(const DensityMatrix& rho_hat,
                             const DensityMatrix& rho) {
  detail::require_same_dim(rho_hat, rho, "spectral_error");
  return (rho_hat.eigenvalues() - rho.eigenvalues()).norm();
}

/// Number of eigenvalues above tol; default tol is 1e-10 times the largest
/// eigenvalue.
inline Eigen::Index numerical_rank(const Matrix& m,
                                   std::optional<double> tol = std::nullopt) {
  const RealVector eigs = hermitian_eigenvalues(m);
  const double cut = tol.value_or(1e-10 * std::max(eigs.maxCoeff(), 0.0));
  return (eigs.array() > cut).count();
}

}  // namespace qadlab
