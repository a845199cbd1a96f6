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

// Random and parameterized state generation.
//
// Purity control: a full-rank Ginibre state at large d has purity near 2/d,
// far below typical targets, and mixing with I/d only lowers purity. So the
// base state is drawn with the largest Ginibre rank r whose expected purity
// (d + r)/(d r + 1) still reaches the target, and the mixing weight eps in
// (1 - eps) base + eps I/d is then bisected onto the target.

#include <array>
#include <cmath>
#include <cstdint>
#include <random>

#include "qadlab/linalg.hpp"
#include "qadlab/rng.hpp"

namespace qadlab {

/// rho = (I + r . sigma) / 2.
inline DensityMatrix qubit_from_bloch(const std::array<double, 3>& r) {
  const double norm = std::sqrt(r[0] * r[0] + r[1] * r[1] + r[2] * r[2]);
  if (norm > 1.0 + 1e-12) {
    throw ValidationError("qubit_from_bloch: |r| = " + std::to_string(norm) +
                          " exceeds 1");
  }
  const Matrix m = 0.5 * (pauli::identity() + r[0] * pauli::x() +
                          r[1] * pauli::y() + r[2] * pauli::z());
  return DensityMatrix(m);
}

/// d x r matrix of iid standard complex Gaussians (E|g|^2 = 1).
inline Matrix complex_gaussian(Eigen::Index rows, Eigen::Index cols, Rng& rng) {
  std::normal_distribution<double> normal(0.0, std::sqrt(0.5));
  Matrix g(rows, cols);
  for (Eigen::Index j = 0; j < cols; ++j) {
    for (Eigen::Index i = 0; i < rows; ++i) {
      const double re = normal(rng);
      const double im = normal(rng);
      g(i, j) = Complex(re, im);
    }
  }
  return g;
}

/// G G^dagger / Tr(G G^dagger) with G a d x r complex Gaussian matrix.
inline DensityMatrix ginibre_density(Eigen::Index d, Eigen::Index rank, Rng& rng) {
  if (d < 1 || rank < 1 || rank > d) {
    throw ValidationError("ginibre_density: rank must be in [1, d]");
  }
  const Matrix g = complex_gaussian(d, rank, rng);
  return DensityMatrix::normalized(g * g.adjoint());
}

/// Haar-random pure state.
inline Vector haar_vector(Eigen::Index d, Rng& rng) {
  Vector v = complex_gaussian(d, 1, rng).col(0);
  return v / v.norm();
}

/// Haar-random unitary via QR of a Ginibre matrix with the phase correction.
inline Matrix haar_unitary(Eigen::Index d, Rng& rng) {
  const Matrix g = complex_gaussian(d, d, rng);
  Eigen::HouseholderQR<Matrix> qr(g);
  Matrix q = qr.householderQ();
  const Matrix r = qr.matrixQR().triangularView<Eigen::Upper>();
  for (Eigen::Index j = 0; j < d; ++j) {
    const Complex diag = r(j, j);
    if (std::abs(diag) > 0.0) q.col(j) *= diag / std::abs(diag);
  }
  return q;
}

/// E[Tr rho^2] for rho = G G^dagger / Tr, G a d x r Ginibre matrix.
inline double ginibre_expected_purity(Eigen::Index d, Eigen::Index rank) {
  const double dd = static_cast<double>(d);
  const double rr = static_cast<double>(rank);
  return (dd + rr) / (dd * rr + 1.0);
}

/// Largest rank r in [1, d] whose expected Ginibre purity is >= target.
inline Eigen::Index ginibre_rank_for_purity(Eigen::Index d, double target) {
  Eigen::Index best = 1;
  for (Eigen::Index r = 1; r <= d; ++r) {
    if (ginibre_expected_purity(d, r) >= target) best = r;
  }
  return best;
}

struct EnsembleConfig {
  Eigen::Index dim = 2;
  double target_purity = 0.7;
  double purity_tolerance = 0.01;
  std::uint64_t seed = 0;

  void validate() const {
    if (dim < 2) throw ValidationError("EnsembleConfig: dim must be >= 2");
    if (!(target_purity > 1.0 / static_cast<double>(dim) + 1e-9) ||
        target_purity > 1.0) {
      throw ValidationError("EnsembleConfig: target purity must lie in (1/d, 1]");
    }
    if (!(purity_tolerance > 0.0)) {
      throw ValidationError("EnsembleConfig: purity tolerance must be positive");
    }
  }
};

struct PurityControlledState {
  DensityMatrix state;
  Eigen::Index ginibre_rank;
  double mixing;  // weight of I/d
};

/// Ginibre base state mixed with I/d to hit the target purity. The RNG
/// stream is passed explicitly; config.seed is not consulted here.
inline PurityControlledState ginibre_with_purity(const EnsembleConfig& config,
                                                 Rng& rng) {
  config.validate();
  const Eigen::Index d = config.dim;
  const double target = config.target_purity;
  const Matrix mixed = Matrix::Identity(d, d) / static_cast<double>(d);

  Eigen::Index rank = ginibre_rank_for_purity(d, target);
  constexpr int kDrawsPerRank = 64;
  for (;;) {
    for (int attempt = 0; attempt < kDrawsPerRank; ++attempt) {
      const DensityMatrix base = ginibre_density(d, rank, rng);
      if (base.purity() < target) continue;
      // Purity of (1-e) base + e I/d is a decreasing quadratic in e on [0, 1].
      double lo = 0.0;
      double hi = 1.0;
      for (int it = 0; it < 60; ++it) {
        const double mid = 0.5 * (lo + hi);
        const Matrix m = (1.0 - mid) * base.matrix() + mid * mixed;
        const double p = (m * m).trace().real();
        if (p > target) {
          lo = mid;
        } else {
          hi = mid;
        }
      }
      const double eps = 0.5 * (lo + hi);
      DensityMatrix out((1.0 - eps) * base.matrix() + eps * mixed);
      if (std::abs(out.purity() - target) > config.purity_tolerance) {
        throw NumericalError("ginibre_with_purity: bisection missed the target");
      }
      return {std::move(out), rank, eps};
    }
    if (rank == 1) {
      throw NumericalError("ginibre_with_purity: no base state reached the target");
    }
    --rank;
  }
}

}  // namespace qadlab
