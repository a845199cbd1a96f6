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

#include "qadlab/linalg.hpp"

#include <gtest/gtest.h>

#include "qadlab/ensembles.hpp"
#include "test_util.hpp"

namespace qadlab {
namespace {

TEST(HermitianEig, IdentityAndPauliZ) {
  const auto id = hermitian_eig(Matrix::Identity(2, 2));
  EXPECT_NEAR(id.values(0), 1.0, 1e-15);
  EXPECT_NEAR(id.values(1), 1.0, 1e-15);

  const auto z = hermitian_eig(pauli::z());
  EXPECT_NEAR(z.values(0), -1.0, 1e-15);
  EXPECT_NEAR(z.values(1), 1.0, 1e-15);
}

TEST(HermitianEig, BlochStateSpectrum) {
  const auto rho = qubit_from_bloch({0.3, 0.0, 0.6});
  const auto sys = hermitian_eig(rho.matrix());
  // Reported values are rounded from 0.5 (1 -+ 0.671).
  EXPECT_NEAR(sys.values(0), 0.164, 1e-3);
  EXPECT_NEAR(sys.values(1), 0.836, 1e-3);
  EXPECT_NEAR(sys.values(0), 0.5 * (1.0 - std::sqrt(0.45)), 1e-14);
}

TEST(HermitianEig, RandomRoundTrip) {
  Rng rng(11);
  for (Eigen::Index d = 1; d <= 13; ++d) {
    for (int rep = 0; rep < 10; ++rep) {
      const Matrix h = testing::random_hermitian(d, rng);
      const auto sys = hermitian_eig(h);
      const Matrix back = sys.vectors * sys.values.cast<Complex>().asDiagonal() *
                          sys.vectors.adjoint();
      EXPECT_LE((back - h).norm(), 1e-8 * h.norm());
      EXPECT_LE(unitarity_defect(sys.vectors), 1e-10);
      for (Eigen::Index i = 1; i < d; ++i) {
        EXPECT_LE(sys.values(i - 1), sys.values(i));
      }
    }
  }
}

TEST(HermitianEig, RejectsBadInput) {
  EXPECT_THROW(hermitian_eig(Matrix::Zero(2, 3)), ValidationError);
  Matrix m = pauli::x();
  m(0, 1) = 2.0;
  try {
    hermitian_eig(m);
    FAIL() << "expected rejection";
  } catch (const ValidationError& e) {
    EXPECT_NE(std::string(e.what()).find("|H - H^+|_F"), std::string::npos);
  }
}

TEST(PsdSqrt, KnownCases) {
  EXPECT_LE((psd_sqrt(Matrix::Identity(3, 3)) - Matrix::Identity(3, 3)).norm(), 1e-14);
  Matrix p = Matrix::Zero(2, 2);
  p(0, 0) = 4.0;
  p(1, 1) = 9.0;
  const Matrix s = psd_sqrt(p);
  EXPECT_NEAR(s(0, 0).real(), 2.0, 1e-14);
  EXPECT_NEAR(s(1, 1).real(), 3.0, 1e-14);
  EXPECT_NEAR(std::abs(s(0, 1)), 0.0, 1e-14);
}

TEST(PsdSqrt, MultiplyBackOracle) {
  Rng rng(12);
  for (Eigen::Index d = 1; d <= 10; ++d) {
    for (Eigen::Index r = 1; r <= d; ++r) {
      const Matrix p = testing::random_psd(d, r, rng);
      const Matrix s = psd_sqrt(p);
      EXPECT_LE(hermiticity_defect(s), 1e-12 * std::max(1.0, s.norm()));
      EXPECT_LE((s * s - p).norm(), 1e-8 * p.norm());
      EXPECT_GE(hermitian_eigenvalues(s).minCoeff(), -1e-12);
    }
  }
}

TEST(PsdSqrt, ProjectorIsFixedPoint) {
  Rng rng(13);
  for (Eigen::Index d = 2; d <= 8; ++d) {
    const Matrix g = testing::random_psd(d, d, rng);
    const auto sys = hermitian_eig(g);
    const Matrix v = sys.vectors.leftCols(d / 2 + 1);
    const Matrix proj = v * v.adjoint();
    EXPECT_LE((psd_sqrt(proj) - proj).norm(), 1e-10);
  }
}

TEST(PsdSqrt, RejectsIndefinite) {
  EXPECT_THROW(psd_sqrt(pauli::z()), ValidationError);
}

TEST(Commutator, PauliAlgebra) {
  const Matrix c = commutator(pauli::x(), pauli::z());
  EXPECT_LE((c - Complex(0.0, -2.0) * pauli::y()).norm(), 1e-15);
  EXPECT_EQ(commutator(pauli::x(), pauli::x()).norm(), 0.0);
  Matrix a = Matrix::Zero(3, 3);
  Matrix b = Matrix::Zero(3, 3);
  a.diagonal() << 1.0, 2.0, 3.0;
  b.diagonal() << -1.0, 0.5, 7.0;
  EXPECT_EQ(commutator(a, b).norm(), 0.0);
  EXPECT_THROW(commutator(Matrix::Zero(2, 2), Matrix::Zero(3, 3)), ValidationError);
}

TEST(Commutator, ExactAntisymmetry) {
  Rng rng(14);
  for (int rep = 0; rep < 20; ++rep) {
    const Matrix a = complex_gaussian(5, 5, rng);
    const Matrix b = complex_gaussian(5, 5, rng);
    EXPECT_EQ(commutator(a, b), Matrix(-commutator(b, a)));
  }
}

TEST(DensityMatrix, Invariants) {
  EXPECT_THROW(DensityMatrix(Matrix::Identity(2, 2)), ValidationError);  // trace 2
  Matrix skew = Matrix::Identity(2, 2) * 0.5;
  skew(0, 1) = 0.1;
  EXPECT_THROW(DensityMatrix{skew}, ValidationError);
  Matrix negative = Matrix::Zero(2, 2);
  negative(0, 0) = 1.1;
  negative(1, 1) = -0.1;
  EXPECT_THROW(DensityMatrix{negative}, ValidationError);
}

TEST(DensityMatrix, ClipsTinyNegativeEigenvalues) {
  Matrix m = Matrix::Zero(2, 2);
  m(0, 0) = 1.0 + 5e-9;
  m(1, 1) = -5e-9;
  const DensityMatrix rho(m);
  EXPECT_GE(rho.eigenvalues().minCoeff(), 0.0);
  EXPECT_NEAR(rho.matrix().trace().real(), 1.0, 1e-15);
}

TEST(UnitaryMatrix, Validation) {
  EXPECT_NO_THROW(UnitaryMatrix(pauli::hadamard()));
  EXPECT_THROW(UnitaryMatrix(Matrix::Identity(2, 2) * 1.01), ValidationError);
  Rng rng(15);
  const Matrix h = testing::random_hermitian(4, rng);
  EXPECT_NO_THROW(UnitaryMatrix(unitary_exp(h, 0.7)));
}

}  // namespace
}  // namespace qadlab
