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

#include "qadlab/groups.hpp"

#include <gtest/gtest.h>

#include <numeric>

#include "qadlab/ensembles.hpp"
#include "test_util.hpp"

namespace qadlab {
namespace {

Matrix matrix_power(const Matrix& m, int k) {
  Matrix out = Matrix::Identity(m.rows(), m.cols());
  for (int i = 0; i < k; ++i) out = m * out;
  return out;
}

// Up to a global phase.
double phase_distance(const Matrix& a, const Matrix& b) {
  const Complex ov = (b.adjoint() * a).trace();
  const double d = static_cast<double>(a.rows());
  return std::sqrt(std::max(0.0, 2.0 * d - 2.0 * std::abs(ov)));
}

TEST(HeisenbergWeyl, QubitIsPauli) {
  const GroupRep hw = build_heisenberg_weyl(2);
  ASSERT_EQ(hw.order(), 4u);
  EXPECT_LE((hw[0] - pauli::identity()).norm(), 1e-15);
  EXPECT_LE((hw[1] - pauli::z()).norm(), 1e-15);  // X^0 Z^1
  EXPECT_LE((hw[2] - pauli::x()).norm(), 1e-15);  // X^1 Z^0
  EXPECT_LE((hw[3] - pauli::x() * pauli::z()).norm(), 1e-15);
  EXPECT_LE(phase_distance(hw[3], pauli::y()), 1e-12);
  EXPECT_LE((hw[3] - Complex(0.0, -1.0) * pauli::y()).norm(), 1e-15);
  EXPECT_EQ(hw.elements()[3].label, "X^1 Z^1");
}

TEST(HeisenbergWeyl, GeneratorOrders) {
  const Matrix x = shift_operator(3);
  const Matrix z = clock_operator(3);
  EXPECT_LE((matrix_power(x, 3) - Matrix::Identity(3, 3)).norm(), 1e-15);
  EXPECT_LE((matrix_power(z, 3) - Matrix::Identity(3, 3)).norm(), 1e-14);
  const GroupRep hw = build_heisenberg_weyl(3);
  EXPECT_EQ(hw.order(), 9u);
  // Declared generators are X and Z.
  EXPECT_LE((hw[hw.generator_indices()[0]] - x).norm(), 1e-15);
  EXPECT_LE((hw[hw.generator_indices()[1]] - z).norm(), 1e-15);
  EXPECT_THROW(build_heisenberg_weyl(1), ValidationError);
}

TEST(HeisenbergWeyl, TwirlOfAnyProjectorIsMaximallyMixed) {
  // Oracle: explicit double loop over shift/clock powers, independent of twirl().
  Rng rng(21);
  for (Eigen::Index d = 2; d <= 13; ++d) {
    const Matrix x = shift_operator(d);
    const Matrix z = clock_operator(d);
    for (int rep = 0; rep < 20; ++rep) {
      const Vector psi = haar_vector(d, rng);
      Matrix acc = Matrix::Zero(d, d);
      Matrix xa = Matrix::Identity(d, d);
      for (Eigen::Index a = 0; a < d; ++a) {
        Matrix zb = Matrix::Identity(d, d);
        for (Eigen::Index b = 0; b < d; ++b) {
          const Vector v = xa * zb * psi;
          acc += v * v.adjoint();
          zb = z * zb;
        }
        xa = x * xa;
      }
      acc /= static_cast<double>(d * d);
      const Matrix target = Matrix::Identity(d, d) / static_cast<double>(d);
      EXPECT_LE((acc - target).norm(), 1e-10) << "d=" << d;
      EXPECT_LE((twirl(build_heisenberg_weyl(d), projector(psi)) - target).norm(),
                1e-10);
    }
  }
}

TEST(PauliGroup, Basics) {
  const GroupRep p = build_pauli_qubit();
  EXPECT_EQ(p.order(), 4u);
  for (std::size_t g = 0; g < p.order(); ++g) {
    EXPECT_LE((p[g] * p[g] - pauli::identity()).norm(), 1e-15);
  }
  const Matrix avg = twirl(p, projector(basis_vector(2, 0)));
  EXPECT_LE((avg - 0.5 * pauli::identity()).norm(), 1e-15);
}

TEST(CyclicShift, Basics) {
  const GroupRep c2 = build_cyclic_shift(2);
  ASSERT_EQ(c2.order(), 2u);
  EXPECT_LE((c2[1] - pauli::x()).norm(), 1e-15);
  for (Eigen::Index d = 2; d <= 7; ++d) {
    const GroupRep c = build_cyclic_shift(d);
    EXPECT_EQ(c.order(), static_cast<std::size_t>(d));
    EXPECT_LE((matrix_power(shift_operator(d), static_cast<int>(d)) -
               Matrix::Identity(d, d))
                  .norm(),
              1e-15);
    // Orbit of |0> visits every basis vector exactly once.
    const auto orb = orbit(c, basis_vector(d, 0));
    std::vector<int> hits(static_cast<std::size_t>(d), 0);
    for (const auto& v : orb) {
      Eigen::Index k = 0;
      v.cwiseAbs().maxCoeff(&k);
      EXPECT_NEAR(std::abs(v(k)), 1.0, 1e-15);
      ++hits[static_cast<std::size_t>(k)];
    }
    for (int h : hits) EXPECT_EQ(h, 1);
  }
  EXPECT_THROW(build_cyclic_shift(1), ValidationError);
}

TEST(InvolutionPair, HadamardOrbitIsZeroAndPlus) {
  const GroupRep h = build_involution_pair(UnitaryMatrix(pauli::hadamard()), "H");
  ASSERT_EQ(h.order(), 2u);
  const auto orb = orbit(h, basis_vector(2, 0));
  Vector plus(2);
  plus << 1.0 / std::sqrt(2.0), 1.0 / std::sqrt(2.0);
  EXPECT_LE((orb[0] - basis_vector(2, 0)).norm(), 1e-15);
  EXPECT_LE((orb[1] - plus).norm(), 1e-15);
  EXPECT_EQ(orbit_rank(h, basis_vector(2, 0)), 2);
}

TEST(InvolutionPair, SigmaZOrbitDoesNotSpan) {
  const GroupRep z = build_involution_pair(UnitaryMatrix(pauli::z()), "Z");
  const auto orb = orbit(z, basis_vector(2, 0));
  EXPECT_LE((orb[1] - basis_vector(2, 0)).norm(), 1e-15);
  EXPECT_EQ(orbit_rank(z, basis_vector(2, 0)), 1);
}

TEST(InvolutionPair, PhaseInvolutionAcceptedOthersRejected) {
  const Matrix xz = pauli::x() * pauli::z();
  EXPECT_LE((xz * xz + pauli::identity()).norm(), 1e-15);  // (XZ)^2 = -I
  EXPECT_NO_THROW(build_involution_pair(UnitaryMatrix(xz)));
  Matrix s = Matrix::Identity(2, 2);
  s(1, 1) = Complex(0.0, 1.0);  // S^2 = Z
  EXPECT_THROW(build_involution_pair(UnitaryMatrix(s)), ValidationError);
}

TEST(MatchedCyclic, MaximallyMixedGivesPlainShifts) {
  for (Eigen::Index d = 2; d <= 6; ++d) {
    const GroupRep m = build_matched_cyclic(DensityMatrix::maximally_mixed(d));
    const GroupRep c = build_cyclic_shift(d);
    ASSERT_EQ(m.order(), c.order());
    for (std::size_t g = 0; g < m.order(); ++g) {
      EXPECT_LE((m[g] - c[g]).norm(), 1e-12);
    }
    for (Eigen::Index k = 0; k < d; ++k) {
      EXPECT_EQ(orbit_rank(m, basis_vector(d, k)), d);
    }
  }
}

TEST(MatchedCyclic, DiagonalStateMatchesExplicitConstruction) {
  // Diagonal rho with distinct entries; V is the permutation sorting the
  // diagonal in descending order.
  Matrix rho = Matrix::Zero(4, 4);
  rho.diagonal() << 0.1, 0.4, 0.2, 0.3;
  const GroupRep m = build_matched_cyclic(DensityMatrix(rho));
  const std::vector<Eigen::Index> order{1, 3, 2, 0};
  Matrix v = Matrix::Zero(4, 4);
  for (Eigen::Index c = 0; c < 4; ++c) v(order[static_cast<std::size_t>(c)], c) = 1.0;
  const Matrix x = shift_operator(4);
  for (int k = 0; k < 4; ++k) {
    const Matrix expected = v * matrix_power(x, k) * v.adjoint();
    EXPECT_LE((m[static_cast<std::size_t>(k)] - expected).norm(), 1e-12) << k;
  }
}

TEST(MatchedCyclic, BlochStateOrbitSpans) {
  const GroupRep m = build_matched_cyclic(qubit_from_bloch({0.3, 0.0, 0.6}));
  EXPECT_EQ(m.order(), 2u);
  EXPECT_EQ(orbit_rank(m, basis_vector(2, 0)), 2);
}

TEST(MatchedCyclic, DeterministicUnderDegeneracy) {
  // Degenerate spectrum in a rotated basis: construction must not depend on
  // which eigenvectors the solver happens to return.
  Rng rng(22);
  const Matrix u = haar_unitary(4, rng);
  Matrix diag = Matrix::Zero(4, 4);
  diag.diagonal() << 0.4, 0.2, 0.2, 0.2;
  const DensityMatrix rho(u * diag * u.adjoint());
  const Matrix v1 = canonical_eigenbasis(rho);
  const Matrix v2 = canonical_eigenbasis(DensityMatrix(rho.matrix() + Matrix::Zero(4, 4)));
  EXPECT_LE((v1 - v2).norm(), 1e-12);
  EXPECT_LE(unitarity_defect(v1), 1e-10);
  const Matrix recon = v1.adjoint() * rho.matrix() * v1;
  EXPECT_NEAR(recon(0, 0).real(), 0.4, 1e-12);
}

TEST(SymmetricGroup, Enumeration) {
  const std::size_t factorial[] = {1, 1, 2, 6, 24, 120};
  for (Eigen::Index d = 2; d <= 5; ++d) {
    const GroupRep s = build_symmetric_group(d);
    EXPECT_EQ(s.order(), factorial[d]);
    EXPECT_EQ(s.generator_indices().size(), d == 2 ? 1u : 2u);
  }
  EXPECT_THROW(build_symmetric_group(6), ValidationError);
}

TEST(ProjectiveClosure, HoldsForEveryBuilder) {
  Rng rng(23);
  std::vector<GroupRep> reps;
  for (Eigen::Index d = 2; d <= 8; ++d) {
    reps.push_back(build_heisenberg_weyl(d));
    reps.push_back(build_cyclic_shift(d));
    reps.push_back(build_matched_cyclic(testing::random_state(d, rng)));
  }
  reps.push_back(build_pauli_qubit());
  reps.push_back(build_involution_pair(UnitaryMatrix(pauli::hadamard())));
  for (Eigen::Index d = 2; d <= 4; ++d) reps.push_back(build_symmetric_group(d));
  for (const auto& rep : reps) {
    EXPECT_LE(max_projective_closure_defect(rep, rng), 1e-8) << rep.name();
  }
}

TEST(ProjectiveClosure, DetectsNonGroup) {
  Matrix t = Matrix::Identity(2, 2);
  t(1, 1) = std::polar(1.0, 0.25 * std::numbers::pi);
  const GroupRep not_closed("T-only",
                            {{"I", UnitaryMatrix::identity(2)}, {"T", UnitaryMatrix(t)}},
                            {1});
  Rng rng(24);
  EXPECT_GT(max_projective_closure_defect(not_closed, rng), 1e-3);
}

TEST(CayleyOperator, DefinedExamples) {
  EXPECT_LE((cayley_operator(build_cyclic_shift(2)) - 2.0 * pauli::x()).norm(), 1e-15);
  EXPECT_LE((cayley_operator(build_heisenberg_weyl(2)) -
             2.0 * (pauli::x() + pauli::z()))
                .norm(),
            1e-15);
  Rng rng(25);
  for (Eigen::Index d = 2; d <= 7; ++d) {
    EXPECT_LE(hermiticity_defect(cayley_operator(build_heisenberg_weyl(d))), 1e-14);
    EXPECT_LE(hermiticity_defect(cayley_operator(
                  build_matched_cyclic(testing::random_state(d, rng)))),
              1e-12);
  }
  const GroupRep no_gens("bare", {{"I", UnitaryMatrix::identity(2)}}, {});
  EXPECT_THROW(cayley_operator(no_gens), ValidationError);
}

TEST(CommutativityResidual, Examples) {
  Rng rng(26);
  for (Eigen::Index d = 2; d <= 6; ++d) {
    EXPECT_NEAR(commutativity_residual(build_heisenberg_weyl(d),
                                       DensityMatrix::maximally_mixed(d)),
                0.0, 1e-15);
  }
  const GroupRep z = build_involution_pair(UnitaryMatrix(pauli::z()), "Z");
  Matrix diag = Matrix::Zero(2, 2);
  diag.diagonal() << 0.7, 0.3;
  EXPECT_EQ(commutativity_residual(z, DensityMatrix(diag)), 0.0);

  // Hand-expanded bracket: A_G = 2 sigma_z, rho = [[0.8, 0.15], [0.15, 0.2]],
  // [A_G, rho] = [[0, 0.6], [-0.6, 0]].
  const DensityMatrix rho = qubit_from_bloch({0.3, 0.0, 0.6});
  const double expected = 0.6 * std::sqrt(2.0) /
                          std::sqrt(0.8 * 0.8 + 2 * 0.15 * 0.15 + 0.2 * 0.2);
  EXPECT_NEAR(commutativity_residual(z, rho), expected, 1e-14);
  EXPECT_GT(expected, 0.99);

  EXPECT_THROW(commutativity_residual(build_heisenberg_weyl(3), rho), ValidationError);
}

TEST(CommutativityResidual, VanishesForFunctionsOfCayleyOperator) {
  Rng rng(27);
  for (Eigen::Index d = 2; d <= 8; ++d) {
    std::vector<GroupRep> reps{build_heisenberg_weyl(d), build_cyclic_shift(d),
                               build_matched_cyclic(testing::random_state(d, rng))};
    for (const auto& rep : reps) {
      const Matrix a = cayley_operator(rep);
      const EigenSystem sys = hermitian_eig(a);
      const DensityMatrix rho = DensityMatrix::normalized(
          hermitian_part(spectral_apply(sys, [](double x) { return std::exp(x); })));
      EXPECT_LE(commutativity_residual(rep, rho), 1e-10) << rep.name();
    }
  }
}

}  // namespace
}  // namespace qadlab
