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

// Finite (projective) unitary representations used as measurement groups.
//
// A GroupRep is an ordered list of unitaries with labels. Element 0 is always
// the identity. Global phases are irrelevant for everything downstream since
// the estimators only ever conjugate by U_g, so elements are stored without
// any phase convention (HW elements are plain X^a Z^b).

#include <algorithm>
#include <cmath>
#include <cstddef>
#include <limits>
#include <numbers>
#include <numeric>
#include <set>
#include <string>
#include <utility>
#include <vector>

#include "qadlab/linalg.hpp"
#include "qadlab/rng.hpp"

namespace qadlab {

struct GroupElement {
  std::string label;
  UnitaryMatrix unitary;
};

class GroupRep {
 public:
  GroupRep(std::string name, std::vector<GroupElement> elements,
           std::vector<std::size_t> generator_indices)
      : name_(std::move(name)),
        elements_(std::move(elements)),
        generators_(std::move(generator_indices)) {
    if (elements_.empty()) {
      throw ValidationError("GroupRep '" + name_ + "': no elements");
    }
    dim_ = elements_.front().unitary.dim();
    for (const auto& e : elements_) {
      if (e.unitary.dim() != dim_) {
        throw ValidationError("GroupRep '" + name_ +
                              "': elements of different dimension");
      }
    }
    const double id_defect =
        (elements_.front().unitary.matrix() - Matrix::Identity(dim_, dim_))
            .norm();
    if (id_defect > tol::kUnitary) {
      throw ValidationError("GroupRep '" + name_ +
                            "': element 0 is not the identity");
    }
    for (std::size_t g : generators_) {
      if (g >= elements_.size()) {
        throw ValidationError("GroupRep '" + name_ +
                              "': generator index out of range");
      }
    }
  }

  const std::string& name() const { return name_; }
  Eigen::Index dim() const { return dim_; }
  std::size_t order() const { return elements_.size(); }
  const std::vector<GroupElement>& elements() const { return elements_; }
  const std::vector<std::size_t>& generator_indices() const {
    return generators_;
  }
  const Matrix& operator[](std::size_t i) const {
    return elements_[i].unitary.matrix();
  }

 private:
  std::string name_;
  Eigen::Index dim_ = 0;
  std::vector<GroupElement> elements_;
  std::vector<std::size_t> generators_;
};

/// Cyclic shift X|j> = |j+1 mod d>.
inline Matrix shift_operator(Eigen::Index d) {
  Matrix x = Matrix::Zero(d, d);
  for (Eigen::Index j = 0; j < d; ++j) {
    x((j + 1) % d, j) = 1.0;
  }
  return x;
}

/// Clock Z|j> = omega^j |j>, omega = exp(2 pi i / d).
inline Matrix clock_operator(Eigen::Index d) {
  Matrix z = Matrix::Zero(d, d);
  for (Eigen::Index j = 0; j < d; ++j) {
    z(j, j) = std::polar(1.0, 2.0 * std::numbers::pi * static_cast<double>(j) /
                                  static_cast<double>(d));
  }
  return z;
}

/// X^a Z^b.
inline Matrix weyl_operator(Eigen::Index d, Eigen::Index a, Eigen::Index b) {
  Matrix out = Matrix::Zero(d, d);
  for (Eigen::Index j = 0; j < d; ++j) {
    const double phase = 2.0 * std::numbers::pi *
                         static_cast<double>((b * j) % d) /
                         static_cast<double>(d);
    out((j + a) % d, j) = std::polar(1.0, phase);
  }
  return out;
}

inline GroupRep build_heisenberg_weyl(Eigen::Index d) {
  if (d < 2) {
    throw ValidationError("build_heisenberg_weyl: d must be >= 2");
  }
  std::vector<GroupElement> elems;
  elems.reserve(static_cast<std::size_t>(d * d));
  for (Eigen::Index a = 0; a < d; ++a) {
    for (Eigen::Index b = 0; b < d; ++b) {
      elems.push_back({"X^" + std::to_string(a) + " Z^" + std::to_string(b),
                       UnitaryMatrix(weyl_operator(d, a, b))});
    }
  }
  // Element a*d + b; X is (1,0), Z is (0,1).
  return GroupRep("HW(" + std::to_string(d) + ")", std::move(elems),
                  {static_cast<std::size_t>(d), 1});
}

inline GroupRep build_pauli_qubit() {
  std::vector<GroupElement> elems{
      {"I", UnitaryMatrix(pauli::identity())},
      {"X", UnitaryMatrix(pauli::x())},
      {"Y", UnitaryMatrix(pauli::y())},
      {"Z", UnitaryMatrix(pauli::z())},
  };
  return GroupRep("Pauli", std::move(elems), {1, 3});
}

inline GroupRep build_cyclic_shift(Eigen::Index d) {
  if (d < 2) {
    throw ValidationError("build_cyclic_shift: d must be >= 2");
  }
  std::vector<GroupElement> elems;
  const Matrix x = shift_operator(d);
  Matrix power = Matrix::Identity(d, d);
  for (Eigen::Index k = 0; k < d; ++k) {
    elems.push_back({"X^" + std::to_string(k), UnitaryMatrix(power)});
    power = x * power;
  }
  return GroupRep("Z" + std::to_string(d) + "-shift", std::move(elems), {1});
}

/// Phase c and defect |M - c I|_F for the best scalar fit c = Tr(M)/d.
inline std::pair<Complex, double> scalar_fit(const Matrix& m) {
  const Complex c = m.trace() / static_cast<double>(m.rows());
  return {c, (m - c * Matrix::Identity(m.rows(), m.cols())).norm()};
}

/// {I, U} for an involution up to phase, U^2 = e^{i phi} I.
inline GroupRep build_involution_pair(const UnitaryMatrix& u,
                                      std::string label = "U") {
  const auto [phase, defect] = scalar_fit(u.matrix() * u.matrix());
  if (defect > 1e-8 || std::abs(std::abs(phase) - 1.0) > 1e-8) {
    throw ValidationError(
        "build_involution_pair: U^2 is not a phase times identity, defect " +
        detail::format_norm(defect));
  }
  std::string name = "{I," + label + "}";
  std::vector<GroupElement> elems{
      {"I", UnitaryMatrix::identity(u.dim())},
      {std::move(label), u},
  };
  return GroupRep(std::move(name), std::move(elems), {1});
}

/// Powers of U up to the first k with U^k proportional to I (projective
/// order), capped at max_order elements.
inline GroupRep build_cyclic_from_generator(const UnitaryMatrix& u,
                                            std::string name,
                                            std::size_t max_order = 64,
                                            double tolerance = 1e-8) {
  std::vector<GroupElement> elems;
  elems.push_back({"I", UnitaryMatrix::identity(u.dim())});
  Matrix power = u.matrix();
  while (elems.size() < max_order) {
    const double defect = scalar_fit(power).second;
    if (defect <= tolerance) {
      break;
    }
    // Re-unitarize away accumulated rounding before validating.
    Eigen::JacobiSVD<Matrix> svd(power, Eigen::ComputeFullU | Eigen::ComputeFullV);
    power = svd.matrixU() * svd.matrixV().adjoint();
    elems.push_back({"g^" + std::to_string(elems.size()), UnitaryMatrix(power)});
    power = u.matrix() * power;
  }
  std::vector<std::size_t> gens;
  if (elems.size() > 1) {
    gens.push_back(1);
  }
  return GroupRep(std::move(name), std::move(elems), std::move(gens));
}

/// Eigenvectors of a density matrix as columns, ordered by descending
/// eigenvalue. Within a degenerate eigenspace the basis is rebuilt from the
/// projected computational basis vectors so it does not depend on the
/// eigensolver; every column is phased so its largest-magnitude entry (first
/// one on ties) is real positive, and columns inside a block are ordered by
/// the index of that entry.
inline Matrix canonical_eigenbasis(const DensityMatrix& rho,
                                   double degeneracy_tol = 1e-9) {
  const Eigen::Index d = rho.dim();
  const EigenSystem sys = hermitian_eig(rho.matrix());
  std::vector<Eigen::Index> order(static_cast<std::size_t>(d));
  std::iota(order.begin(), order.end(), 0);
  std::reverse(order.begin(), order.end());

  auto pivot_of = [](const Vector& v) {
    const double peak = v.cwiseAbs().maxCoeff();
    for (Eigen::Index i = 0; i < v.size(); ++i) {
      if (std::abs(v(i)) >= peak - 1e-12) return i;
    }
    return Eigen::Index{0};
  };
  auto phase_fix = [&](Vector v) {
    const Eigen::Index p = pivot_of(v);
    return Vector(v * std::polar(1.0, -std::arg(v(p))));
  };

  Matrix out(d, d);
  Eigen::Index col = 0;
  std::size_t start = 0;
  while (start < order.size()) {
    std::size_t stop = start + 1;
    while (stop < order.size() &&
           std::abs(sys.values(order[start]) - sys.values(order[stop])) <=
               degeneracy_tol) {
      ++stop;
    }
    const std::size_t block = stop - start;
    std::vector<Vector> cols;
    if (block == 1) {
      cols.push_back(phase_fix(sys.vectors.col(order[start])));
    } else {
      Matrix p = Matrix::Zero(d, d);
      for (std::size_t k = start; k < stop; ++k) {
        p += projector(sys.vectors.col(order[k]));
      }
      for (Eigen::Index i = 0; i < d && cols.size() < block; ++i) {
        Vector v = p.col(i);
        for (const auto& c : cols) v -= c * c.dot(v);
        const double n = v.norm();
        if (n > 1e-6) cols.push_back(phase_fix(v / n));
      }
      std::stable_sort(cols.begin(), cols.end(),
                       [&](const Vector& a, const Vector& b) {
                         return pivot_of(a) < pivot_of(b);
                       });
    }
    for (const auto& c : cols) out.col(col++) = c;
    start = stop;
  }
  return out;
}

/// Z_d conjugated into the eigenbasis of rho: {V X^k V^dagger}.
inline GroupRep build_matched_cyclic(const DensityMatrix& rho) {
  const Eigen::Index d = rho.dim();
  if (d < 2) {
    throw ValidationError("build_matched_cyclic: d must be >= 2");
  }
  const Matrix v = canonical_eigenbasis(rho);
  const Matrix x = shift_operator(d);
  std::vector<GroupElement> elems;
  elems.push_back({"I", UnitaryMatrix::identity(d)});
  Matrix power = x;
  for (Eigen::Index k = 1; k < d; ++k) {
    elems.push_back({"V X^" + std::to_string(k) + " V^+",
                     UnitaryMatrix(v * power * v.adjoint())});
    power = x * power;
  }
  return GroupRep("matched-Z" + std::to_string(d), std::move(elems), {1});
}

/// Permutation-matrix representation of S_d, d <= 5, in lexicographic order.
/// Generators: the transposition (0 1) and the full cycle.
inline GroupRep build_symmetric_group(Eigen::Index d) {
  if (d < 2 || d > 5) {
    throw ValidationError("build_symmetric_group: requires 2 <= d <= 5");
  }
  std::vector<int> perm(static_cast<std::size_t>(d));
  std::iota(perm.begin(), perm.end(), 0);
  std::vector<GroupElement> elems;
  std::vector<std::size_t> gens;
  std::vector<int> transposition = perm;
  std::swap(transposition[0], transposition[1]);
  std::vector<int> cycle(perm.size());
  for (std::size_t j = 0; j < cycle.size(); ++j) {
    cycle[j] = static_cast<int>((j + 1) % cycle.size());
  }
  do {
    Matrix m = Matrix::Zero(d, d);
    std::string label = "(";
    for (Eigen::Index j = 0; j < d; ++j) {
      m(perm[static_cast<std::size_t>(j)], j) = 1.0;
      label += std::to_string(perm[static_cast<std::size_t>(j)]);
    }
    label += ")";
    if (perm == transposition || perm == cycle) gens.push_back(elems.size());
    elems.push_back({std::move(label), UnitaryMatrix(m)});
  } while (std::next_permutation(perm.begin(), perm.end()));
  return GroupRep("S" + std::to_string(d), std::move(elems), std::move(gens));
}

/// Distance from U_a U_b to the nearest element up to phase,
/// min_W min_phi |U_a U_b - e^{i phi} W|_F. The nearest W maximizes
/// |Tr(W^+ U_a U_b)| and the optimal phase is its argument.
inline double projective_closure_defect(const GroupRep& rep, std::size_t a,
                                        std::size_t b) {
  const Matrix prod = rep[a] * rep[b];
  std::size_t best = 0;
  Complex best_overlap = 0.0;
  for (std::size_t w = 0; w < rep.order(); ++w) {
    const Complex overlap = (rep[w].adjoint() * prod).trace();
    if (std::abs(overlap) > std::abs(best_overlap)) {
      best = w;
      best_overlap = overlap;
    }
  }
  return (prod - std::polar(1.0, std::arg(best_overlap)) * rep[best]).norm();
}

/// Worst closure defect: exhaustive for |G| <= exhaustive_limit, otherwise
/// over `samples` random pairs.
inline double max_projective_closure_defect(const GroupRep& rep, Rng& rng,
                                            std::size_t exhaustive_limit = 16,
                                            std::size_t samples = 100) {
  double worst = 0.0;
  if (rep.order() <= exhaustive_limit) {
    for (std::size_t a = 0; a < rep.order(); ++a) {
      for (std::size_t b = 0; b < rep.order(); ++b) {
        worst = std::max(worst, projective_closure_defect(rep, a, b));
      }
    }
    return worst;
  }
  std::uniform_int_distribution<std::size_t> pick(0, rep.order() - 1);
  for (std::size_t s = 0; s < samples; ++s) {
    const std::size_t a = pick(rng);
    const std::size_t b = pick(rng);
    worst = std::max(worst, projective_closure_defect(rep, a, b));
  }
  return worst;
}

/// (1/|G|) sum_g U_g M U_g^dagger.
inline Matrix twirl(const GroupRep& rep, const Matrix& m) {
  detail::require_same_shape(rep[0], m, "twirl");
  Matrix acc = Matrix::Zero(m.rows(), m.cols());
  for (std::size_t g = 0; g < rep.order(); ++g) {
    acc.noalias() += rep[g] * m * rep[g].adjoint();
  }
  return acc / static_cast<double>(rep.order());
}

inline std::vector<Vector> orbit(const GroupRep& rep, const Vector& psi) {
  if (psi.size() != rep.dim()) {
    throw ValidationError("orbit: dimension mismatch");
  }
  std::vector<Vector> out;
  out.reserve(rep.order());
  for (std::size_t g = 0; g < rep.order(); ++g) out.push_back(rep[g] * psi);
  return out;
}

/// Rank of the span of the orbit of psi.
inline Eigen::Index orbit_rank(const GroupRep& rep, const Vector& psi,
                               double tol = 1e-10) {
  const auto vecs = orbit(rep, psi);
  Matrix stacked(rep.dim(), static_cast<Eigen::Index>(vecs.size()));
  for (std::size_t k = 0; k < vecs.size(); ++k) {
    stacked.col(static_cast<Eigen::Index>(k)) = vecs[k];
  }
  const RealVector gram_eigs = hermitian_eigenvalues(stacked * stacked.adjoint());
  const double cut = tol * std::max(1.0, gram_eigs.maxCoeff());
  return (gram_eigs.array() > cut).count();
}

/// A_G = sum over the distinct declared generators s of (U_s + U_s^dagger).
inline Matrix cayley_operator(const GroupRep& rep) {
  if (rep.generator_indices().empty()) {
    throw ValidationError("cayley_operator: '" + rep.name() +
                          "' has no generators");
  }
  const std::set<std::size_t> unique(rep.generator_indices().begin(),
                                     rep.generator_indices().end());
  Matrix a = Matrix::Zero(rep.dim(), rep.dim());
  for (std::size_t g : unique) {
    a += rep[g] + rep[g].adjoint();
  }
  return a;
}

/// delta_Q(G, rho) = |[A_G, rho]|_F / |rho|_F.
inline double commutativity_residual(const GroupRep& rep,
                                     const DensityMatrix& rho) {
  if (rep.dim() != rho.dim()) {
    throw ValidationError("commutativity_residual: dimension mismatch");
  }
  return commutator(cayley_operator(rep), rho.matrix()).norm() /
         rho.matrix().norm();
}

}  // namespace qadlab
