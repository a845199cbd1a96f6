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

// Born-rule sampling and the single-copy estimators:
//
//   standard        |phi_m><phi_m|
//   group-averaged  (1/|G|) sum_g U_g |phi_m><phi_m| U_g^dagger
//   expected        sum_m p_m * group-averaged(m)

#include <cstddef>
#include <numeric>
#include <random>
#include <vector>

#include "qadlab/groups.hpp"
#include "qadlab/linalg.hpp"
#include "qadlab/povm.hpp"
#include "qadlab/rng.hpp"

namespace qadlab {

struct BornDistribution {
  std::vector<double> probabilities;
};

struct Outcome {
  std::size_t index = 0;
  Vector state;
};

/// p_m = Tr(rho E_m). Values down to -1e-12 are clipped to zero; the result
/// is renormalized after checking the sum is 1 within 1e-10.
inline BornDistribution born_probabilities(const DensityMatrix& rho,
                                           const Povm& povm) {
  if (rho.dim() != povm.dim()) {
    throw ValidationError("born_probabilities: dimension mismatch");
  }
  BornDistribution dist;
  dist.probabilities.reserve(povm.size());
  for (const auto& e : povm.effects()) {
    double p = (rho.matrix() * e).trace().real();
    if (p < -1e-12) {
      throw NumericalError("born_probabilities: negative probability " +
                           detail::format_norm(p));
    }
    dist.probabilities.push_back(std::max(p, 0.0));
  }
  const double total = std::accumulate(dist.probabilities.begin(),
                                       dist.probabilities.end(), 0.0);
  if (std::abs(total - 1.0) > 1e-10) {
    throw NumericalError("born_probabilities: probabilities sum to " +
                         std::to_string(total));
  }
  for (double& p : dist.probabilities) p /= total;
  return dist;
}

/// Inverse-CDF draw over the stored outcome order.
inline std::size_t sample_index(const BornDistribution& dist, Rng& rng) {
  std::uniform_real_distribution<double> uniform(0.0, 1.0);
  const double u = uniform(rng);
  double cumulative = 0.0;
  std::size_t last_positive = 0;
  for (std::size_t m = 0; m < dist.probabilities.size(); ++m) {
    if (dist.probabilities[m] <= 0.0) continue;
    last_positive = m;
    cumulative += dist.probabilities[m];
    if (u < cumulative) return m;
  }
  // u landed in the rounding gap above the final cumulative sum.
  return last_positive;
}

inline Outcome sample_outcome(const BornDistribution& dist, const Povm& povm,
                              Rng& rng) {
  const std::size_t m = sample_index(dist, rng);
  return {m, povm.outcome_state(m)};
}

inline Outcome outcome_of(const Povm& povm, std::size_t m) {
  return {m, povm.outcome_state(m)};
}

inline DensityMatrix standard_estimator(const Outcome& outcome) {
  return DensityMatrix::pure(outcome.state);
}

/// Group average of the outcome projector (the QAD estimator).
inline DensityMatrix qad_estimator(const GroupRep& rep, const Outcome& outcome) {
  if (outcome.state.size() != rep.dim()) {
    throw ValidationError("qad_estimator: dimension mismatch");
  }
  const Vector phi = outcome.state / outcome.state.norm();
  return DensityMatrix(twirl(rep, projector(phi)));
}

/// E[rho_hat_G] = sum_m p_m (1/|G|) sum_g U_g |phi_m><phi_m| U_g^dagger.
inline DensityMatrix expected_estimator(const DensityMatrix& rho,
                                        const GroupRep& rep, const Povm& povm) {
  if (rho.dim() != rep.dim() || rho.dim() != povm.dim()) {
    throw ValidationError("expected_estimator: dimension mismatch");
  }
  if (!povm.is_rank_one()) {
    throw ValidationError(
        "expected_estimator: POVM has an effect of rank > 1, outcome state undefined");
  }
  const BornDistribution dist = born_probabilities(rho, povm);
  Matrix acc = Matrix::Zero(rho.dim(), rho.dim());
  for (std::size_t m = 0; m < povm.size(); ++m) {
    if (dist.probabilities[m] == 0.0) continue;
    acc += dist.probabilities[m] * projector(povm.outcome_state(m));
  }
  // The twirl is linear, so average the mixture once.
  return DensityMatrix::normalized(twirl(rep, acc));
}

}  // namespace qadlab
