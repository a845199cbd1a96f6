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

// POVMs: group-covariant orbits of a seed state, SIC-POVMs from a numerically
// located Heisenberg-Weyl fiducial, and complete MUB sets in prime dimension.

#include <cmath>
#include <cstdint>
#include <deque>
#include <limits>
#include <numbers>
#include <optional>
#include <string>
#include <utility>
#include <vector>

#include "qadlab/groups.hpp"
#include "qadlab/linalg.hpp"
#include "qadlab/rng.hpp"

namespace qadlab {

struct PovmProvenance {
  std::string group;
  std::string seed;
};

/// A set of PSD effects summing to the identity (to 1e-8, Frobenius).
///
/// When every effect has rank one the POVM also carries the unit vector
/// |phi_m> spanning each effect; group-covariant builders pass the orbit
/// vectors directly, other effects are diagonalized once at construction.
class Povm {
 public:
  Povm(std::vector<Matrix> effects, std::vector<std::string> labels,
       std::optional<PovmProvenance> provenance = std::nullopt,
       std::vector<Vector> outcome_states = {})
      : effects_(std::move(effects)),
        labels_(std::move(labels)),
        provenance_(std::move(provenance)),
        states_(std::move(outcome_states)) {
    if (effects_.empty()) {
      throw ValidationError("Povm: no effects");
    }
    if (labels_.size() != effects_.size()) {
      throw ValidationError("Povm: label count does not match effect count");
    }
    dim_ = effects_.front().rows();
    Matrix sum = Matrix::Zero(dim_, dim_);
    bool all_rank_one = true;
    std::vector<Vector> derived;
    for (auto& e : effects_) {
      detail::require_square(e, "Povm effect");
      if (e.rows() != dim_) {
        throw ValidationError("Povm: effects of different dimension");
      }
      if (hermiticity_defect(e) > tol::kHermitian * std::max(1.0, e.norm())) {
        throw ValidationError("Povm: effect is not Hermitian");
      }
      e = hermitian_part(e);
      const EigenSystem sys = hermitian_eig(e);
      if (sys.values.minCoeff() < -tol::kHermitian) {
        throw ValidationError("Povm: effect is not PSD, min eigenvalue " +
                              detail::format_norm(sys.values.minCoeff()));
      }
      const double top = sys.values.maxCoeff();
      const auto rank = (sys.values.array() > 1e-10 * std::max(top, 1e-300)).count();
      if (rank == 1) {
        derived.push_back(sys.vectors.col(dim_ - 1));
      } else {
        all_rank_one = false;
      }
      sum += e;
    }
    completeness_ = (sum - Matrix::Identity(dim_, dim_)).norm();
    if (completeness_ > 1e-8) {
      throw ValidationError("Povm: effects do not sum to identity, |sum E - I|_F = " +
                            detail::format_norm(completeness_));
    }
    if (!states_.empty()) {
      if (states_.size() != effects_.size()) {
        throw ValidationError("Povm: outcome state count does not match");
      }
      for (auto& s : states_) {
        if (s.size() != dim_) {
          throw ValidationError("Povm: outcome state of wrong dimension");
        }
        s /= s.norm();
      }
    } else if (all_rank_one) {
      states_ = std::move(derived);
    }
  }

  Eigen::Index dim() const { return dim_; }
  std::size_t size() const { return effects_.size(); }
  const std::vector<Matrix>& effects() const { return effects_; }
  const Matrix& effect(std::size_t m) const { return effects_[m]; }
  const std::vector<std::string>& labels() const { return labels_; }
  const std::optional<PovmProvenance>& provenance() const { return provenance_; }
  double completeness_defect() const { return completeness_; }

  bool is_rank_one() const { return !states_.empty(); }
  const Vector& outcome_state(std::size_t m) const {
    if (states_.empty()) {
      throw ValidationError("Povm: outcome state undefined for effects of rank > 1");
    }
    return states_.at(m);
  }

 private:
  Eigen::Index dim_ = 0;
  std::vector<Matrix> effects_;
  std::vector<std::string> labels_;
  std::optional<PovmProvenance> provenance_;
  std::vector<Vector> states_;
  double completeness_ = 0.0;
};

/// Projective measurement in the computational basis.
inline Povm computational_povm(Eigen::Index d) {
  std::vector<Matrix> effects;
  std::vector<std::string> labels;
  std::vector<Vector> states;
  for (Eigen::Index m = 0; m < d; ++m) {
    states.push_back(basis_vector(d, m));
    effects.push_back(projector(states.back()));
    labels.push_back("|" + std::to_string(m) + ">");
  }
  return Povm(std::move(effects), std::move(labels), std::nullopt,
              std::move(states));
}

/// E_g = (d/|G|) U_g |seed><seed| U_g^dagger. Rejects seeds whose orbit does
/// not twirl to I/d (completeness residual above 1e-6).
inline Povm build_group_povm(const GroupRep& rep, const Vector& seed,
                             std::string seed_description = "seed state") {
  if (seed.size() != rep.dim()) {
    throw ValidationError("build_group_povm: seed dimension " +
                          std::to_string(seed.size()) + " != group dimension " +
                          std::to_string(rep.dim()));
  }
  if (std::abs(seed.norm() - 1.0) > 1e-8) {
    throw ValidationError("build_group_povm: seed is not a unit vector");
  }
  const Vector s = seed / seed.norm();
  const double weight =
      static_cast<double>(rep.dim()) / static_cast<double>(rep.order());
  std::vector<Matrix> effects;
  std::vector<std::string> labels;
  std::vector<Vector> states;
  Matrix sum = Matrix::Zero(rep.dim(), rep.dim());
  for (std::size_t g = 0; g < rep.order(); ++g) {
    states.push_back(rep[g] * s);
    effects.push_back(weight * projector(states.back()));
    labels.push_back(rep.elements()[g].label);
    sum += effects.back();
  }
  const double residual = (sum - Matrix::Identity(rep.dim(), rep.dim())).norm();
  if (residual > 1e-6) {
    throw ValidationError(
        "build_group_povm: orbit of the seed under " + rep.name() +
        " is not complete, |sum E - I|_F = " + detail::format_norm(residual));
  }
  return Povm(std::move(effects), std::move(labels),
              PovmProvenance{rep.name(), std::move(seed_description)},
              std::move(states));
}

// ---------------------------------------------------------------------------
// SIC fiducial search

/// Squared overlaps |<phi|X^a Z^b|phi>|^2 for all (a, b), index a*d + b.
/// phi need not be normalized; values are divided by |phi|^4.
inline std::vector<double> weyl_overlaps(const Vector& phi) {
  const Eigen::Index d = phi.size();
  const double n2 = phi.squaredNorm();
  std::vector<double> out(static_cast<std::size_t>(d * d));
  std::vector<Complex> omega(static_cast<std::size_t>(d));
  for (Eigen::Index k = 0; k < d; ++k) {
    omega[static_cast<std::size_t>(k)] =
        std::polar(1.0, 2.0 * std::numbers::pi * static_cast<double>(k) /
                            static_cast<double>(d));
  }
  for (Eigen::Index a = 0; a < d; ++a) {
    for (Eigen::Index b = 0; b < d; ++b) {
      Complex c = 0.0;
      for (Eigen::Index j = 0; j < d; ++j) {
        c += std::conj(phi((j + a) % d)) *
             omega[static_cast<std::size_t>((b * j) % d)] * phi(j);
      }
      out[static_cast<std::size_t>(a * d + b)] = std::norm(c) / (n2 * n2);
    }
  }
  return out;
}

/// max over (a,b) != (0,0) of | |<phi|X^a Z^b|phi>|^2 - 1/(d+1) |.
inline double zauner_residual(const Vector& phi) {
  const auto ov = weyl_overlaps(phi);
  const double target = 1.0 / static_cast<double>(phi.size() + 1);
  double worst = 0.0;
  for (std::size_t k = 1; k < ov.size(); ++k) {
    worst = std::max(worst, std::abs(ov[k] - target));
  }
  return worst;
}

/// Minimum of the frame potential over unit vectors, (d-1)/(d+1).
inline double frame_potential_minimum(Eigen::Index d) {
  return static_cast<double>(d - 1) / static_cast<double>(d + 1);
}

/// f(psi) = sum_{(a,b) != 0} |<psi|X^a Z^b|psi>|^4 / |psi|^8 and its
/// Wirtinger gradient df/d(conj psi). The real gradient with respect to
/// (Re psi, Im psi) is twice the returned vector.
inline double frame_potential(const Vector& psi, Vector* grad_conj = nullptr) {
  const Eigen::Index d = psi.size();
  const double n = psi.squaredNorm();
  std::vector<Complex> omega(static_cast<std::size_t>(d));
  for (Eigen::Index k = 0; k < d; ++k) {
    omega[static_cast<std::size_t>(k)] =
        std::polar(1.0, 2.0 * std::numbers::pi * static_cast<double>(k) /
                            static_cast<double>(d));
  }
  double numer = 0.0;
  Vector g = Vector::Zero(d);
  Vector dpsi(d);
  Vector dagpsi(d);
  for (Eigen::Index a = 0; a < d; ++a) {
    for (Eigen::Index b = 0; b < d; ++b) {
      if (a == 0 && b == 0) continue;
      // (D psi)_{j+a} = w^{bj} psi_j ; (D^+ psi)_j = w^{-bj} psi_{j+a}.
      for (Eigen::Index j = 0; j < d; ++j) {
        const Complex w = omega[static_cast<std::size_t>((b * j) % d)];
        dpsi((j + a) % d) = w * psi(j);
        dagpsi(j) = std::conj(w) * psi((j + a) % d);
      }
      const Complex c = psi.dot(dpsi);  // <psi|D|psi>
      const double mag2 = std::norm(c);
      numer += mag2 * mag2;
      if (grad_conj != nullptr) {
        g += 2.0 * mag2 * (std::conj(c) * dpsi + c * dagpsi);
      }
    }
  }
  const double n4 = n * n * n * n;
  const double f = numer / n4;
  if (grad_conj != nullptr) {
    *grad_conj = g / n4 - (4.0 * f / n) * psi;
  }
  return f;
}

struct SicSearchConfig {
  int restarts = 64;
  int max_iterations = 5000;
  double tolerance = 1e-10;  // on f - (d-1)/(d+1)
  std::uint64_t seed = 1;
  bool stop_at_first_success = false;
};

struct FiducialVector {
  Eigen::Index dim = 0;
  Vector amplitudes;
  double zauner_residual = std::numeric_limits<double>::infinity();
  double objective = std::numeric_limits<double>::infinity();
  int restart = -1;
  bool converged = false;  // zauner_residual <= 1e-6
};

inline constexpr double kSicResidualThreshold = 1e-6;

namespace detail {

inline RealVector to_real(const Vector& z) {
  RealVector x(2 * z.size());
  x.head(z.size()) = z.real();
  x.tail(z.size()) = z.imag();
  return x;
}

inline Vector to_complex(const RealVector& x) {
  const Eigen::Index d = x.size() / 2;
  Vector z(d);
  for (Eigen::Index j = 0; j < d; ++j) z(j) = Complex(x(j), x(d + j));
  return z;
}

/// One L-BFGS descent of the frame potential from a starting vector.
inline Vector minimize_frame_potential(Vector start, int max_iterations,
                                       double tolerance) {
  const Eigen::Index d = start.size();
  const double f_min = frame_potential_minimum(d);
  constexpr std::size_t kMemory = 8;

  auto evaluate = [](const RealVector& x, RealVector& grad) {
    Vector gc;
    const double f = frame_potential(to_complex(x), &gc);
    grad = 2.0 * to_real(gc);
    return f;
  };

  RealVector x = to_real(start / start.norm());
  RealVector grad;
  double f = evaluate(x, grad);
  std::deque<std::pair<RealVector, RealVector>> history;  // (s, y)
  int polish = 0;
  double checkpoint_gap = f - f_min;
  for (int it = 0; it < max_iterations; ++it) {
    if (f - f_min <= tolerance) {
      // Keep going a little past the stopping gap to tighten the residual.
      if (grad.norm() < 1e-14 || ++polish > 50) break;
    } else if (f - f_min > 1e-4) {
      // Stuck near a non-SIC critical point: give up on this restart.
      if (grad.norm() < 1e-9) break;
      if (it > 0 && it % 500 == 0) {
        if (f - f_min > 0.99 * checkpoint_gap) break;
        checkpoint_gap = f - f_min;
      }
    }
    // Two-loop recursion.
    RealVector q = grad;
    std::vector<double> alpha(history.size());
    for (std::size_t k = history.size(); k-- > 0;) {
      const auto& [s, y] = history[k];
      alpha[k] = s.dot(q) / y.dot(s);
      q -= alpha[k] * y;
    }
    if (!history.empty()) {
      const auto& [s, y] = history.back();
      q *= s.dot(y) / y.squaredNorm();
    } else {
      q *= 1e-1 / std::max(grad.norm(), 1e-300);
    }
    for (std::size_t k = 0; k < history.size(); ++k) {
      const auto& [s, y] = history[k];
      const double beta = y.dot(q) / y.dot(s);
      q += (alpha[k] - beta) * s;
    }
    RealVector dir = -q;
    double slope = grad.dot(dir);
    if (!(slope < 0.0)) {
      history.clear();
      dir = -grad * (1e-1 / std::max(grad.norm(), 1e-300));
      slope = grad.dot(dir);
    }
    // Backtracking Armijo line search.
    double step = 1.0;
    RealVector x_new;
    RealVector g_new;
    double f_new = f;
    bool accepted = false;
    for (int ls = 0; ls < 40; ++ls) {
      x_new = x + step * dir;
      f_new = evaluate(x_new, g_new);
      if (f_new <= f + 1e-4 * step * slope) {
        accepted = true;
        break;
      }
      step *= 0.5;
    }
    if (!accepted) {
      if (history.empty()) break;
      history.clear();
      continue;
    }
    // f is scale invariant; pull the iterate back to the unit sphere.
    const double norm = x_new.norm();
    const RealVector x_unit = x_new / norm;
    const RealVector g_unit = g_new * norm;
    const RealVector s = x_unit - x;
    const RealVector y = g_unit - grad;
    if (s.dot(y) > 1e-18) {
      history.emplace_back(s, y);
      if (history.size() > kMemory) history.pop_front();
    }
    x = x_unit;
    grad = g_unit;
    const bool stalled = std::abs(f - f_new) <= 1e-16 * std::max(1.0, f);
    f = f_new;
    if (stalled && f - f_min <= tolerance) break;
  }
  return to_complex(x);
}

}  // namespace detail

/// Numerical SIC fiducial: minimize the frame potential from random starts,
/// keep the best result (ties resolved by restart index).
inline FiducialVector find_sic_fiducial(Eigen::Index d,
                                        const SicSearchConfig& config = {}) {
  if (d < 2 || d > 13) {
    throw ValidationError("find_sic_fiducial: requires 2 <= d <= 13");
  }
  if (config.restarts < 1 || config.max_iterations < 1) {
    throw ValidationError("find_sic_fiducial: restarts and iterations must be >= 1");
  }
  FiducialVector best;
  best.dim = d;
  for (int r = 0; r < config.restarts; ++r) {
    Rng rng = make_rng(config.seed, {static_cast<std::uint64_t>(d),
                                     static_cast<std::uint64_t>(r)});
    std::normal_distribution<double> normal;
    Vector start(d);
    for (Eigen::Index j = 0; j < d; ++j) {
      const double re = normal(rng);
      const double im = normal(rng);
      start(j) = Complex(re, im);
    }
    Vector phi =
        detail::minimize_frame_potential(start, config.max_iterations,
                                         config.tolerance);
    phi /= phi.norm();
    const double objective = frame_potential(phi);
    if (objective < best.objective) {
      best.amplitudes = phi;
      best.objective = objective;
      best.restart = r;
      best.zauner_residual = zauner_residual(phi);
    }
    if (config.stop_at_first_success &&
        best.zauner_residual <= kSicResidualThreshold) {
      break;
    }
  }
  best.converged = best.zauner_residual <= kSicResidualThreshold;
  return best;
}

/// Wraps a given vector as a fiducial, measuring its Zauner residual.
inline FiducialVector make_fiducial(const Vector& amplitudes) {
  FiducialVector f;
  f.dim = amplitudes.size();
  f.amplitudes = amplitudes / amplitudes.norm();
  f.objective = frame_potential(f.amplitudes);
  f.zauner_residual = zauner_residual(f.amplitudes);
  f.converged = f.zauner_residual <= kSicResidualThreshold;
  return f;
}

/// E_{a,b} = (1/d) X^a Z^b |phi><phi| Z^-b X^-a.
inline Povm build_sic_povm(Eigen::Index d, const FiducialVector& fiducial) {
  if (fiducial.dim != d || fiducial.amplitudes.size() != d) {
    throw ValidationError("build_sic_povm: fiducial dimension mismatch");
  }
  if (!(fiducial.zauner_residual <= kSicResidualThreshold)) {
    throw ValidationError("build_sic_povm: fiducial Zauner residual " +
                          detail::format_norm(fiducial.zauner_residual) +
                          " exceeds 1e-6");
  }
  return build_group_povm(build_heisenberg_weyl(d), fiducial.amplitudes,
                          "SIC fiducial");
}

// ---------------------------------------------------------------------------
// Mutually unbiased bases

inline bool is_prime(Eigen::Index n) {
  if (n < 2) return false;
  for (Eigen::Index k = 2; k * k <= n; ++k) {
    if (n % k == 0) return false;
  }
  return true;
}

/// Worst | |<b,k|b',k'>|^2 - 1/d | over all pairs of distinct bases.
inline double mub_overlap_defect(const std::vector<Matrix>& bases) {
  double worst = 0.0;
  for (std::size_t i = 0; i < bases.size(); ++i) {
    const double target = 1.0 / static_cast<double>(bases[i].rows());
    for (std::size_t j = i + 1; j < bases.size(); ++j) {
      const RealMatrix overlaps = (bases[i].adjoint() * bases[j]).cwiseAbs2();
      worst = std::max(worst, (overlaps.array() - target).abs().maxCoeff());
    }
  }
  return worst;
}

/// d+1 mutually unbiased bases for prime d, each as the columns of a unitary.
/// Basis 0 is computational; for odd d basis m+1 has vectors
/// |m,j>_k = omega^{m k^2 + j k} / sqrt(d); for d = 2 the sigma_x and sigma_y
/// eigenbases.
inline std::vector<Matrix> build_mub(Eigen::Index d) {
  if (!is_prime(d) || d > 13) {
    throw ValidationError("build_mub: d = " + std::to_string(d) +
                          " is not a prime in [2, 13]");
  }
  std::vector<Matrix> bases;
  bases.push_back(Matrix::Identity(d, d));
  if (d == 2) {
    const double s = 1.0 / std::sqrt(2.0);
    Matrix bx(2, 2);
    bx << s, s, s, -s;
    Matrix by(2, 2);
    by << s, s, Complex(0.0, s), Complex(0.0, -s);
    bases.push_back(bx);
    bases.push_back(by);
    return bases;
  }
  const double inv_sqrt = 1.0 / std::sqrt(static_cast<double>(d));
  for (Eigen::Index m = 0; m < d; ++m) {
    Matrix b(d, d);
    for (Eigen::Index j = 0; j < d; ++j) {
      for (Eigen::Index k = 0; k < d; ++k) {
        const Eigen::Index e = (m * k * k + j * k) % d;
        b(k, j) = std::polar(inv_sqrt, 2.0 * std::numbers::pi *
                                           static_cast<double>(e) /
                                           static_cast<double>(d));
      }
    }
    bases.push_back(b);
  }
  return bases;
}

/// E_{b,k} = |b,k><b,k| / (d+1).
inline Povm mub_povm(const std::vector<Matrix>& bases) {
  if (bases.size() < 2) {
    throw ValidationError("mub_povm: need at least two bases");
  }
  const Eigen::Index d = bases.front().rows();
  for (const auto& b : bases) {
    if (b.rows() != d || b.cols() != d) {
      throw ValidationError("mub_povm: bases of inconsistent dimension");
    }
    if (unitarity_defect(b) > 1e-10) {
      throw ValidationError("mub_povm: basis is not orthonormal");
    }
  }
  const double defect = mub_overlap_defect(bases);
  if (defect > 1e-10) {
    throw ValidationError("mub_povm: bases are not mutually unbiased, defect " +
                          detail::format_norm(defect));
  }
  const double weight = 1.0 / static_cast<double>(bases.size());
  std::vector<Matrix> effects;
  std::vector<std::string> labels;
  std::vector<Vector> states;
  for (std::size_t b = 0; b < bases.size(); ++b) {
    for (Eigen::Index k = 0; k < d; ++k) {
      states.push_back(bases[b].col(k));
      effects.push_back(weight * projector(states.back()));
      labels.push_back("b" + std::to_string(b) + ":" + std::to_string(k));
    }
  }
  return Povm(std::move(effects), std::move(labels),
              PovmProvenance{"MUB(" + std::to_string(d) + ")", "basis vectors"},
              std::move(states));
}

}  // namespace qadlab
