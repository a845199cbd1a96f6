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

// Dense complex matrix helpers and the Hermitian spectral routines used by
// every other header: eigendecomposition, PSD square root, commutators and
// the validated DensityMatrix / UnitaryMatrix value types.

#include <algorithm>
#include <cmath>
#include <complex>
#include <limits>
#include <sstream>
#include <stdexcept>
#include <string>

#include <Eigen/Dense>

namespace qadlab {

using Complex = std::complex<double>;
using Matrix = Eigen::MatrixXcd;
using Vector = Eigen::VectorXcd;
using RealMatrix = Eigen::MatrixXd;
using RealVector = Eigen::VectorXd;

/// Raised when an input violates a documented precondition.
class ValidationError : public std::invalid_argument {
 public:
  using std::invalid_argument::invalid_argument;
};

/// Raised when a numerical procedure cannot deliver its postcondition.
class NumericalError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

namespace tol {
inline constexpr double kHermitian = 1e-10;
inline constexpr double kHermitianInput = 1e-8;
inline constexpr double kTrace = 1e-10;
inline constexpr double kUnitary = 1e-10;
inline constexpr double kClipNegative = 1e-10;
inline constexpr double kRejectNegative = 1e-8;
inline constexpr double kPsdSqrtReject = 1e-6;
}  // namespace tol

namespace detail {

inline std::string format_norm(double value) {
  std::ostringstream os;
  os.precision(3);
  os << std::scientific << value;
  return os.str();
}

inline void require_square(const Matrix& m, const char* what) {
  if (m.rows() != m.cols() || m.rows() == 0) {
    std::ostringstream os;
    os << what << ": expected a non-empty square matrix, got " << m.rows()
       << "x" << m.cols();
    throw ValidationError(os.str());
  }
}

inline void require_same_shape(const Matrix& a, const Matrix& b,
                               const char* what) {
  if (a.rows() != b.rows() || a.cols() != b.cols()) {
    std::ostringstream os;
    os << what << ": dimension mismatch (" << a.rows() << "x" << a.cols()
       << " vs " << b.rows() << "x" << b.cols() << ")";
    throw ValidationError(os.str());
  }
}

inline bool all_finite(const Matrix& m) {
  return m.allFinite();
}

}  // namespace detail

/// Frobenius norm of M - M^dagger.
inline double hermiticity_defect(const Matrix& m) {
  return (m - m.adjoint()).norm();
}

inline Matrix hermitian_part(const Matrix& m) {
  return 0.5 * (m + m.adjoint());
}

inline Matrix commutator(const Matrix& a, const Matrix& b) {
  detail::require_square(a, "commutator");
  detail::require_same_shape(a, b, "commutator");
  return a * b - b * a;
}

inline Matrix projector(const Vector& psi) {
  return psi * psi.adjoint();
}

struct EigenSystem {
  RealVector values;  // ascending
  Matrix vectors;     // columns, unitary
};

/// Eigendecomposition of a Hermitian matrix. Inputs within 1e-8 (relative to
/// max(1, |H|_F)) of Hermitian are symmetrized first; anything further off is
/// rejected with the measured defect in the message.
inline EigenSystem hermitian_eig(const Matrix& h) {
  detail::require_square(h, "hermitian_eig");
  if (!detail::all_finite(h)) {
    throw ValidationError("hermitian_eig: non-finite entries");
  }
  const double defect = hermiticity_defect(h);
  if (defect > tol::kHermitianInput * std::max(1.0, h.norm())) {
    throw ValidationError("hermitian_eig: matrix is not Hermitian, |H - H^+|_F = " +
                          detail::format_norm(defect));
  }
  Eigen::SelfAdjointEigenSolver<Matrix> solver(hermitian_part(h));
  if (solver.info() != Eigen::Success) {
    throw NumericalError("hermitian_eig: eigensolver did not converge");
  }
  return {solver.eigenvalues(), solver.eigenvectors()};
}

inline RealVector hermitian_eigenvalues(const Matrix& h) {
  return hermitian_eig(h).values;
}

/// Applies f to the spectrum of a Hermitian matrix: V f(diag) V^dagger.
template <typename Fn>
Matrix spectral_apply(const EigenSystem& sys, Fn&& f) {
  using Result = decltype(f(0.0));
  Eigen::Matrix<Result, Eigen::Dynamic, 1> mapped(sys.values.size());
  for (Eigen::Index i = 0; i < sys.values.size(); ++i) {
    mapped(i) = f(sys.values(i));
  }
  return sys.vectors * mapped.template cast<Complex>().asDiagonal() *
         sys.vectors.adjoint();
}

/// Principal square root of a positive semidefinite matrix. Eigenvalues in
/// [-1e-6, 0) are treated as rounding noise and clipped to zero.
inline Matrix psd_sqrt(const Matrix& p) {
  const EigenSystem sys = hermitian_eig(p);
  const double scale = std::max(1.0, sys.values.cwiseAbs().maxCoeff());
  if (sys.values.minCoeff() < -tol::kPsdSqrtReject * scale) {
    throw ValidationError("psd_sqrt: matrix is not PSD, min eigenvalue " +
                          detail::format_norm(sys.values.minCoeff()));
  }
  // Eigenvalues below the solver's resolution are zero, not tiny positives.
  const double floor = 10.0 * static_cast<double>(p.rows()) *
                       std::numeric_limits<double>::epsilon() * scale;
  return hermitian_part(spectral_apply(
      sys, [floor](double x) { return x <= floor ? 0.0 : std::sqrt(x); }));
}

/// exp(i t H) for Hermitian H.
inline Matrix unitary_exp(const Matrix& h, double t) {
  const EigenSystem sys = hermitian_eig(h);
  return spectral_apply(sys, [t](double x) { return std::polar(1.0, t * x); });
}

inline double unitarity_defect(const Matrix& u) {
  return (u.adjoint() * u - Matrix::Identity(u.rows(), u.cols())).norm();
}

/// A square matrix with U^dagger U = I to 1e-10 (Frobenius).
class UnitaryMatrix {
 public:
  explicit UnitaryMatrix(Matrix u) : u_(std::move(u)) {
    detail::require_square(u_, "UnitaryMatrix");
    if (!detail::all_finite(u_)) {
      throw ValidationError("UnitaryMatrix: non-finite entries");
    }
    const double defect = unitarity_defect(u_);
    if (defect > tol::kUnitary) {
      throw ValidationError("UnitaryMatrix: |U^+U - I|_F = " +
                            detail::format_norm(defect));
    }
  }

  static UnitaryMatrix identity(Eigen::Index d) {
    return UnitaryMatrix(Matrix::Identity(d, d));
  }

  const Matrix& matrix() const { return u_; }
  Eigen::Index dim() const { return u_.rows(); }
  Matrix adjoint() const { return u_.adjoint(); }

 private:
  Matrix u_;
};

/// A quantum state: Hermitian, unit trace, positive semidefinite.
///
/// Construction symmetrizes inputs that are Hermitian to 1e-10 (relative),
/// clips eigenvalues in [-1e-8, -1e-10) to zero and renormalizes, and rejects
/// anything further from the state space.
class DensityMatrix {
 public:
  explicit DensityMatrix(const Matrix& m) {
    detail::require_square(m, "DensityMatrix");
    if (!detail::all_finite(m)) {
      throw ValidationError("DensityMatrix: non-finite entries");
    }
    const double defect = hermiticity_defect(m);
    if (defect > tol::kHermitian * std::max(1.0, m.norm())) {
      throw ValidationError("DensityMatrix: not Hermitian, |rho - rho^+|_F = " +
                            detail::format_norm(defect));
    }
    rho_ = hermitian_part(m);
    const double trace_defect = std::abs(rho_.trace() - Complex(1.0, 0.0));
    if (trace_defect > tol::kTrace) {
      throw ValidationError("DensityMatrix: |Tr rho - 1| = " +
                            detail::format_norm(trace_defect));
    }
    EigenSystem sys = hermitian_eig(rho_);
    const double min_eig = sys.values.minCoeff();
    if (min_eig < -tol::kRejectNegative) {
      throw ValidationError("DensityMatrix: not PSD, min eigenvalue " +
                            detail::format_norm(min_eig));
    }
    if (min_eig < -tol::kClipNegative) {
      sys.values = sys.values.cwiseMax(0.0);
      sys.values /= sys.values.sum();
      rho_ = hermitian_part(spectral_apply(sys, [](double x) { return x; }));
    }
  }

  /// Divides a PSD Hermitian matrix by its trace before validating.
  static DensityMatrix normalized(const Matrix& m) {
    detail::require_square(m, "DensityMatrix::normalized");
    const double tr = m.trace().real();
    if (!(tr > 0.0)) {
      throw ValidationError("DensityMatrix::normalized: non-positive trace");
    }
    return DensityMatrix(m / tr);
  }

  static DensityMatrix maximally_mixed(Eigen::Index d) {
    return DensityMatrix(Matrix::Identity(d, d) / static_cast<double>(d));
  }

  static DensityMatrix pure(const Vector& psi) {
    const double n = psi.norm();
    if (!(n > 0.0)) {
      throw ValidationError("DensityMatrix::pure: zero vector");
    }
    return DensityMatrix(projector(psi / n));
  }

  const Matrix& matrix() const { return rho_; }
  Eigen::Index dim() const { return rho_.rows(); }
  double purity() const { return (rho_ * rho_).trace().real(); }
  RealVector eigenvalues() const { return hermitian_eigenvalues(rho_); }

 private:
  Matrix rho_;
};

inline Vector basis_vector(Eigen::Index d, Eigen::Index k) {
  Vector v = Vector::Zero(d);
  v(k) = 1.0;
  return v;
}

namespace pauli {
inline Matrix identity() { return Matrix::Identity(2, 2); }
inline Matrix x() {
  Matrix m(2, 2);
  m << 0.0, 1.0, 1.0, 0.0;
  return m;
}
inline Matrix y() {
  Matrix m(2, 2);
  m << 0.0, Complex(0.0, -1.0), Complex(0.0, 1.0), 0.0;
  return m;
}
inline Matrix z() {
  Matrix m(2, 2);
  m << 1.0, 0.0, 0.0, -1.0;
  return m;
}
inline Matrix hadamard() {
  Matrix m(2, 2);
  m << 1.0, 1.0, 1.0, -1.0;
  return m / std::sqrt(2.0);
}
}  // namespace pauli

}  // namespace qadlab
