// Copyright 2026 The qbind Authors
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

// matrix.hpp: dense complex matrix aliases and the validated operator types
// (HermitianOperator, UnitaryOperator) used across the library.

#pragma once

#include <Eigen/Dense>

#include <cmath>
#include <complex>
#include <cstddef>
#include <sstream>
#include <string>

#include "qbind/errors.hpp"

namespace qbind {

using cplx = std::complex<double>;
using ComplexMatrix = Eigen::MatrixXcd;
using ComplexVector = Eigen::VectorXcd;
using RealVector = Eigen::VectorXd;

inline constexpr cplx kI{0.0, 1.0};

/// Largest absolute entry; 0 for an empty matrix.
inline double max_abs(const ComplexMatrix& m) {
  return m.size() == 0 ? 0.0 : m.cwiseAbs().maxCoeff();
}

inline bool approx_equal(const ComplexMatrix& a, const ComplexMatrix& b,
                         double tol = 1e-12) {
  return a.rows() == b.rows() && a.cols() == b.cols() &&
         max_abs(a - b) <= tol;
}

inline void require_square(const ComplexMatrix& m, const char* what) {
  if (m.rows() != m.cols() || m.rows() == 0) {
    std::ostringstream os;
    os << what << ": expected a non-empty square matrix, got " << m.rows()
       << "x" << m.cols();
    throw ValidationError(os.str());
  }
}

/// Throws with the worst offending entry if m deviates from m† by more
/// than tol.
inline void require_hermitian(const ComplexMatrix& m, double tol,
                              const char* what) {
  require_square(m, what);
  double worst = -1.0;
  Eigen::Index wi = 0, wj = 0;
  for (Eigen::Index i = 0; i < m.rows(); ++i) {
    for (Eigen::Index j = i; j < m.cols(); ++j) {
      const double dev = std::abs(m(i, j) - std::conj(m(j, i)));
      if (dev > worst) {
        worst = dev;
        wi = i;
        wj = j;
      }
    }
  }
  if (worst > tol) {
    std::ostringstream os;
    os.precision(17);
    os << what << ": matrix is not Hermitian; entry (" << wi << "," << wj
       << ") = " << m(wi, wj) << " but conj of (" << wj << "," << wi
       << ") = " << std::conj(m(wj, wi)) << " (deviation " << worst
       << " > tolerance " << tol << ")";
    throw ValidationError(os.str());
  }
}

enum class EnergyUnit { natural, joule };

/// Square matrix equal to its conjugate transpose. The stored matrix is
/// exactly Hermitian: the input is symmetrized after validation.
class HermitianOperator {
 public:
  HermitianOperator() = default;

  explicit HermitianOperator(ComplexMatrix m,
                             EnergyUnit unit = EnergyUnit::natural,
                             double tol = Tolerances{}.validity)
      : unit_(unit) {
    require_hermitian(m, tol, "HermitianOperator");
    matrix_ = 0.5 * (m + m.adjoint());
  }

  const ComplexMatrix& matrix() const noexcept { return matrix_; }
  std::size_t dim() const noexcept {
    return static_cast<std::size_t>(matrix_.rows());
  }
  EnergyUnit unit() const noexcept { return unit_; }

  HermitianOperator operator+(const HermitianOperator& other) const {
    if (other.dim() != dim()) {
      throw ValidationError("HermitianOperator: dimension mismatch in sum");
    }
    return HermitianOperator(matrix_ + other.matrix_, unit_);
  }

 private:
  ComplexMatrix matrix_;
  EnergyUnit unit_ = EnergyUnit::natural;
};

/// Max-norm of U U† − I.
inline double unitarity_residual(const ComplexMatrix& u) {
  const auto n = u.rows();
  return max_abs(u * u.adjoint() - ComplexMatrix::Identity(n, n));
}

class UnitaryOperator {
 public:
  UnitaryOperator() = default;

  explicit UnitaryOperator(ComplexMatrix m,
                           double tol = Tolerances{}.reconstruction)
      : matrix_(std::move(m)) {
    require_square(matrix_, "UnitaryOperator");
    const double res = unitarity_residual(matrix_);
    if (!(res <= tol)) {
      std::ostringstream os;
      os << "UnitaryOperator: |U U^dagger - I|_max = " << res
         << " exceeds tolerance " << tol;
      throw ValidationError(os.str());
    }
  }

  static UnitaryOperator identity(std::size_t d) {
    const auto n = static_cast<Eigen::Index>(d);
    return UnitaryOperator(ComplexMatrix::Identity(n, n));
  }

  const ComplexMatrix& matrix() const noexcept { return matrix_; }
  std::size_t dim() const noexcept {
    return static_cast<std::size_t>(matrix_.rows());
  }
  UnitaryOperator adjoint() const {
    UnitaryOperator out;
    out.matrix_ = matrix_.adjoint();
    return out;
  }

  /// Product of two validated unitaries; skips the residual check.
  UnitaryOperator operator*(const UnitaryOperator& rhs) const {
    if (rhs.dim() != dim()) {
      throw ValidationError("UnitaryOperator: dimension mismatch in product");
    }
    UnitaryOperator out;
    out.matrix_ = matrix_ * rhs.matrix_;
    return out;
  }

 private:
  ComplexMatrix matrix_;
};

}  // namespace qbind
