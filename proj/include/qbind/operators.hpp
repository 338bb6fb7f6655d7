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

// operators.hpp: density matrices and the bipartite toolkit: tensor
// products, partial traces, the correlation term ρ − ρ_A⊗ρ_B and average
// energies.
//
// Index convention: the composite basis index of the pair (i, j), with i in
// subsystem A and j in subsystem B, is γ = i·dim_B + j (0-based), i.e.
// A-major / row-major Kronecker order. Public 1-based helpers map
// (i, j) ↦ (i−1)·dim_B + j.

#pragma once

#include <cmath>
#include <cstddef>
#include <sstream>
#include <utility>

#include "qbind/errors.hpp"
#include "qbind/matrix.hpp"
#include "qbind/spectral.hpp"

namespace qbind {

/// Trace-one, Hermitian, positive-semidefinite operator.
class DensityMatrix {
 public:
  DensityMatrix() = default;

  explicit DensityMatrix(ComplexMatrix m, const Tolerances& tol = {}) {
    require_hermitian(m, tol.validity, "DensityMatrix");
    matrix_ = 0.5 * (m + m.adjoint());
    const cplx tr = matrix_.trace();
    if (std::abs(tr - cplx(1.0, 0.0)) > tol.reconstruction) {
      std::ostringstream os;
      os.precision(17);
      os << "DensityMatrix: trace " << tr.real() << " differs from 1 by more "
         << "than " << tol.reconstruction;
      throw ValidationError(os.str());
    }
    const auto sd = hermitian_eigendecomposition(matrix_);
    if (sd.eigenvalues(0) < -tol.positivity) {
      std::ostringstream os;
      os << "DensityMatrix: negative eigenvalue " << sd.eigenvalues(0);
      throw ValidationError(os.str());
    }
  }

  /// Σ_k p_k |v_k⟩⟨v_k| for a validated probability list and orthonormal
  /// columns; no eigen-check needed.
  static DensityMatrix from_spectrum(const RealVector& p,
                                     const ComplexMatrix& vectors) {
    DensityMatrix out;
    out.matrix_ = vectors * p.cast<cplx>().asDiagonal() * vectors.adjoint();
    out.matrix_ = 0.5 * (out.matrix_ + out.matrix_.adjoint()).eval();
    return out;
  }

  static DensityMatrix maximally_mixed(std::size_t d) {
    const auto n = static_cast<Eigen::Index>(d);
    DensityMatrix out;
    out.matrix_ = ComplexMatrix::Identity(n, n) / static_cast<double>(d);
    return out;
  }

  static DensityMatrix pure(const ComplexVector& psi) {
    if (std::abs(psi.norm() - 1.0) > Tolerances{}.reconstruction) {
      throw ValidationError("DensityMatrix::pure: state is not normalized");
    }
    DensityMatrix out;
    out.matrix_ = psi * psi.adjoint();
    return out;
  }

  /// U ρ U†; the spectrum is untouched so no re-validation happens.
  DensityMatrix transformed(const UnitaryOperator& u) const {
    if (u.dim() != dim()) {
      throw ValidationError("DensityMatrix::transformed: dimension mismatch");
    }
    DensityMatrix out;
    out.matrix_ = u.matrix() * matrix_ * u.matrix().adjoint();
    out.matrix_ = 0.5 * (out.matrix_ + out.matrix_.adjoint()).eval();
    return out;
  }

  const ComplexMatrix& matrix() const noexcept { return matrix_; }
  std::size_t dim() const noexcept {
    return static_cast<std::size_t>(matrix_.rows());
  }

  double purity() const { return (matrix_ * matrix_).trace().real(); }

 private:
  ComplexMatrix matrix_;
};

enum class Subsystem { A, B };

/// Factorization d = dim_A · dim_B with the A-major index convention.
class BipartiteSplit {
 public:
  BipartiteSplit(std::size_t dim_a, std::size_t dim_b)
      : dim_a_(dim_a), dim_b_(dim_b) {
    if (dim_a == 0 || dim_b == 0) {
      throw ValidationError("BipartiteSplit: dimensions must be positive");
    }
  }

  std::size_t dim_a() const noexcept { return dim_a_; }
  std::size_t dim_b() const noexcept { return dim_b_; }
  std::size_t total() const noexcept { return dim_a_ * dim_b_; }

  /// 1-based (i, j) ↦ 1-based γ = (i−1)·dim_B + j.
  std::size_t gamma(std::size_t i, std::size_t j) const {
    if (i < 1 || i > dim_a_ || j < 1 || j > dim_b_) {
      throw ValidationError("BipartiteSplit::gamma: index out of range");
    }
    return (i - 1) * dim_b_ + j;
  }

  /// Inverse of gamma().
  std::pair<std::size_t, std::size_t> pair(std::size_t gamma) const {
    if (gamma < 1 || gamma > total()) {
      throw ValidationError("BipartiteSplit::pair: index out of range");
    }
    return {(gamma - 1) / dim_b_ + 1, (gamma - 1) % dim_b_ + 1};
  }

 private:
  std::size_t dim_a_;
  std::size_t dim_b_;
};

/// Kronecker product A ⊗ B in the A-major layout.
inline ComplexMatrix tensor_product(const ComplexMatrix& a,
                                    const ComplexMatrix& b) {
  ComplexMatrix out(a.rows() * b.rows(), a.cols() * b.cols());
  for (Eigen::Index i = 0; i < a.rows(); ++i) {
    for (Eigen::Index j = 0; j < a.cols(); ++j) {
      out.block(i * b.rows(), j * b.cols(), b.rows(), b.cols()) = a(i, j) * b;
    }
  }
  return out;
}

/// H_A ⊗ I + I ⊗ H_B.
inline HermitianOperator free_hamiltonian(const HermitianOperator& ha,
                                          const HermitianOperator& hb) {
  const auto na = static_cast<Eigen::Index>(ha.dim());
  const auto nb = static_cast<Eigen::Index>(hb.dim());
  return HermitianOperator(
      tensor_product(ha.matrix(), ComplexMatrix::Identity(nb, nb)) +
          tensor_product(ComplexMatrix::Identity(na, na), hb.matrix()),
      ha.unit());
}

namespace detail {

inline void require_split(const ComplexMatrix& m, const BipartiteSplit& split,
                          const char* what) {
  if (m.rows() != m.cols() ||
      static_cast<std::size_t>(m.rows()) != split.total()) {
    std::ostringstream os;
    os << what << ": operator dimension " << m.rows() << "x" << m.cols()
       << " does not match split " << split.dim_a() << "*" << split.dim_b();
    throw ValidationError(os.str());
  }
}

inline ComplexMatrix partial_trace_matrix(const ComplexMatrix& m,
                                          const BipartiteSplit& split,
                                          Subsystem keep) {
  const auto da = static_cast<Eigen::Index>(split.dim_a());
  const auto db = static_cast<Eigen::Index>(split.dim_b());
  if (keep == Subsystem::A) {
    ComplexMatrix out = ComplexMatrix::Zero(da, da);
    for (Eigen::Index j = 0; j < db; ++j) {
      out += m(Eigen::seqN(j, da, db), Eigen::seqN(j, da, db));
    }
    return out;
  }
  ComplexMatrix out = ComplexMatrix::Zero(db, db);
  for (Eigen::Index i = 0; i < da; ++i) {
    out += m.block(i * db, i * db, db, db);
  }
  return out;
}

}  // namespace detail

/// Reduced state of the kept subsystem.
inline DensityMatrix partial_trace(const DensityMatrix& rho,
                                   const BipartiteSplit& split,
                                   Subsystem keep) {
  detail::require_split(rho.matrix(), split, "partial_trace");
  return DensityMatrix(detail::partial_trace_matrix(rho.matrix(), split, keep));
}

/// Partial trace of an arbitrary (not necessarily positive) operator.
inline ComplexMatrix partial_trace(const ComplexMatrix& m,
                                   const BipartiteSplit& split,
                                   Subsystem keep) {
  detail::require_split(m, split, "partial_trace");
  return detail::partial_trace_matrix(m, split, keep);
}

/// χ = ρ − ρ_A ⊗ ρ_B. Both partial traces of χ vanish.
inline ComplexMatrix correlation_term(const DensityMatrix& rho,
                                      const BipartiteSplit& split) {
  detail::require_split(rho.matrix(), split, "correlation_term");
  const ComplexMatrix ra =
      detail::partial_trace_matrix(rho.matrix(), split, Subsystem::A);
  const ComplexMatrix rb =
      detail::partial_trace_matrix(rho.matrix(), split, Subsystem::B);
  return rho.matrix() - tensor_product(ra, rb);
}

/// Re Tr[H ρ]. The imaginary residue must stay below
/// tol · max(1, |Re Tr[Hρ]|).
inline double average_energy(const DensityMatrix& rho,
                             const HermitianOperator& h,
                             double tol = Tolerances{}.reconstruction) {
  if (rho.dim() != h.dim()) {
    std::ostringstream os;
    os << "average_energy: state dimension " << rho.dim()
       << " does not match Hamiltonian dimension " << h.dim();
    throw ValidationError(os.str());
  }
  const cplx e = (h.matrix() * rho.matrix()).trace();
  if (std::abs(e.imag()) > tol * std::max(1.0, std::abs(e.real()))) {
    std::ostringstream os;
    os << "average_energy: imaginary residue " << e.imag();
    throw NumericalError(os.str());
  }
  return e.real();
}

}  // namespace qbind
