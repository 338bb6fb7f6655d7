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

// spectral.hpp: Hermitian eigendecomposition by cyclic complex Jacobi
// rotations, and spectral functions built on top of it.

#pragma once

#include <algorithm>
#include <cmath>
#include <cstddef>
#include <numeric>
#include <sstream>
#include <vector>

#include "qbind/matrix.hpp"

namespace qbind {

/// Eigenvalues in nondecreasing order and the matching orthonormal
/// eigenvectors stored as the columns of `eigenvectors`.
struct SpectralDecomposition {
  RealVector eigenvalues;
  ComplexMatrix eigenvectors;

  std::size_t dim() const noexcept {
    return static_cast<std::size_t>(eigenvalues.size());
  }

  ComplexVector vector(std::size_t k) const {
    return eigenvectors.col(static_cast<Eigen::Index>(k));
  }

  /// Σ_k f(ε_k) |v_k⟩⟨v_k|
  template <typename F>
  ComplexMatrix apply(F&& f) const {
    ComplexVector fx(eigenvalues.size());
    for (Eigen::Index k = 0; k < eigenvalues.size(); ++k) {
      fx(k) = f(eigenvalues(k));
    }
    return eigenvectors * fx.asDiagonal() * eigenvectors.adjoint();
  }

  ComplexMatrix reconstruct() const {
    return apply([](double e) { return cplx(e, 0.0); });
  }
};

struct EigenSolverOptions {
  double hermitian_tol = Tolerances{}.validity;
  /// Sweeps stop once the off-diagonal Frobenius mass falls below
  /// relative_offdiag · ‖H‖_F.
  double relative_offdiag = 1e-14;
  /// Eigenvalues closer than degeneracy_tol · max|ε| share a block.
  double degeneracy_tol = 1e-12;
  int max_sweeps = 100;
};

namespace detail {

inline double offdiag_norm2(const ComplexMatrix& a) {
  double s = 0.0;
  for (Eigen::Index j = 0; j < a.cols(); ++j) {
    for (Eigen::Index i = 0; i < a.rows(); ++i) {
      if (i != j) s += std::norm(a(i, j));
    }
  }
  return s;
}

// One Jacobi rotation annihilating a(p,q), p < q. The rotation is the
// product of the phase fix diag(1, conj(u)) on (p,q) and a real Givens
// rotation, V = [[c, s], [-s conj(u), c conj(u)]].
inline void jacobi_rotate(ComplexMatrix& a, ComplexMatrix& v, Eigen::Index p,
                          Eigen::Index q) {
  const cplx apq = a(p, q);
  const double mag = std::abs(apq);
  if (mag == 0.0) return;
  const cplx u = apq / mag;
  const double app = a(p, p).real();
  const double aqq = a(q, q).real();
  const double theta = (aqq - app) / (2.0 * mag);
  const double t = (theta >= 0.0 ? 1.0 : -1.0) /
                   (std::abs(theta) + std::sqrt(theta * theta + 1.0));
  const double c = 1.0 / std::sqrt(t * t + 1.0);
  const double s = t * c;

  const cplx vpp = c;
  const cplx vpq = s;
  const cplx vqp = -s * std::conj(u);
  const cplx vqq = c * std::conj(u);

  const Eigen::Index n = a.rows();
  for (Eigen::Index i = 0; i < n; ++i) {
    const cplx aip = a(i, p);
    const cplx aiq = a(i, q);
    a(i, p) = aip * vpp + aiq * vqp;
    a(i, q) = aip * vpq + aiq * vqq;
  }
  for (Eigen::Index j = 0; j < n; ++j) {
    const cplx apj = a(p, j);
    const cplx aqj = a(q, j);
    a(p, j) = std::conj(vpp) * apj + std::conj(vqp) * aqj;
    a(q, j) = std::conj(vpq) * apj + std::conj(vqq) * aqj;
  }
  a(p, q) = 0.0;
  a(q, p) = 0.0;
  a(p, p) = a(p, p).real();
  a(q, q) = a(q, q).real();

  for (Eigen::Index i = 0; i < n; ++i) {
    const cplx vip = v(i, p);
    const cplx viq = v(i, q);
    v(i, p) = vip * vpp + viq * vqp;
    v(i, q) = vip * vpq + viq * vqq;
  }
}

// Makes the first component with modulus above 1e-12 real and positive.
inline void fix_phase(Eigen::Ref<ComplexVector> col) {
  for (Eigen::Index i = 0; i < col.size(); ++i) {
    const double m = std::abs(col(i));
    if (m > 1e-12) {
      col *= std::conj(col(i)) / m;
      col(i) = cplx(col(i).real(), 0.0);
      return;
    }
  }
}

}  // namespace detail

/// Eigendecomposition of a Hermitian matrix by cyclic Jacobi sweeps.
///
/// Output is deterministic: eigenvalues ascending with ties kept in the
/// order the sweeps produced them, vectors inside a degenerate block
/// re-orthonormalized by Gram–Schmidt in index order, and each vector's
/// first significant component made real positive.
inline SpectralDecomposition hermitian_eigendecomposition(
    const ComplexMatrix& h, const EigenSolverOptions& opts = {}) {
  require_hermitian(h, opts.hermitian_tol, "hermitian_eigendecomposition");
  const Eigen::Index n = h.rows();
  ComplexMatrix a = 0.5 * (h + h.adjoint());
  ComplexMatrix v = ComplexMatrix::Identity(n, n);

  const double scale2 = a.squaredNorm();
  const double target2 =
      opts.relative_offdiag * opts.relative_offdiag * scale2;
  int sweep = 0;
  for (; sweep < opts.max_sweeps; ++sweep) {
    if (detail::offdiag_norm2(a) <= target2) break;
    for (Eigen::Index p = 0; p + 1 < n; ++p) {
      for (Eigen::Index q = p + 1; q < n; ++q) {
        detail::jacobi_rotate(a, v, p, q);
      }
    }
  }
  if (detail::offdiag_norm2(a) > target2) {
    // Rounding can stall a hair above the target; accept anything that is
    // still far inside the reconstruction tolerance.
    if (detail::offdiag_norm2(a) > 1e-24 * scale2) {
      std::ostringstream os;
      os << "hermitian_eigendecomposition: no convergence after " << sweep
         << " sweeps";
      throw NumericalError(os.str());
    }
  }

  std::vector<Eigen::Index> order(static_cast<std::size_t>(n));
  std::iota(order.begin(), order.end(), Eigen::Index{0});
  std::stable_sort(order.begin(), order.end(),
                   [&](Eigen::Index x, Eigen::Index y) {
                     return a(x, x).real() < a(y, y).real();
                   });

  SpectralDecomposition out;
  out.eigenvalues.resize(n);
  out.eigenvectors.resize(n, n);
  for (Eigen::Index k = 0; k < n; ++k) {
    const auto src = order[static_cast<std::size_t>(k)];
    out.eigenvalues(k) = a(src, src).real();
    out.eigenvectors.col(k) = v.col(src);
  }

  const double emax =
      n == 0 ? 0.0 : out.eigenvalues.cwiseAbs().maxCoeff();
  const double degen = opts.degeneracy_tol * emax;
  Eigen::Index block_start = 0;
  for (Eigen::Index k = 0; k < n; ++k) {
    if (k > block_start &&
        out.eigenvalues(k) - out.eigenvalues(k - 1) > degen) {
      block_start = k;
    }
    for (Eigen::Index j = block_start; j < k; ++j) {
      const cplx overlap =
          out.eigenvectors.col(j).dot(out.eigenvectors.col(k));
      out.eigenvectors.col(k) -= overlap * out.eigenvectors.col(j);
    }
    out.eigenvectors.col(k).normalize();
    detail::fix_phase(out.eigenvectors.col(k));
  }
  return out;
}

inline SpectralDecomposition hermitian_eigendecomposition(
    const HermitianOperator& h, const EigenSolverOptions& opts = {}) {
  return hermitian_eigendecomposition(h.matrix(), opts);
}

/// exp(−i·H·t) through the spectral decomposition of H.
inline ComplexMatrix unitary_exponential(const ComplexMatrix& h, double t) {
  const auto sd = hermitian_eigendecomposition(h);
  return sd.apply([t](double e) { return std::exp(cplx(0.0, -e * t)); });
}

}  // namespace qbind
