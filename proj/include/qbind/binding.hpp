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

// binding.hpp: binding energy of a bipartite system.
//
// The binding energy is the smallest change of average energy that takes
// the initial state ρ0 under H = H_free + H_int to a state with no work left
// to extract under H_free alone. Over the unitary orbit of ρ0 the optimum is
// the passive state: ρ0's eigenvalues sorted in descending order placed on
// the eigenstates of H_free sorted by ascending energy. Then
//
//   ΔU_BE = Σ_γ p↓_γ ε↑_γ − Tr[ρ0 (H_free + H_int)].
//
// Ties in either ordering are broken by the original index, so assignments
// are reproducible.

#pragma once

#include <algorithm>
#include <cmath>
#include <cstddef>
#include <limits>
#include <numeric>
#include <sstream>
#include <vector>

#include "qbind/errors.hpp"
#include "qbind/matrix.hpp"
#include "qbind/operators.hpp"
#include "qbind/spectral.hpp"

namespace qbind {

struct EnergyLevel {
  std::size_t label;  // 0-based index into the source spectrum
  double energy;
};

/// Levels sorted nondecreasing in energy, labels unique.
class EnergySpectrum {
 public:
  explicit EnergySpectrum(std::vector<EnergyLevel> levels)
      : levels_(std::move(levels)) {
    std::vector<std::size_t> labels;
    for (std::size_t k = 0; k < levels_.size(); ++k) {
      if (k > 0 && levels_[k].energy < levels_[k - 1].energy) {
        throw ValidationError("EnergySpectrum: levels not sorted");
      }
      labels.push_back(levels_[k].label);
    }
    std::sort(labels.begin(), labels.end());
    if (std::adjacent_find(labels.begin(), labels.end()) != labels.end()) {
      throw ValidationError("EnergySpectrum: duplicate label");
    }
  }

  static EnergySpectrum from(const SpectralDecomposition& sd) {
    std::vector<EnergyLevel> levels;
    for (std::size_t k = 0; k < sd.dim(); ++k) {
      levels.push_back({k, sd.eigenvalues(static_cast<Eigen::Index>(k))});
    }
    return EnergySpectrum(std::move(levels));
  }

  const std::vector<EnergyLevel>& levels() const noexcept { return levels_; }
  std::size_t size() const noexcept { return levels_.size(); }

 private:
  std::vector<EnergyLevel> levels_;
};

/// Nonnegative weights summing to one. Entries in [−1e-12, 0) are clamped.
class ProbabilityVector {
 public:
  explicit ProbabilityVector(RealVector p, const Tolerances& tol = {})
      : p_(std::move(p)) {
    if (p_.size() == 0) {
      throw ValidationError("ProbabilityVector: empty");
    }
    for (Eigen::Index k = 0; k < p_.size(); ++k) {
      if (!std::isfinite(p_(k)) || p_(k) < -tol.validity) {
        std::ostringstream os;
        os << "ProbabilityVector: entry " << k << " = " << p_(k)
           << " is negative";
        throw ValidationError(os.str());
      }
      p_(k) = std::max(p_(k), 0.0);
    }
    if (std::abs(p_.sum() - 1.0) > tol.reconstruction) {
      std::ostringstream os;
      os.precision(17);
      os << "ProbabilityVector: entries sum to " << p_.sum();
      throw ValidationError(os.str());
    }
  }

  const RealVector& values() const noexcept { return p_; }
  std::size_t size() const noexcept {
    return static_cast<std::size_t>(p_.size());
  }

 private:
  RealVector p_;
};

/// Indices of x sorted by descending value; equal values keep index order.
inline std::vector<std::size_t> descending_order(const RealVector& x) {
  std::vector<std::size_t> idx(static_cast<std::size_t>(x.size()));
  std::iota(idx.begin(), idx.end(), std::size_t{0});
  std::stable_sort(idx.begin(), idx.end(), [&](std::size_t a, std::size_t b) {
    return x(static_cast<Eigen::Index>(a)) > x(static_cast<Eigen::Index>(b));
  });
  return idx;
}

inline std::vector<std::size_t> ascending_order(const RealVector& x) {
  std::vector<std::size_t> idx(static_cast<std::size_t>(x.size()));
  std::iota(idx.begin(), idx.end(), std::size_t{0});
  std::stable_sort(idx.begin(), idx.end(), [&](std::size_t a, std::size_t b) {
    return x(static_cast<Eigen::Index>(a)) < x(static_cast<Eigen::Index>(b));
  });
  return idx;
}

/// Passive state for populations p on the eigenbasis of H_free: the largest
/// population goes to the lowest level, and so on.
inline DensityMatrix passive_state(const ProbabilityVector& p,
                                   const SpectralDecomposition& free_spectrum) {
  if (p.size() != free_spectrum.dim()) {
    throw ValidationError("passive_state: dimension mismatch");
  }
  const auto order = descending_order(p.values());
  RealVector sorted(p.values().size());
  for (std::size_t k = 0; k < order.size(); ++k) {
    sorted(static_cast<Eigen::Index>(k)) =
        p.values()(static_cast<Eigen::Index>(order[k]));
  }
  return DensityMatrix::from_spectrum(sorted, free_spectrum.eigenvectors);
}

struct EnergyBounds {
  double min_energy;
  double max_energy;
};

/// Rearrangement bounds p↓·ε↑ ≤ p·ε ≤ p↓·ε↓ over all pairings.
inline EnergyBounds energy_bounds(const ProbabilityVector& p,
                                  const RealVector& eps) {
  if (p.size() != static_cast<std::size_t>(eps.size())) {
    throw ValidationError("energy_bounds: length mismatch");
  }
  const auto pd = descending_order(p.values());
  const auto ea = ascending_order(eps);
  const std::size_t n = pd.size();
  double lo = 0.0, hi = 0.0;
  for (std::size_t k = 0; k < n; ++k) {
    const double pk = p.values()(static_cast<Eigen::Index>(pd[k]));
    lo += pk * eps(static_cast<Eigen::Index>(ea[k]));
    hi += pk * eps(static_cast<Eigen::Index>(ea[n - 1 - k]));
  }
  return {lo, hi};
}

struct BindingEnergyReport {
  double delta_u_be = 0.0;
  double initial_energy = 0.0;
  double final_energy = 0.0;
  DensityMatrix passive_state;
  /// assignment[r] = index (in ρ0's ascending eigen order) of the
  /// population placed on the r-th lowest bare level.
  std::vector<std::size_t> assignment;
  UnitaryOperator optimal_unitary;
};

/// Kinematic binding energy: optimum over the full unitary orbit of rho0.
inline BindingEnergyReport binding_energy(const DensityMatrix& rho0,
                                          const HermitianOperator& h_free,
                                          const HermitianOperator& h_int) {
  if (rho0.dim() != h_free.dim() || h_int.dim() != h_free.dim()) {
    std::ostringstream os;
    os << "binding_energy: dimension mismatch (rho0 " << rho0.dim()
       << ", H_free " << h_free.dim() << ", H_int " << h_int.dim() << ")";
    throw ValidationError(os.str());
  }
  const auto state = hermitian_eigendecomposition(rho0.matrix());
  const auto bare = hermitian_eigendecomposition(h_free);
  const auto order = descending_order(state.eigenvalues);
  const auto n = static_cast<Eigen::Index>(rho0.dim());

  BindingEnergyReport report;
  report.assignment = order;
  RealVector pops(n);
  ComplexMatrix sources(n, n);
  for (Eigen::Index r = 0; r < n; ++r) {
    const auto src = static_cast<Eigen::Index>(order[static_cast<std::size_t>(r)]);
    pops(r) = std::max(state.eigenvalues(src), 0.0);
    sources.col(r) = state.eigenvectors.col(src);
  }
  pops /= pops.sum();
  report.optimal_unitary =
      UnitaryOperator(bare.eigenvectors * sources.adjoint());
  report.passive_state = DensityMatrix::from_spectrum(pops, bare.eigenvectors);
  report.initial_energy = average_energy(rho0, h_free + h_int);
  report.final_energy = pops.dot(bare.eigenvalues);
  report.delta_u_be = report.final_energy - report.initial_energy;
  return report;
}

/// U with U|psi0⟩ = |Φ_1⟩ (free ground state); the remaining columns map an
/// orthonormal complement of psi0, built by Gram–Schmidt over the standard
/// basis, onto Φ_2, Φ_3, ….
inline UnitaryOperator optimal_unitary_pure(
    const ComplexVector& psi0, const SpectralDecomposition& free_spectrum,
    double tol = Tolerances{}.reconstruction) {
  const auto n = psi0.size();
  if (static_cast<std::size_t>(n) != free_spectrum.dim()) {
    throw ValidationError("optimal_unitary_pure: dimension mismatch");
  }
  if (std::abs(psi0.norm() - 1.0) > tol) {
    std::ostringstream os;
    os << "optimal_unitary_pure: state norm " << psi0.norm() << " is not 1";
    throw ValidationError(os.str());
  }
  ComplexMatrix basis(n, n);
  basis.col(0) = psi0.normalized();
  Eigen::Index filled = 1;
  for (Eigen::Index e = 0; e < n && filled < n; ++e) {
    ComplexVector v = ComplexVector::Unit(n, e);
    for (int pass = 0; pass < 2; ++pass) {
      for (Eigen::Index j = 0; j < filled; ++j) {
        v -= basis.col(j).dot(v) * basis.col(j);
      }
    }
    const double norm = v.norm();
    if (norm > 1e-8) basis.col(filled++) = v / norm;
  }
  return UnitaryOperator(free_spectrum.eigenvectors * basis.adjoint());
}

namespace detail {

// Gibbs weights for ascending energies. beta = +inf selects the (degenerate)
// ground space uniformly.
inline RealVector gibbs_weights(const RealVector& energies, double beta) {
  if (std::isnan(beta) || beta < 0.0) {
    std::ostringstream os;
    os << "thermal state: inverse temperature must be >= 0, got " << beta;
    throw ValidationError(os.str());
  }
  const Eigen::Index n = energies.size();
  const double e0 = energies.minCoeff();
  RealVector w(n);
  if (std::isinf(beta)) {
    const double scale = energies.cwiseAbs().maxCoeff();
    for (Eigen::Index k = 0; k < n; ++k) {
      w(k) = energies(k) - e0 <= 1e-12 * scale ? 1.0 : 0.0;
    }
  } else {
    for (Eigen::Index k = 0; k < n; ++k) {
      w(k) = std::exp(-beta * (energies(k) - e0));
    }
  }
  return w / w.sum();
}

}  // namespace detail

/// e^{−βH}/Z via the spectral decomposition of H.
inline DensityMatrix thermal_state(const HermitianOperator& h, double beta) {
  const auto sd = hermitian_eigendecomposition(h);
  return DensityMatrix::from_spectrum(
      detail::gibbs_weights(sd.eigenvalues, beta), sd.eigenvectors);
}

struct ThermalFinalState {
  DensityMatrix state;
  UnitaryOperator unitary;
  RealVector weights;  // descending, placed on ascending bare energies
};

/// Passive image of the thermal state of H_total: dressed Gibbs weights
/// (descending) placed on bare eigenstates (ascending). The unitary maps the
/// k-th dressed eigenvector to the k-th bare eigenvector.
inline ThermalFinalState thermal_final_state(const HermitianOperator& h_total,
                                             const HermitianOperator& h_free,
                                             double beta) {
  if (h_total.dim() != h_free.dim()) {
    throw ValidationError("thermal_final_state: dimension mismatch");
  }
  const auto dressed = hermitian_eigendecomposition(h_total);
  const auto bare = hermitian_eigendecomposition(h_free);
  RealVector w = detail::gibbs_weights(dressed.eigenvalues, beta);
  return {DensityMatrix::from_spectrum(w, bare.eigenvectors),
          UnitaryOperator(bare.eigenvectors * dressed.eigenvectors.adjoint()),
          std::move(w)};
}

}  // namespace qbind
