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

// propagation.hpp: time-ordered evolution under piecewise Hamiltonians.
//
// Each step multiplies exp(−i H(t_mid) Δt) on the left, with the step
// exponential taken through the spectral decomposition of H(t_mid). Pulse
// propagation happens in the rotating frame.

#pragma once

#include <algorithm>
#include <cmath>
#include <complex>
#include <cstddef>
#include <functional>
#include <limits>
#include <optional>
#include <sstream>
#include <string>
#include <vector>

#include "qbind/errors.hpp"
#include "qbind/matrix.hpp"
#include "qbind/operators.hpp"
#include "qbind/pulse_synthesis.hpp"
#include "qbind/spectral.hpp"

namespace qbind::prop {

/// H(t) as a plain matrix; it is checked for Hermiticity at every step.
using HamiltonianFn = std::function<ComplexMatrix(double)>;

/// Strictly increasing time points; steps run between neighbours.
class TimeGrid {
 public:
  TimeGrid() = default;

  explicit TimeGrid(std::vector<double> points) : points_(std::move(points)) {
    if (points_.size() < 2) {
      throw ValidationError("TimeGrid: need at least two points");
    }
    for (std::size_t i = 1; i < points_.size(); ++i) {
      if (!(points_[i] > points_[i - 1]) || !std::isfinite(points_[i])) {
        throw ValidationError("TimeGrid: points must be finite and strictly increasing");
      }
    }
  }

  /// Equal steps no longer than `step`, ending exactly at t_end.
  static TimeGrid uniform(double t_start, double t_end, double step) {
    if (!(t_end > t_start) || !(step > 0.0)) {
      throw ValidationError("TimeGrid::uniform: need t_end > t_start and step > 0");
    }
    const auto n = static_cast<std::size_t>(
        std::max(1.0, std::ceil((t_end - t_start) / step * (1.0 - 1e-12))));
    return subdivided({t_start, t_end}, n);
  }

  /// Sorts and drops points within 1e-12 of the span of their predecessor;
  /// sums of pulse durations leave ulp-sized slivers otherwise.
  static std::vector<double> merge_close(std::vector<double> pts) {
    std::sort(pts.begin(), pts.end());
    if (pts.empty()) return pts;
    const double tol = 1e-12 * (pts.back() - pts.front());
    std::vector<double> out{pts.front()};
    for (std::size_t i = 1; i < pts.size(); ++i) {
      if (pts[i] - out.back() > tol) {
        out.push_back(pts[i]);
      } else if (i + 1 == pts.size()) {
        out.back() = pts[i];  // keep the exact end point
      }
    }
    return out;
  }

  /// Each interval between consecutive breakpoints cut into `per_segment`
  /// equal steps. Near-duplicate breakpoints are merged.
  static TimeGrid subdivided(std::vector<double> breakpoints, std::size_t per_segment) {
    if (per_segment == 0) {
      throw ValidationError("TimeGrid::subdivided: need at least one step per segment");
    }
    breakpoints = merge_close(std::move(breakpoints));
    if (breakpoints.size() < 2) {
      throw ValidationError("TimeGrid::subdivided: need two distinct breakpoints");
    }
    std::vector<double> pts;
    pts.reserve((breakpoints.size() - 1) * per_segment + 1);
    for (std::size_t s = 0; s + 1 < breakpoints.size(); ++s) {
      const double a = breakpoints[s], b = breakpoints[s + 1];
      for (std::size_t i = 0; i < per_segment; ++i) {
        pts.push_back(a + (b - a) * static_cast<double>(i) /
                              static_cast<double>(per_segment));
      }
    }
    pts.push_back(breakpoints.back());
    return TimeGrid(std::move(pts));
  }

  const std::vector<double>& points() const noexcept { return points_; }
  double t_start() const { return points_.front(); }
  double t_end() const { return points_.back(); }
  std::size_t steps() const { return points_.size() - 1; }

 private:
  std::vector<double> points_;
};

namespace detail {

inline ComplexMatrix step_exponential(const HamiltonianFn& h, double t0, double t1) {
  const ComplexMatrix hm = h(0.5 * (t0 + t1));
  if (max_abs(hm) == 0.0) {
    return ComplexMatrix::Identity(hm.rows(), hm.cols());
  }
  return unitary_exponential(hm, t1 - t0);
}

}  // namespace detail

/// Midpoint-rule time-ordered exponential over the grid.
inline UnitaryOperator evolve_unitary(const HamiltonianFn& h, const TimeGrid& grid) {
  const auto& t = grid.points();
  const ComplexMatrix h0 = h(t.front());
  ComplexMatrix u = ComplexMatrix::Identity(h0.rows(), h0.cols());
  for (std::size_t i = 1; i < t.size(); ++i) {
    u = (detail::step_exponential(h, t[i - 1], t[i]) * u).eval();
  }
  const double drift = unitarity_residual(u);
  if (drift > 1e-9) {
    std::ostringstream os;
    os << "evolve_unitary: unitarity drift " << drift << " after " << grid.steps()
       << " steps";
    throw NumericalError(os.str());
  }
  return UnitaryOperator(u, 1e-9);
}

struct EvolveOptions {
  std::size_t sample_stride = 1;  // keep every n-th grid point (end always kept)
  HamiltonianFn energy_observable;  // defaults to H(t) itself
  std::optional<ComplexMatrix> target;  // for fidelity_to_target
};

struct PropagationResult {
  UnitaryOperator final_unitary;
  std::vector<double> times;
  std::vector<DensityMatrix> states;
  std::vector<double> energies;  // Tr[O(t) ρ(t)]
  std::optional<double> fidelity_to_target;
};

/// |Tr(V† U)| / d, insensitive to a global phase.
inline double gate_fidelity(const ComplexMatrix& target, const ComplexMatrix& u) {
  if (target.rows() != u.rows() || target.cols() != u.cols()) {
    throw ValidationError("gate_fidelity: dimension mismatch");
  }
  return std::abs((target.adjoint() * u).trace()) / static_cast<double>(u.rows());
}

/// ρ(t) = U(t) ρ₀ U(t)†, sampled along the grid, with the energy Tr[O(t)ρ(t)].
inline PropagationResult evolve_density(const DensityMatrix& rho0, const HamiltonianFn& h,
                                        const TimeGrid& grid,
                                        const EvolveOptions& opts = {}) {
  const auto& t = grid.points();
  const auto d = static_cast<Eigen::Index>(rho0.dim());
  if (h(t.front()).rows() != d) {
    throw ValidationError("evolve_density: state and Hamiltonian dimensions differ");
  }
  const HamiltonianFn& obs = opts.energy_observable ? opts.energy_observable : h;
  const std::size_t stride = std::max<std::size_t>(opts.sample_stride, 1);

  PropagationResult out;
  ComplexMatrix u = ComplexMatrix::Identity(d, d);
  const auto sample = [&](double time) {
    const DensityMatrix rho = rho0.transformed(UnitaryOperator(u, 1e-9));
    const ComplexMatrix o = obs(time);
    out.times.push_back(time);
    out.energies.push_back((o * rho.matrix()).trace().real());
    out.states.push_back(rho);
  };
  sample(t.front());
  for (std::size_t i = 1; i < t.size(); ++i) {
    u = (detail::step_exponential(h, t[i - 1], t[i]) * u).eval();
    if (i % stride == 0 || i + 1 == t.size()) sample(t[i]);
  }
  const double drift = unitarity_residual(u);
  if (drift > 1e-9) {
    std::ostringstream os;
    os << "evolve_density: unitarity drift " << drift;
    throw NumericalError(os.str());
  }
  out.final_unitary = UnitaryOperator(u, 1e-9);
  if (opts.target) out.fidelity_to_target = gate_fidelity(*opts.target, u);
  return out;
}

struct AdaptiveResult {
  UnitaryOperator unitary;
  std::size_t per_segment = 0;
  double last_change = 0.0;
};

/// Starts from `initial` steps per segment and doubles until two successive
/// final unitaries differ by less than tol (max-norm).
inline AdaptiveResult evolve_adaptive(const HamiltonianFn& h,
                                      const std::vector<double>& breakpoints,
                                      std::size_t initial = 200, double tol = 1e-9,
                                      int max_doublings = 10) {
  std::size_t n = std::max<std::size_t>(initial, 1);
  UnitaryOperator prev = evolve_unitary(h, TimeGrid::subdivided(breakpoints, n));
  for (int k = 0; k < max_doublings; ++k) {
    n *= 2;
    UnitaryOperator next = evolve_unitary(h, TimeGrid::subdivided(breakpoints, n));
    const double change = max_abs(next.matrix() - prev.matrix());
    if (change < tol) return {next, n, change};
    prev = next;
  }
  std::ostringstream os;
  os << "evolve_adaptive: no convergence to " << tol << " with " << n
     << " steps per segment";
  throw NumericalError(os.str());
}

/// Rotating-frame generator of one shaped pulse:
///   H(t) = −D · a(t − t₀) · (e^{iφ}|k⟩⟨k+1| + e^{−iφ}|k+1⟩⟨k|),
/// where a is the envelope above its baseline. For a constant envelope,
/// exp(−i H T) is the pulse block with area C = D·a·T.
inline HamiltonianFn rwa_interaction(const pulse::ScheduledPulse& p, std::size_t dim) {
  if (p.pulse.k < 1 || p.pulse.k + 1 > dim) {
    throw ValidationError("rwa_interaction: transition outside dimension");
  }
  const auto d = static_cast<Eigen::Index>(dim);
  const auto i = static_cast<Eigen::Index>(p.pulse.k - 1);
  ComplexMatrix g = ComplexMatrix::Zero(d, d);
  g(i, i + 1) = -std::polar(1.0, p.pulse.phase);
  g(i + 1, i) = -std::polar(1.0, -p.pulse.phase);
  return [g, shape = p.shape, t0 = p.start_time, dip = p.dipole](double t) {
    return ComplexMatrix(dip * shape.drive_at(t - t0) * g);
  };
}

/// Piecewise Hamiltonian of a whole schedule and the times it bends at.
struct ScheduleDrive {
  HamiltonianFn hamiltonian;
  std::vector<double> breakpoints;
  double t_end = 0.0;
  double pulse_offset = 0.0;  // start of the first pulse
};

/// Concatenates the pulses of a schedule. With residual_duration > 0 a
/// free-evolution segment H = diag(θ)/T_r precedes the pulses, so the
/// full propagator equals the synthesis target instead of target · R.
inline ScheduleDrive schedule_drive(const pulse::PulseSchedule& s,
                                    double residual_duration = 0.0) {
  if (!(residual_duration >= 0.0)) {
    throw ValidationError("schedule_drive: residual duration must be >= 0");
  }
  const auto d = static_cast<Eigen::Index>(s.dim);
  std::vector<HamiltonianFn> parts;
  ScheduleDrive out;
  out.pulse_offset = residual_duration;
  out.breakpoints.push_back(0.0);
  for (const auto& p : s.pulses) {
    pulse::ScheduledPulse shifted = p;
    shifted.start_time += residual_duration;
    parts.push_back(rwa_interaction(shifted, s.dim));
    for (const auto& bp : p.shape.breakpoints) {
      out.breakpoints.push_back(bp.first + shifted.start_time);
    }
  }
  ComplexMatrix free = ComplexMatrix::Zero(d, d);
  if (residual_duration > 0.0) {
    for (Eigen::Index j = 0; j < d; ++j) {
      free(j, j) = s.residual_phases(j) / residual_duration;
    }
    out.breakpoints.push_back(residual_duration);
  }
  out.t_end = residual_duration + s.total_time;
  out.breakpoints.push_back(out.t_end);
  out.breakpoints = TimeGrid::merge_close(std::move(out.breakpoints));

  std::vector<std::pair<double, double>> windows;
  for (const auto& p : s.pulses) {
    windows.emplace_back(p.start_time + residual_duration,
                         p.start_time + residual_duration + p.shape.duration);
  }
  out.hamiltonian = [parts, windows, free, d, residual_duration](double t) {
    if (t < residual_duration) return ComplexMatrix(free);
    for (std::size_t k = 0; k < parts.size(); ++k) {
      if (t >= windows[k].first && t <= windows[k].second) return parts[k](t);
    }
    return ComplexMatrix(ComplexMatrix::Zero(d, d));
  };
  return out;
}

struct PassivityReport {
  bool passive = false;
  double commutator_norm = 0.0;
  RealVector energies;     // free levels, ascending
  RealVector populations;  // per level, degenerate blocks resolved
  std::string diagnostic;
};

/// ρ is passive for H_free when it commutes with H_free and its
/// populations do not increase with energy. Inside a degenerate block the
/// populations are the eigenvalues of the restricted state, in any order.
inline PassivityReport verify_passive(const DensityMatrix& rho, const HermitianOperator& h_free,
                                      double commutator_tol = 1e-8,
                                      double population_tol = 1e-10) {
  if (rho.dim() != h_free.dim()) {
    throw ValidationError("verify_passive: dimension mismatch");
  }
  PassivityReport r;
  const ComplexMatrix& p = rho.matrix();
  const ComplexMatrix& h = h_free.matrix();
  r.commutator_norm = max_abs(p * h - h * p);

  const auto sd = hermitian_eigendecomposition(h_free);
  const auto n = static_cast<Eigen::Index>(rho.dim());
  r.energies = sd.eigenvalues;
  r.populations.resize(n);
  const double emax = n == 0 ? 0.0 : sd.eigenvalues.cwiseAbs().maxCoeff();
  const double degen = 1e-12 * std::max(emax, std::numeric_limits<double>::min());

  std::vector<std::pair<double, double>> block_range;  // (min, max) population per block
  for (Eigen::Index start = 0; start < n;) {
    Eigen::Index end = start + 1;
    while (end < n && sd.eigenvalues(end) - sd.eigenvalues(end - 1) <= degen) ++end;
    const ComplexMatrix v = sd.eigenvectors.middleCols(start, end - start);
    const ComplexMatrix restricted = v.adjoint() * p * v;
    RealVector pops = hermitian_eigendecomposition(
                          ComplexMatrix(0.5 * (restricted + restricted.adjoint())))
                          .eigenvalues.reverse();
    r.populations.segment(start, end - start) = pops;
    block_range.emplace_back(pops.minCoeff(), pops.maxCoeff());
    start = end;
  }

  bool ordered = true;
  std::ostringstream diag;
  for (std::size_t b = 1; b < block_range.size(); ++b) {
    if (block_range[b].second > block_range[b - 1].first + population_tol) {
      ordered = false;
      diag << "population inversion between energy blocks " << b - 1 << " and " << b
           << " (" << block_range[b - 1].first << " < " << block_range[b].second
           << "); ";
    }
  }
  const bool commutes = r.commutator_norm < commutator_tol;
  if (!commutes) {
    diag << "state does not commute with H_free (max |[rho,H]| = " << r.commutator_norm
         << "); ";
  }
  r.passive = ordered && commutes;
  r.diagnostic = r.passive ? "passive" : diag.str();
  return r;
}

}  // namespace qbind::prop
