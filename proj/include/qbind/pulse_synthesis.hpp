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

// pulse_synthesis.hpp: nearest-neighbour pulse decomposition and
// minimum-time envelope shaping.
//
// A resonant pulse on the transition (k, k+1) acts on that pair as
//
//   B(C, φ) = [[cos C,            i e^{iφ} sin C],
//              [i e^{−iφ} sin C,  cos C         ]]
//
// and as the identity elsewhere. Levels are 1-based throughout the public
// interface.

#pragma once

#include <algorithm>
#include <cmath>
#include <cstddef>
#include <numbers>
#include <sstream>
#include <utility>
#include <vector>

#include "qbind/errors.hpp"
#include "qbind/matrix.hpp"

namespace qbind::pulse {

/// Resonant pulse on the transition (k, k+1).
struct TransitionPulse {
  std::size_t k = 1;   // lower level, 1-based
  double area = 0.0;   // rotation angle C (rad)
  double phase = 0.0;  // φ (rad)
};

/// Wraps an angle into (−π, π].
inline double wrap_angle(double x) {
  constexpr double two_pi = 2.0 * std::numbers::pi;
  double y = std::remainder(x, two_pi);
  if (y <= -std::numbers::pi) y += two_pi;
  return y;
}

/// The 2×2 block B(C, φ).
inline ComplexMatrix pulse_block(double area, double phase) {
  const double c = std::cos(area), s = std::sin(area);
  ComplexMatrix b(2, 2);
  b << c, kI * std::polar(1.0, phase) * s, kI * std::polar(1.0, -phase) * s, c;
  return b;
}

/// Full d×d unitary of one pulse.
inline UnitaryOperator pulse_unitary(const TransitionPulse& p, std::size_t dim) {
  if (p.k < 1 || p.k + 1 > dim) {
    std::ostringstream os;
    os << "pulse_unitary: transition (" << p.k << "," << p.k + 1
       << ") outside dimension " << dim;
    throw ValidationError(os.str());
  }
  const auto d = static_cast<Eigen::Index>(dim);
  const auto i = static_cast<Eigen::Index>(p.k - 1);
  ComplexMatrix u = ComplexMatrix::Identity(d, d);
  u.block(i, i, 2, 2) = pulse_block(p.area, p.phase);
  return UnitaryOperator(u);
}

/// Applies the pulse to rows (k, k+1) of m in place.
inline void apply_pulse_rows(const TransitionPulse& p, ComplexMatrix& m) {
  const auto i = static_cast<Eigen::Index>(p.k - 1);
  const ComplexMatrix rows = pulse_block(p.area, p.phase) * m.middleRows(i, 2);
  m.middleRows(i, 2) = rows;
}

/// Which entry of the pair a pulse eliminates.
enum class Elimination {
  toward_lower,  // zero entry k+1, weight moves to level k
  toward_upper,  // zero entry k, weight moves to level k+1
};

struct AreaPhase {
  double area = 0.0;
  double phase = 0.0;
};

/// (C, φ) of the pulse on (k, k+1) that clears one entry of the pair
/// (x_k, x_{k+1}) = (r_a e^{iα_a}, r_b e^{iα_b}).
///
/// toward_lower: tan C = r_b / r_a, φ = α_a − α_b − π/2.
/// toward_upper: tan C = r_a / r_b, φ = α_a − α_b + π/2.
///
/// C lies in [0, π/2]. A pair that is already cleared gives C = 0, φ = 0.
inline AreaPhase area_phase_from_column(const ComplexVector& column,
                                        std::size_t k,
                                        Elimination dir = Elimination::toward_lower,
                                        double zero_tol = 1e-14) {
  if (k < 1 || k + 1 > static_cast<std::size_t>(column.size())) {
    throw ValidationError("area_phase_from_column: row index out of range");
  }
  const cplx xa = column(static_cast<Eigen::Index>(k - 1));
  const cplx xb = column(static_cast<Eigen::Index>(k));
  const double ra = std::abs(xa), rb = std::abs(xb);
  const double aa = ra > zero_tol ? std::arg(xa) : 0.0;
  const double ab = rb > zero_tol ? std::arg(xb) : 0.0;
  const double half_pi = 0.5 * std::numbers::pi;
  if (dir == Elimination::toward_lower) {
    if (rb <= zero_tol) return {};
    return {std::atan2(rb, ra), wrap_angle(aa - ab - half_pi)};
  }
  if (ra <= zero_tol) return {};
  return {std::atan2(ra, rb), wrap_angle(aa - ab + half_pi)};
}

/// Hardware bounds on one transition's envelope, plus its dipole factor.
struct PulseConstraints {
  double amplitude_max = 1.0;
  double amplitude_min = 0.0;
  double slew_max = 1.0;   // > 0
  double slew_min = -1.0;  // < 0
  double dipole = 1.0;     // rotation rate per unit envelope

  void validate() const {
    if (!(amplitude_max > amplitude_min) || !(amplitude_min >= 0.0) ||
        !(slew_max > 0.0) || !(slew_min < 0.0) || !(dipole > 0.0) ||
        !std::isfinite(amplitude_max) || !std::isfinite(slew_max) ||
        !std::isfinite(slew_min) || !std::isfinite(dipole)) {
      std::ostringstream os;
      os << "PulseConstraints: need amplitude_max > amplitude_min >= 0, "
         << "slew_max > 0 > slew_min, dipole > 0 (got amplitude [" << amplitude_min
         << ", " << amplitude_max << "], slew [" << slew_min << ", " << slew_max
         << "], dipole " << dipole << ")";
      throw ValidationError(os.str());
    }
  }

  double headroom() const { return amplitude_max - amplitude_min; }
};

/// Piecewise-linear envelope. Breakpoint times start at 0; amplitudes are
/// absolute and sit on the baseline amplitude_min at both ends.
struct PulseShape {
  std::vector<std::pair<double, double>> breakpoints;  // (time, amplitude)
  double duration = 0.0;
  double baseline = 0.0;
  double realized_area = 0.0;     // area above the baseline
  double baseline_leakage = 0.0;  // baseline · duration, not compensated

  /// Absolute amplitude at local time t; baseline outside [0, duration].
  double amplitude_at(double t) const {
    if (breakpoints.empty() || t <= breakpoints.front().first ||
        t >= breakpoints.back().first) {
      return baseline;
    }
    const auto it = std::upper_bound(
        breakpoints.begin(), breakpoints.end(), t,
        [](double x, const auto& bp) { return x < bp.first; });
    const auto& [t1, a1] = *it;
    const auto& [t0, a0] = *(it - 1);
    if (t1 == t0) return a1;
    return a0 + (a1 - a0) * (t - t0) / (t1 - t0);
  }

  /// Envelope above the baseline; this drives the rotation.
  double drive_at(double t) const { return amplitude_at(t) - baseline; }
};

/// Trapezoid-rule integral of the envelope above the baseline.
inline double envelope_area(const std::vector<std::pair<double, double>>& bps,
                            double baseline) {
  double acc = 0.0;
  for (std::size_t i = 1; i < bps.size(); ++i) {
    acc += 0.5 * (bps[i].first - bps[i - 1].first) *
           (bps[i].second + bps[i - 1].second - 2.0 * baseline);
  }
  return acc;
}

/// Minimum-duration envelope with the given area above the baseline.
///
/// Rise at slew_max, fall at |slew_min|. The triangle peak
/// P = √(2·area / (1/R₊ + 1/R₋)) is used when it fits under the headroom
/// M = amplitude_max − amplitude_min; otherwise the envelope saturates at M
/// and holds a plateau for the remaining area.
inline PulseShape shape_pulse(double area_required, const PulseConstraints& c) {
  c.validate();
  if (!(area_required >= 0.0) || !std::isfinite(area_required)) {
    throw ValidationError(
        "shape_pulse: area must be finite and >= 0 (fold the sign into the phase)");
  }
  PulseShape s;
  s.baseline = c.amplitude_min;
  if (area_required == 0.0) return s;

  const double up = c.slew_max, down = -c.slew_min;
  const double m = c.headroom();
  const double inv = 1.0 / up + 1.0 / down;
  const double peak = std::sqrt(2.0 * area_required / inv);
  const double a0 = c.amplitude_min;
  if (peak <= m) {
    const double t1 = peak / up;
    s.duration = t1 + peak / down;
    s.breakpoints = {{0.0, a0}, {t1, a0 + peak}, {s.duration, a0}};
  } else {
    const double t1 = m / up;
    const double plateau = (area_required - 0.5 * m * m * inv) / m;
    const double t2 = t1 + plateau;
    s.duration = t2 + m / down;
    s.breakpoints = {{0.0, a0}, {t1, c.amplitude_max}, {t2, c.amplitude_max},
                     {s.duration, a0}};
  }
  s.realized_area = envelope_area(s.breakpoints, s.baseline);
  s.baseline_leakage = s.baseline * s.duration;
  return s;
}

struct ScheduledPulse {
  TransitionPulse pulse;
  PulseShape shape;
  double start_time = 0.0;
  double dipole = 1.0;
};

/// Pulses in application order. The synthesized unitary is
///
///   P_n ⋯ P_1 · R†,   R = diag(e^{iθ_j}),
///
/// where R† is free evolution applied before the first pulse.
struct PulseSchedule {
  std::size_t dim = 0;
  std::vector<ScheduledPulse> pulses;
  RealVector residual_phases;  // θ_j
  double total_time = 0.0;

  ComplexMatrix residual_unitary() const {
    ComplexVector d(residual_phases.size());
    for (Eigen::Index j = 0; j < d.size(); ++j) d(j) = std::polar(1.0, residual_phases(j));
    return d.asDiagonal();
  }

  /// Product of the pulses in application order times R†.
  ComplexMatrix reconstruct() const {
    ComplexMatrix m = residual_unitary().adjoint();
    for (const auto& sp : pulses) apply_pulse_rows(sp.pulse, m);
    return m;
  }
};

/// Decomposes a unitary into nearest-neighbour pulses.
///
/// Columns are processed from the last to the second. For column j the
/// chain (1,2), (2,3), …, (j−1,j) pushes the column's weight down onto the
/// diagonal, so W_K ⋯ W_1 · U = Λ with Λ diagonal. The returned pulses are
/// the adjoints W_K†, …, W_1† (application order), using B(C,φ)† = B(C,φ+π),
/// and the residual phases are θ = −arg Λ.
inline PulseSchedule givens_decompose(const UnitaryOperator& target,
                                      double zero_tol = 1e-14) {
  ComplexMatrix m = target.matrix();
  const auto d = m.rows();
  std::vector<TransitionPulse> ws;
  for (Eigen::Index j = d - 1; j >= 1; --j) {
    for (Eigen::Index r = 0; r < j; ++r) {
      const std::size_t k = static_cast<std::size_t>(r) + 1;
      const ComplexVector col = m.col(j);
      if (std::abs(col(r)) <= zero_tol) continue;
      const auto ap = area_phase_from_column(col, k, Elimination::toward_upper, zero_tol);
      const TransitionPulse w{k, ap.area, ap.phase};
      apply_pulse_rows(w, m);
      m(r, j) = 0.0;
      ws.push_back(w);
    }
  }
  ComplexMatrix off = m;
  off.diagonal().setZero();
  if (max_abs(off) > 1e-9) {
    std::ostringstream os;
    os << "givens_decompose: elimination left off-diagonal residue " << max_abs(off);
    throw NumericalError(os.str());
  }

  PulseSchedule out;
  out.dim = static_cast<std::size_t>(d);
  out.residual_phases.resize(d);
  for (Eigen::Index j = 0; j < d; ++j) out.residual_phases(j) = -std::arg(m(j, j));
  for (auto it = ws.rbegin(); it != ws.rend(); ++it) {
    ScheduledPulse sp;
    sp.pulse = {it->k, it->area, wrap_angle(it->phase + std::numbers::pi)};
    out.pulses.push_back(sp);
  }
  return out;
}

/// Shapes every pulse of a decomposition and lays them end to end.
/// `per_transition[k-1]` holds the bounds for transition (k, k+1); a single
/// entry is shared by all transitions.
inline PulseSchedule schedule(const UnitaryOperator& target,
                              const std::vector<PulseConstraints>& per_transition) {
  const auto d = static_cast<std::size_t>(target.dim());
  if (per_transition.empty() ||
      (per_transition.size() != 1 && per_transition.size() + 1 != d)) {
    std::ostringstream os;
    os << "schedule: need 1 or " << (d > 0 ? d - 1 : 0)
       << " constraint sets, got " << per_transition.size();
    throw ValidationError(os.str());
  }
  for (const auto& c : per_transition) c.validate();
  PulseSchedule out = givens_decompose(target);
  double t = 0.0;
  for (auto& sp : out.pulses) {
    const auto& c = per_transition.size() == 1 ? per_transition.front()
                                               : per_transition[sp.pulse.k - 1];
    sp.dipole = c.dipole;
    sp.shape = shape_pulse(sp.pulse.area / c.dipole, c);
    sp.start_time = t;
    t += sp.shape.duration;
  }
  out.total_time = t;
  return out;
}

inline PulseSchedule schedule(const UnitaryOperator& target,
                              const PulseConstraints& constraints) {
  return schedule(target, std::vector<PulseConstraints>{constraints});
}

}  // namespace qbind::pulse
