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

// tunneling_well.hpp: the step well with an outer barrier.
//
// Potential: infinite wall at x = 0, V = 0 on (0, a), V = V0 on [a, b] and
// V = V0' < V0 beyond b. Levels below V0' are bound, levels in [V0', V0)
// tunnel through the barrier [a, b], levels at or above V0 are unbounded.
//
// Everything is SI internally (J, m, kg, s).

#pragma once

#include <algorithm>
#include <cmath>
#include <cstddef>
#include <limits>
#include <numbers>
#include <sstream>
#include <string_view>
#include <vector>

#include "qbind/binding.hpp"
#include "qbind/constants.hpp"
#include "qbind/errors.hpp"
#include "qbind/matrix.hpp"

namespace qbind::well {

struct WellGeometry {
  double a = 0.0;         // well width (m)
  double b = 0.0;         // barrier outer edge (m)
  double v0 = 0.0;        // barrier height (J)
  double v0_prime = 0.0;  // outer plateau (J)
  double mass = constants::electron_mass;

  void validate() const {
    if (!(a > 0.0) || !(b > a) || !(v0_prime >= 0.0) || !(v0 > v0_prime) ||
        !(mass > 0.0) || !std::isfinite(b) || !std::isfinite(v0)) {
      std::ostringstream os;
      os << "WellGeometry: need 0 < a < b and 0 <= v0_prime < v0, mass > 0 "
         << "(got a=" << a << " b=" << b << " v0=" << v0
         << " v0_prime=" << v0_prime << " mass=" << mass << ")";
      throw ValidationError(os.str());
    }
  }

  double barrier_width() const { return b - a; }
};

enum class LevelKind { bound, tunneling, unbounded };

inline std::string_view to_string(LevelKind k) {
  switch (k) {
    case LevelKind::bound: return "bound";
    case LevelKind::tunneling: return "tunneling";
    case LevelKind::unbounded: return "unbounded";
  }
  return "?";
}

struct BoundState {
  std::size_t n;  // 1-based, ascending energy
  double energy;  // J
  LevelKind kind;
};

struct RootScanOptions {
  std::size_t grid_points = 10000;
};

namespace detail {

// Quantization condition in the wave number k = √(2mE)/ħ, with
// k_max = √(2 m V0)/ħ. Since E/(V0 − E) = k²/(k_max² − k²),
//   f(k) = tan(k a) + k / √(k_max² − k²).
// f increases strictly between consecutive tangent poles.
inline double quantization(double k, double a, double kmax) {
  return std::tan(k * a) + k / std::sqrt(kmax * kmax - k * k);
}

// Tangent branch containing k: poles sit at k a = π/2 + nπ.
inline long branch(double k, double a) {
  return static_cast<long>(std::floor(k * a / std::numbers::pi + 0.5));
}

inline double kmax_of(double v0, double mass) {
  return std::sqrt(2.0 * mass * v0) / constants::hbar;
}

}  // namespace detail

/// Pole-free residual of the quantization condition,
/// [sin(ka)√(V0 − E) + cos(ka)√E] / √V0. Zero exactly at a level.
inline double transcendental_residual(double energy, double a, double v0,
                                      double mass) {
  const double k = std::sqrt(2.0 * mass * energy) / constants::hbar;
  return (std::sin(k * a) * std::sqrt(v0 - energy) +
          std::cos(k * a) * std::sqrt(energy)) /
         std::sqrt(v0);
}

/// All levels E ∈ (0, V0) of tan(√(2mE)·a/ħ) = −√(E/(V0 − E)), ascending.
///
/// A uniform grid in k, augmented with points just either side of every
/// tangent pole, brackets one sign change per branch; each bracket is then
/// bisected to machine precision.
inline std::vector<double> bound_state_energies(double a, double v0,
                                                double mass,
                                                const RootScanOptions& opts = {}) {
  if (!(a > 0.0) || !(v0 > 0.0) || !(mass > 0.0)) {
    throw ValidationError("bound_state_energies: need a > 0, v0 > 0, mass > 0");
  }
  const double kmax = detail::kmax_of(v0, mass);
  const std::size_t n = std::max<std::size_t>(opts.grid_points, 2);

  std::vector<double> ks;
  ks.reserve(n + 64);
  for (std::size_t i = 1; i < n; ++i) {
    ks.push_back(kmax * static_cast<double>(i) / static_cast<double>(n));
  }
  for (long p = 0;; ++p) {
    const double kp = (0.5 + static_cast<double>(p)) * std::numbers::pi / a;
    if (kp >= kmax) break;
    ks.push_back(kp * (1.0 - 1e-12));
    ks.push_back(kp * (1.0 + 1e-12));
  }
  ks.push_back(kmax * (1.0 - 1e-15));
  std::sort(ks.begin(), ks.end());
  ks.erase(std::remove_if(ks.begin(), ks.end(),
                          [&](double k) { return !(k > 0.0 && k < kmax); }),
           ks.end());

  std::vector<double> energies;
  for (std::size_t i = 0; i + 1 < ks.size(); ++i) {
    double lo = ks[i], hi = ks[i + 1];
    if (detail::branch(lo, a) != detail::branch(hi, a)) continue;
    const double flo = detail::quantization(lo, a, kmax);
    const double fhi = detail::quantization(hi, a, kmax);
    if (!(flo < 0.0 && fhi >= 0.0)) continue;
    for (int it = 0; it < 200; ++it) {
      const double mid = 0.5 * (lo + hi);
      if (mid <= lo || mid >= hi) break;
      if (detail::quantization(mid, a, kmax) < 0.0) {
        lo = mid;
      } else {
        hi = mid;
      }
    }
    const double k = 0.5 * (lo + hi);
    const double hk = constants::hbar * k;
    energies.push_back(hk * hk / (2.0 * mass));
  }
  return energies;
}

inline LevelKind classify(const WellGeometry& g, double energy) {
  if (energy < g.v0_prime) return LevelKind::bound;
  if (energy < g.v0) return LevelKind::tunneling;
  return LevelKind::unbounded;
}

/// Labels each level; an energy exactly at V0' counts as tunneling.
inline std::vector<BoundState> classify_levels(
    const WellGeometry& g, const std::vector<double>& energies) {
  g.validate();
  std::vector<BoundState> out;
  out.reserve(energies.size());
  for (std::size_t k = 0; k < energies.size(); ++k) {
    if (k > 0 && !(energies[k] > energies[k - 1])) {
      throw ValidationError("classify_levels: energies must be strictly ascending");
    }
    out.push_back({k + 1, energies[k], classify(g, energies[k])});
  }
  return out;
}

/// WKB barrier transmission through the rectangular barrier [a, b]:
/// P = exp(−2 √(2m(V0 − E)) (b − a) / ħ).
inline double wkb_transmission(const WellGeometry& g, double energy) {
  g.validate();
  if (!(energy >= g.v0_prime && energy < g.v0)) {
    std::ostringstream os;
    os << "wkb_transmission: energy " << constants::joule_to_ev(energy)
       << " eV is " << to_string(classify(g, energy))
       << ", outside the tunneling window [V0', V0) = ["
       << constants::joule_to_ev(g.v0_prime) << ", "
       << constants::joule_to_ev(g.v0) << ") eV";
    throw ValidationError(os.str());
  }
  const double kappa = std::sqrt(2.0 * g.mass * (g.v0 - energy)) / constants::hbar;
  return std::clamp(std::exp(-2.0 * kappa * g.barrier_width()), 0.0, 1.0);
}

/// One segment of a piecewise-linear potential: V ramps from v_start at
/// x_start to v_end at x_end.
struct BarrierSegment {
  double x_start;
  double x_end;
  double v_start;
  double v_end;
};

/// ∫ √(2m max(V(x) − E, 0)) / ħ dx over all segments by composite Simpson,
/// doubling the panel count until successive estimates agree to rel_tol.
inline double wkb_exponent_quadrature(const std::vector<BarrierSegment>& barrier,
                                      double energy, double mass,
                                      double rel_tol = 1e-10) {
  double total = 0.0;
  for (const auto& s : barrier) {
    if (!(s.x_end > s.x_start)) {
      throw ValidationError("wkb_exponent_quadrature: empty or reversed segment");
    }
    const auto kappa = [&](double x) {
      const double t = (x - s.x_start) / (s.x_end - s.x_start);
      const double v = s.v_start + t * (s.v_end - s.v_start);
      return std::sqrt(2.0 * mass * std::max(v - energy, 0.0)) / constants::hbar;
    };
    const auto simpson = [&](std::size_t panels) {
      const double h = (s.x_end - s.x_start) / static_cast<double>(panels);
      double acc = kappa(s.x_start) + kappa(s.x_end);
      for (std::size_t i = 1; i < panels; ++i) {
        acc += (i % 2 == 1 ? 4.0 : 2.0) *
               kappa(s.x_start + h * static_cast<double>(i));
      }
      return acc * h / 3.0;
    };
    std::size_t panels = 8;
    double prev = simpson(panels);
    for (;;) {
      panels *= 2;
      const double next = simpson(panels);
      if (std::abs(next - prev) <= rel_tol * std::abs(next) || next == 0.0) {
        total += next;
        break;
      }
      if (panels > (std::size_t{1} << 24)) {
        throw NumericalError("wkb_exponent_quadrature: no convergence");
      }
      prev = next;
    }
  }
  return total;
}

/// exp(−2 ∫ κ dx) by quadrature, for arbitrary piecewise barriers.
inline double wkb_transmission_quadrature(
    const std::vector<BarrierSegment>& barrier, double energy, double mass,
    double rel_tol = 1e-10) {
  return std::clamp(
      std::exp(-2.0 * wkb_exponent_quadrature(barrier, energy, mass, rel_tol)),
      0.0, 1.0);
}

/// The geometry's barrier as a single flat segment.
inline std::vector<BarrierSegment> rectangular_barrier(const WellGeometry& g) {
  return {{g.a, g.b, g.v0, g.v0}};
}

/// Distance travelled per escape attempt.
enum class AttemptLength { barrier_width, well_width };

struct TunnelingEstimate {
  double probability = 0.0;
  double crossing_time = 0.0;   // 2·A/v (s)
  double tunneling_time = 0.0;  // crossing_time / P (s); +inf when P = 0
  bool infinite = false;
};

/// Attempt-frequency model: the particle hits the barrier every 2A/v and
/// escapes with probability P, so rate = P·v/(2A) and τ = 2A/(v·P), with
/// v = √(2E/m). A defaults to the barrier width b − a.
inline TunnelingEstimate tunneling_time(
    const WellGeometry& g, double energy, double probability,
    AttemptLength attempt = AttemptLength::barrier_width) {
  g.validate();
  if (!(energy > 0.0)) {
    throw ValidationError("tunneling_time: energy must be positive");
  }
  if (!(probability >= 0.0 && probability <= 1.0)) {
    throw ValidationError("tunneling_time: probability must lie in [0, 1]");
  }
  const double length =
      attempt == AttemptLength::barrier_width ? g.barrier_width() : g.a;
  const double v = std::sqrt(2.0 * energy / g.mass);
  TunnelingEstimate out;
  out.probability = probability;
  out.crossing_time = 2.0 * length / v;
  if (probability == 0.0) {
    out.infinite = true;
    out.tunneling_time = std::numeric_limits<double>::infinity();
  } else {
    out.tunneling_time = out.crossing_time / probability;
  }
  return out;
}

struct ExcitationPlan {
  std::vector<std::size_t> source_levels;  // 1-based
  std::vector<std::size_t> target_levels;  // 1-based, same length
  UnitaryOperator unitary;                 // permutation on the level basis
  bool multi_step = false;
};

/// Moves the populated non-tunneling levels onto tunneling levels.
///
/// Sources are the populated bound levels, by descending population;
/// targets are the empty tunneling levels, by ascending energy, so the
/// largest population lands on the lowest tunneling level and the
/// excitation energy is minimal. If there are fewer empty tunneling levels
/// than sources, only the largest populations move and the plan is flagged
/// multi_step: the rest need a later excitation round. The unitary swaps
/// each source with its target and is the identity elsewhere.
inline ExcitationPlan excitation_plan(const std::vector<double>& populations,
                                      const std::vector<BoundState>& states,
                                      double tol = 1e-12) {
  if (populations.size() != states.size() || states.empty()) {
    throw ValidationError("excitation_plan: need one population per level");
  }
  RealVector p(static_cast<Eigen::Index>(populations.size()));
  for (std::size_t k = 0; k < populations.size(); ++k) {
    p(static_cast<Eigen::Index>(k)) = populations[k];
  }
  const ProbabilityVector probs(p);  // validates
  p = probs.values();

  std::vector<std::size_t> empty_tunneling;
  std::size_t n_tunneling = 0;
  for (std::size_t k = 0; k < states.size(); ++k) {
    if (states[k].kind != LevelKind::tunneling) continue;
    ++n_tunneling;
    if (p(static_cast<Eigen::Index>(k)) <= tol) empty_tunneling.push_back(k);
  }
  if (n_tunneling == 0) {
    throw ValidationError(
        "excitation_plan: the well has no tunneling levels; modify the "
        "barrier (narrow it, or lower the outer plateau V0') so that some "
        "level falls in [V0', V0)");
  }

  RealVector bound_pops = RealVector::Constant(p.size(), -1.0);
  for (std::size_t k = 0; k < states.size(); ++k) {
    const auto i = static_cast<Eigen::Index>(k);
    if (states[k].kind == LevelKind::bound && p(i) > tol) bound_pops(i) = p(i);
  }
  std::vector<std::size_t> sources;
  for (std::size_t k : descending_order(bound_pops)) {
    if (bound_pops(static_cast<Eigen::Index>(k)) > 0.0) sources.push_back(k);
  }

  ExcitationPlan plan;
  plan.multi_step = empty_tunneling.size() < sources.size();
  const std::size_t moves = std::min(sources.size(), empty_tunneling.size());
  const auto d = static_cast<Eigen::Index>(states.size());
  ComplexMatrix u = ComplexMatrix::Identity(d, d);
  for (std::size_t m = 0; m < moves; ++m) {
    const auto s = static_cast<Eigen::Index>(sources[m]);
    const auto t = static_cast<Eigen::Index>(empty_tunneling[m]);
    u(s, s) = u(t, t) = 0.0;
    u(t, s) = u(s, t) = 1.0;
    plan.source_levels.push_back(sources[m] + 1);
    plan.target_levels.push_back(empty_tunneling[m] + 1);
  }
  plan.unitary = UnitaryOperator(u);
  return plan;
}

}  // namespace qbind::well
