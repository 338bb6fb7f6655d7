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

// jaynes_cummings.hpp: one-photon Jaynes–Cummings atom–cavity model.
//
// Basis order (index: state): 0: |0,g⟩, 1: |0,e⟩, 2: |1,g⟩, 3: |1,e⟩, with
// the photon number first. Natural units, ħ = 1; energies are angular
// frequencies. The Hamiltonian is
//
//   H = ½ ω_A σ_z + ½ ω_B a†a + g (σ₊ a + σ₋ a†)
//
// including the ½ on the cavity term. Only |0,e⟩ and |1,g⟩ are coupled.

#pragma once

#include <algorithm>
#include <array>
#include <cmath>
#include <numbers>
#include <sstream>
#include <string>
#include <string_view>

#include "qbind/binding.hpp"
#include "qbind/errors.hpp"
#include "qbind/matrix.hpp"
#include "qbind/operators.hpp"
#include "qbind/spectral.hpp"

namespace qbind::jc {

inline constexpr Eigen::Index kGround = 0;   // |0,g⟩
inline constexpr Eigen::Index kAtomUp = 1;   // |0,e⟩
inline constexpr Eigen::Index kPhoton = 2;   // |1,g⟩
inline constexpr Eigen::Index kBothUp = 3;   // |1,e⟩

struct JCParams {
  double omega_a = 1.0;  // atomic gap
  double omega_b = 1.0;  // cavity frequency
  double g = 0.0;        // coupling strength

  void validate() const {
    if (!(omega_a > 0.0) || !(omega_b > 0.0) || !(g >= 0.0) ||
        !std::isfinite(omega_a) || !std::isfinite(omega_b) ||
        !std::isfinite(g)) {
      std::ostringstream os;
      os << "JCParams: need omega_a > 0, omega_b > 0, g >= 0 (got "
         << omega_a << ", " << omega_b << ", " << g << ")";
      throw ValidationError(os.str());
    }
  }

  /// Half-splitting of the bare one-excitation pair: ½ω_A − ¼ω_B.
  double detuning() const { return 0.5 * omega_a - 0.25 * omega_b; }
  /// Half of the dressed splitting, √(δ² + g²).
  double half_splitting() const { return std::hypot(detuning(), g); }
};

enum class DressedLabel { ground, minus, plus, doubly_excited };

inline std::string_view to_string(DressedLabel l) {
  switch (l) {
    case DressedLabel::ground: return "0g";
    case DressedLabel::minus: return "-";
    case DressedLabel::plus: return "+";
    case DressedLabel::doubly_excited: return "1e";
  }
  return "?";
}

inline DressedLabel parse_label(std::string_view s) {
  if (s == "0g" || s == "|0,g>") return DressedLabel::ground;
  if (s == "-" || s == "minus") return DressedLabel::minus;
  if (s == "+" || s == "plus") return DressedLabel::plus;
  if (s == "1e" || s == "|1,e>") return DressedLabel::doubly_excited;
  throw ValidationError("unknown dressed-state label '" + std::string(s) +
                        "' (expected one of 0g, -, +, 1e)");
}

/// Interaction term g(σ₊a + σ₋a†) on the 4-state basis.
inline HermitianOperator jc_coupling(const JCParams& p) {
  p.validate();
  ComplexMatrix h = ComplexMatrix::Zero(4, 4);
  h(kAtomUp, kPhoton) = h(kPhoton, kAtomUp) = p.g;
  return HermitianOperator(h);
}

/// Bare (g = 0) Hamiltonian.
inline HermitianOperator jc_free_hamiltonian(const JCParams& p) {
  p.validate();
  ComplexMatrix h = ComplexMatrix::Zero(4, 4);
  h(kGround, kGround) = -0.5 * p.omega_a;
  h(kAtomUp, kAtomUp) = 0.5 * p.omega_a;
  h(kPhoton, kPhoton) = -0.5 * p.omega_a + 0.5 * p.omega_b;
  h(kBothUp, kBothUp) = 0.5 * p.omega_a + 0.5 * p.omega_b;
  return HermitianOperator(h);
}

inline HermitianOperator jc_hamiltonian(const JCParams& p) {
  return jc_free_hamiltonian(p) + jc_coupling(p);
}

struct DressedState {
  DressedLabel label;
  double energy;
  ComplexVector vector;
};

/// |+⟩ = cos φ |0,e⟩ + sin φ |1,g⟩, |−⟩ = −sin φ |0,e⟩ + cos φ |1,g⟩, with
/// E₊ ≥ E₋. `states` lists |0,g⟩, |−⟩, |+⟩, |1,e⟩ sorted by energy.
struct DressedBasis {
  double phi = 0.0;
  std::array<DressedState, 4> states;

  const DressedState& get(DressedLabel l) const {
    for (const auto& s : states) {
      if (s.label == l) return s;
    }
    throw ValidationError("DressedBasis: missing label");
  }
};

/// Exact diagonalization of the {|0,e⟩, |1,g⟩} block.
inline DressedBasis dressed_states(const JCParams& p) {
  p.validate();
  const HermitianOperator h = jc_hamiltonian(p);
  ComplexMatrix block(2, 2);
  block << h.matrix()(kAtomUp, kAtomUp), h.matrix()(kAtomUp, kPhoton),
      h.matrix()(kPhoton, kAtomUp), h.matrix()(kPhoton, kPhoton);
  const auto sd = hermitian_eigendecomposition(block);

  DressedBasis out;
  if (p.g == 0.0 && sd.eigenvalues(0) == sd.eigenvalues(1)) {
    out.phi = 0.0;
  } else {
    // Real symmetric block: the solver returns real vectors with the first
    // significant component positive, so φ lands in [0, π/2].
    const ComplexVector plus = sd.vector(1);
    out.phi = std::atan2(plus(1).real(), plus(0).real());
  }
  const double c = std::cos(out.phi), s = std::sin(out.phi);

  ComplexVector vg = ComplexVector::Unit(4, kGround);
  ComplexVector vp = ComplexVector::Zero(4);
  vp(kAtomUp) = c;
  vp(kPhoton) = s;
  ComplexVector vm = ComplexVector::Zero(4);
  vm(kAtomUp) = -s;
  vm(kPhoton) = c;
  ComplexVector ve = ComplexVector::Unit(4, kBothUp);

  const auto& m = h.matrix();
  const double e_plus = (vp.adjoint() * m * vp)(0).real();
  const double e_minus = (vm.adjoint() * m * vm)(0).real();
  std::array<DressedState, 4> states{
      DressedState{DressedLabel::ground, m(kGround, kGround).real(), vg},
      DressedState{DressedLabel::minus, e_minus, vm},
      DressedState{DressedLabel::plus, e_plus, vp},
      DressedState{DressedLabel::doubly_excited, m(kBothUp, kBothUp).real(),
                   ve}};
  std::stable_sort(states.begin(), states.end(),
                   [](const auto& a, const auto& b) {
                     return a.energy < b.energy;
                   });
  out.states = states;
  return out;
}

/// The mixing angle from the closed form tan(φ/2) = 2g(ω_A − ω_B).
/// Comparison utility only: the expression multiplies g by a frequency
/// difference where the standard mixing angle uses their ratio, so it is
/// dimensionally inconsistent and disagrees with dressed_states().phi.
inline double tan_half_angle_mixing(const JCParams& p) {
  p.validate();
  return 2.0 * std::atan(2.0 * p.g * (p.omega_a - p.omega_b));
}

struct FlightPhase {
  double tau = 0.0;      // time of flight through the cavity (s)
  double phi_tau = 0.0;  // accumulated mixing phase (rad)
  bool dissociates = false;
};

/// Flight of the atom through a cavity of constant coupling. The dressed
/// pair precesses at Ω = 2√(δ² + g²); the bond is broken when the
/// accumulated phase Ω·τ is an integer multiple of π.
///
/// Ω is taken in rad/s: params are angular frequencies when used here.
inline FlightPhase flight_phase(const JCParams& p, double path_length,
                                double velocity, double angle_tol = 1e-9) {
  p.validate();
  if (!(velocity > 0.0) || !std::isfinite(velocity)) {
    std::ostringstream os;
    os << "flight_phase: velocity must be positive, got " << velocity;
    throw ValidationError(os.str());
  }
  if (!(path_length >= 0.0)) {
    throw ValidationError("flight_phase: path length must be >= 0");
  }
  FlightPhase out;
  out.tau = path_length / velocity;
  out.phi_tau = 2.0 * p.half_splitting() * out.tau;
  const double turns = out.phi_tau / std::numbers::pi;
  const double off = std::abs(turns - std::round(turns)) * std::numbers::pi;
  out.dissociates = off < angle_tol;
  return out;
}

/// Binding energy of the atom–cavity pair prepared in a dressed state, with
/// H_free the g = 0 Hamiltonian and H_int the coupling term.
inline BindingEnergyReport jc_binding_energy(const JCParams& p,
                                             DressedLabel initial) {
  const auto basis = dressed_states(p);
  const auto rho0 = DensityMatrix::pure(basis.get(initial).vector);
  return binding_energy(rho0, jc_free_hamiltonian(p), jc_coupling(p));
}

}  // namespace qbind::jc
