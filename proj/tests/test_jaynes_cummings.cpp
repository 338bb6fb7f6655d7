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

#include <gtest/gtest.h>

#include <cmath>
#include <limits>
#include <numbers>

#include "qbind/jaynes_cummings.hpp"
#include "support/random.hpp"

namespace qbind::jc {
namespace {

constexpr double kPi = std::numbers::pi;

// Closed-form eigenvalues of [[a, g], [g, b]].
std::pair<double, double> block_eigenvalues(const JCParams& p) {
  const double a = 0.5 * p.omega_a;
  const double b = 0.5 * p.omega_b - 0.5 * p.omega_a;
  const double mean = 0.5 * (a + b);
  const double half = std::sqrt(0.25 * (a - b) * (a - b) + p.g * p.g);
  return {mean - half, mean + half};
}

TEST(JCHamiltonian, DecoupledIsDiagonalBareEnergies) {
  const JCParams p{1.0, 2.0, 0.0};
  const auto h = jc_hamiltonian(p);
  ComplexMatrix expected = ComplexMatrix::Zero(4, 4);
  expected.diagonal() << -0.5, 0.5, 0.5, 1.5;
  EXPECT_EQ(h.matrix(), expected);
}

TEST(JCHamiltonian, CouplingBlockLayout) {
  const JCParams p{1.3, 0.7, 0.25};
  const auto& m = jc_hamiltonian(p).matrix();
  EXPECT_DOUBLE_EQ(m(kAtomUp, kAtomUp).real(), 0.5 * 1.3);
  EXPECT_DOUBLE_EQ(m(kPhoton, kPhoton).real(), 0.5 * 0.7 - 0.5 * 1.3);
  EXPECT_DOUBLE_EQ(m(kAtomUp, kPhoton).real(), 0.25);
  EXPECT_DOUBLE_EQ(m(kPhoton, kAtomUp).real(), 0.25);
  // Nothing else is off-diagonal.
  ComplexMatrix off = m;
  off.diagonal().setZero();
  off(kAtomUp, kPhoton) = off(kPhoton, kAtomUp) = 0.0;
  EXPECT_EQ(max_abs(off), 0.0);
}

TEST(JCHamiltonian, OneExcitationEigenvalues) {
  const JCParams p{1.0, 2.0, 0.1};
  const double delta = 0.5 * p.omega_a - 0.25 * p.omega_b;
  const double lo = 0.5 * (p.omega_b / 2.0) - std::sqrt(delta * delta + p.g * p.g);
  const double hi = 0.5 * (p.omega_b / 2.0) + std::sqrt(delta * delta + p.g * p.g);
  const auto [ref_lo, ref_hi] = block_eigenvalues(p);
  EXPECT_NEAR(lo, ref_lo, 1e-15);
  EXPECT_NEAR(hi, ref_hi, 1e-15);
  const auto basis = dressed_states(p);
  EXPECT_NEAR(basis.get(DressedLabel::minus).energy, lo, 1e-12);
  EXPECT_NEAR(basis.get(DressedLabel::plus).energy, hi, 1e-12);
}

TEST(DressedStates, NoCouplingGivesBareStates) {
  const JCParams p{1.0, 0.5, 0.0};
  const auto b = dressed_states(p);
  EXPECT_EQ(b.phi, 0.0);
  EXPECT_LT((b.get(DressedLabel::plus).vector - ComplexVector::Unit(4, kAtomUp)).norm(), 1e-15);
  EXPECT_LT((b.get(DressedLabel::minus).vector - ComplexVector::Unit(4, kPhoton)).norm(), 1e-15);
}

TEST(DressedStates, ExactDegeneracyWithoutCouplingHasZeroAngle) {
  const JCParams p{1.0, 2.0, 0.0};  // ½ω_A = ½ω_B − ½ω_A
  EXPECT_EQ(dressed_states(p).phi, 0.0);
}

TEST(DressedStates, SymmetricBlockMixesEvenly) {
  const JCParams p{1.0, 2.0, 0.3};
  const auto b = dressed_states(p);
  EXPECT_NEAR(b.phi, kPi / 4.0, 1e-12);
  const double r = 1.0 / std::sqrt(2.0);
  const auto& plus = b.get(DressedLabel::plus).vector;
  EXPECT_NEAR(plus(kAtomUp).real(), r, 1e-12);
  EXPECT_NEAR(plus(kPhoton).real(), r, 1e-12);
}

TEST(DressedStates, ResidualsAndInterlacing) {
  testing::Rng rng(61);
  std::uniform_real_distribution<double> w(0.1, 3.0), gg(0.0, 1.0);
  for (int rep = 0; rep < 100; ++rep) {
    const JCParams p{w(rng), w(rng), gg(rng)};
    const auto b = dressed_states(p);
    const auto h = jc_hamiltonian(p);
    for (const auto& s : b.states) {
      EXPECT_NEAR(s.vector.norm(), 1.0, 1e-12);
      EXPECT_LT((h.matrix() * s.vector - s.energy * s.vector).norm(), 1e-10);
    }
    const auto& plus = b.get(DressedLabel::plus);
    const auto& minus = b.get(DressedLabel::minus);
    EXPECT_LT(std::abs(plus.vector.dot(minus.vector)), 1e-12);
    EXPECT_NEAR(plus.vector(kPhoton).real(), std::sin(b.phi), 1e-15);
    const double e1 = h.matrix()(kAtomUp, kAtomUp).real();
    const double e2 = h.matrix()(kPhoton, kPhoton).real();
    EXPECT_LE(minus.energy, std::min(e1, e2) + 1e-10);
    EXPECT_GE(plus.energy, std::max(e1, e2) - 1e-10);
    for (std::size_t k = 1; k < 4; ++k) {
      EXPECT_LE(b.states[k - 1].energy, b.states[k].energy);
    }
  }
}

TEST(DressedStates, WeakCouplingContinuity) {
  const JCParams bare{1.0, 0.8, 0.0};
  const JCParams weak{1.0, 0.8, 1e-4};
  const auto a = dressed_states(bare);
  const auto b = dressed_states(weak);
  for (auto l : {DressedLabel::minus, DressedLabel::plus}) {
    EXPECT_LT(std::abs(a.get(l).energy - b.get(l).energy), 1e-6);
  }
}

TEST(DressedStates, ClosedFormAngleIsOnlyAComparison) {
  const JCParams p{1.0, 1.5, 0.2};
  EXPECT_GT(std::abs(tan_half_angle_mixing(p) - dressed_states(p).phi), 1e-3);
}

TEST(FlightPhase, Examples) {
  const JCParams p{2.0, 3.0, 0.5};
  const double omega = 2.0 * p.half_splitting();

  const auto none = flight_phase(p, 0.0, 10.0);
  EXPECT_EQ(none.tau, 0.0);
  EXPECT_EQ(none.phi_tau, 0.0);
  EXPECT_TRUE(none.dissociates);

  const double path = 0.3;
  const auto full = flight_phase(p, path, path * omega / kPi);
  EXPECT_NEAR(full.phi_tau, kPi, 1e-12);
  EXPECT_TRUE(full.dissociates);

  const auto twice = flight_phase(p, path, path * omega / (2 * kPi));
  EXPECT_TRUE(twice.dissociates);

  const auto half = flight_phase(p, path, path * omega / (kPi / 2.0));
  EXPECT_NEAR(half.phi_tau, kPi / 2.0, 1e-12);
  EXPECT_FALSE(half.dissociates);

  EXPECT_THROW(flight_phase(p, path, 0.0), ValidationError);
  EXPECT_THROW(flight_phase(p, path, -1.0), ValidationError);
}

TEST(JCBindingEnergy, UnexcitedDecoupledHasNoBindingEnergy) {
  const auto r = jc_binding_energy({1.0, 1.7, 0.0}, DressedLabel::ground);
  EXPECT_NEAR(r.delta_u_be, 0.0, 1e-15);
}

TEST(JCBindingEnergy, MinusStateReleasesGapToBareGround) {
  testing::Rng rng(67);
  std::uniform_real_distribution<double> w(0.1, 3.0), gg(0.0, 1.0);
  for (int rep = 0; rep < 50; ++rep) {
    const JCParams p{w(rng), w(rng), gg(rng)};
    const auto r = jc_binding_energy(p, DressedLabel::minus);
    const double ground = -0.5 * p.omega_a;
    EXPECT_NEAR(r.delta_u_be, ground - block_eigenvalues(p).first, 1e-10);
  }
}

TEST(JCBindingEnergy, PlusStatePassivatesToBareGround) {
  const JCParams p{1.0, 1.6, 0.2};
  const auto r = jc_binding_energy(p, DressedLabel::plus);
  ComplexMatrix proj = ComplexMatrix::Zero(4, 4);
  proj(kGround, kGround) = 1.0;
  EXPECT_LT(max_abs(r.passive_state.matrix() - proj), 1e-12);
  const auto& hf = jc_free_hamiltonian(p).matrix();
  EXPECT_LT(max_abs(r.passive_state.matrix() * hf - hf * r.passive_state.matrix()),
            1e-12);
}

TEST(JCBindingEnergy, AgreesWithRawMatrices) {
  const JCParams p{1.2, 2.1, 0.35};
  const auto basis = dressed_states(p);
  for (auto l : {DressedLabel::plus, DressedLabel::minus}) {
    const auto a = jc_binding_energy(p, l);
    const auto b = binding_energy(DensityMatrix::pure(basis.get(l).vector),
                                  jc_free_hamiltonian(p), jc_coupling(p));
    EXPECT_NEAR(a.delta_u_be, b.delta_u_be, 1e-14);
    EXPECT_LT(max_abs(a.passive_state.matrix() - b.passive_state.matrix()), 1e-14);
  }
}

TEST(JCThermal, DressedGibbsWeightsResortedOntoBareLevels) {
  const JCParams p{1.0, 1.8, 0.3};
  const auto h = jc_hamiltonian(p);
  const auto hf = jc_free_hamiltonian(p);
  const auto out = thermal_final_state(h, hf, 1.0);

  // Oracle: every assignment of the dressed Gibbs weights to bare levels;
  // the minimum-energy one must match the returned populations.
  const RealVector e_d =
      Eigen::SelfAdjointEigenSolver<ComplexMatrix>(h.matrix()).eigenvalues();
  RealVector w = (-(e_d.array() - e_d.minCoeff())).exp();
  w /= w.sum();
  const RealVector eps = hf.matrix().diagonal().real();
  double best = std::numeric_limits<double>::infinity();
  RealVector best_pops;
  testing::for_each_permutation(4, [&](const auto& perm) {
    RealVector pops(4);
    for (std::size_t k = 0; k < 4; ++k) pops(perm[k]) = w(k);
    const double e = pops.dot(eps);
    if (e < best - 1e-15) {
      best = e;
      best_pops = pops;
    }
  });
  EXPECT_LT((out.state.matrix().diagonal().real() - best_pops).cwiseAbs().maxCoeff(),
            1e-12);
}

TEST(JCParams, Validation) {
  EXPECT_THROW(jc_hamiltonian({-1.0, 1.0, 0.1}), ValidationError);
  EXPECT_THROW(jc_hamiltonian({1.0, 1.0, -0.1}), ValidationError);
  EXPECT_THROW(parse_label("excited"), ValidationError);
  EXPECT_EQ(parse_label("+"), DressedLabel::plus);
}

}  // namespace
}  // namespace qbind::jc
