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
#include <string>

#include "qbind/operators.hpp"
#include "support/random.hpp"

namespace qbind {
namespace {

using testing::Rng;

ComplexMatrix diag(std::initializer_list<double> xs) {
  ComplexMatrix m = ComplexMatrix::Zero(static_cast<Eigen::Index>(xs.size()),
                                        static_cast<Eigen::Index>(xs.size()));
  Eigen::Index k = 0;
  for (double x : xs) m(k, k) = x, ++k;
  return m;
}

ComplexMatrix pauli_x() {
  ComplexMatrix m(2, 2);
  m << 0, 1, 1, 0;
  return m;
}

// Element-wise index summation, written independently of the block-slicing
// implementation.
ComplexMatrix partial_trace_oracle(const ComplexMatrix& rho, std::size_t da,
                                   std::size_t db, Subsystem keep) {
  const std::size_t dk = keep == Subsystem::A ? da : db;
  ComplexMatrix out = ComplexMatrix::Zero(dk, dk);
  for (std::size_t i = 0; i < da; ++i)
    for (std::size_t j = 0; j < db; ++j)
      for (std::size_t i2 = 0; i2 < da; ++i2)
        for (std::size_t j2 = 0; j2 < db; ++j2) {
          const cplx v = rho(i * db + j, i2 * db + j2);
          if (keep == Subsystem::A && j == j2) out(i, i2) += v;
          if (keep == Subsystem::B && i == i2) out(j, j2) += v;
        }
  return out;
}

TEST(Eigendecomposition, DiagonalInputSortsAndPermutes) {
  const auto sd = hermitian_eigendecomposition(diag({3, 1, 2}));
  EXPECT_DOUBLE_EQ(sd.eigenvalues(0), 1.0);
  EXPECT_DOUBLE_EQ(sd.eigenvalues(1), 2.0);
  EXPECT_DOUBLE_EQ(sd.eigenvalues(2), 3.0);
  ComplexMatrix expected = ComplexMatrix::Zero(3, 3);
  expected(1, 0) = expected(2, 1) = expected(0, 2) = 1.0;
  EXPECT_LT(max_abs(sd.eigenvectors - expected), 1e-15);
}

TEST(Eigendecomposition, PauliX) {
  const auto sd = hermitian_eigendecomposition(pauli_x());
  EXPECT_NEAR(sd.eigenvalues(0), -1.0, 1e-15);
  EXPECT_NEAR(sd.eigenvalues(1), 1.0, 1e-15);
  const double r = 1.0 / std::sqrt(2.0);
  EXPECT_NEAR(std::abs(sd.eigenvectors(0, 0) - r), 0.0, 1e-14);
  EXPECT_NEAR(std::abs(sd.eigenvectors(1, 0) + r), 0.0, 1e-14);
  EXPECT_NEAR(std::abs(sd.eigenvectors(0, 1) - r), 0.0, 1e-14);
  EXPECT_NEAR(std::abs(sd.eigenvectors(1, 1) - r), 0.0, 1e-14);
}

TEST(Eigendecomposition, RandomReconstructionAndEigenOracle) {
  Rng rng(11);
  for (std::size_t d : {2u, 3u, 6u, 12u, 32u}) {
    for (int rep = 0; rep < 20; ++rep) {
      const ComplexMatrix h = testing::random_hermitian(d, rng);
      const auto sd = hermitian_eigendecomposition(h);
      EXPECT_LT(max_abs(sd.reconstruct() - h), 1e-10);
      const auto n = static_cast<Eigen::Index>(d);
      EXPECT_LT(max_abs(sd.eigenvectors.adjoint() * sd.eigenvectors -
                        ComplexMatrix::Identity(n, n)),
                1e-12);
      for (Eigen::Index k = 1; k < n; ++k) {
        EXPECT_LE(sd.eigenvalues(k - 1), sd.eigenvalues(k));
      }
      Eigen::SelfAdjointEigenSolver<ComplexMatrix> ref(h);
      EXPECT_LT((ref.eigenvalues() - sd.eigenvalues).cwiseAbs().maxCoeff(),
                1e-11);
    }
  }
}

TEST(Eigendecomposition, DegenerateBlocksAreOrthonormalAndDeterministic) {
  Rng rng(5);
  const ComplexMatrix u = testing::haar_unitary(5, rng);
  const ComplexMatrix h = u * diag({1, 1, 1, 2, 2}) * u.adjoint();
  const auto a = hermitian_eigendecomposition(h);
  const auto b = hermitian_eigendecomposition(h);
  EXPECT_EQ(a.eigenvectors, b.eigenvectors);
  EXPECT_LT(max_abs(a.eigenvectors.adjoint() * a.eigenvectors -
                    ComplexMatrix::Identity(5, 5)),
            1e-12);
  EXPECT_LT(max_abs(a.reconstruct() - h), 1e-10);
}

TEST(Eigendecomposition, ZeroAndJouleScaleMatrices) {
  const auto z = hermitian_eigendecomposition(ComplexMatrix::Zero(3, 3));
  EXPECT_EQ(z.eigenvalues, RealVector::Zero(3));
  Rng rng(3);
  const ComplexMatrix h = testing::random_hermitian(4, rng, 1e-18);
  const auto sd = hermitian_eigendecomposition(h);
  EXPECT_LT(max_abs(sd.reconstruct() - h), 1e-28);
}

TEST(Eigendecomposition, RejectsNonHermitianNamingEntry) {
  ComplexMatrix m = diag({1, 2, 3});
  m(0, 2) = 0.5;
  try {
    hermitian_eigendecomposition(m);
    FAIL() << "expected ValidationError";
  } catch (const ValidationError& e) {
    EXPECT_NE(std::string(e.what()).find("(0,2)"), std::string::npos)
        << e.what();
  }
}

TEST(TensorProduct, Examples) {
  const ComplexMatrix i2 = ComplexMatrix::Identity(2, 2);
  EXPECT_EQ(tensor_product(i2, i2), ComplexMatrix(ComplexMatrix::Identity(4, 4)));

  const auto hf = free_hamiltonian(HermitianOperator(diag({0, 1})),
                                   HermitianOperator(diag({0, 2})));
  EXPECT_EQ(hf.matrix(), diag({0, 2, 1, 3}));

  ComplexVector ket00 = ComplexVector::Zero(4);
  ket00(0) = 1.0;
  const ComplexVector out = tensor_product(pauli_x(), pauli_x()) * ket00;
  ComplexVector ket11 = ComplexVector::Zero(4);
  ket11(3) = 1.0;
  EXPECT_EQ(out, ket11);
}

TEST(TensorProduct, AssociativeOnThreeQubits) {
  Rng rng(8);
  for (int rep = 0; rep < 10; ++rep) {
    const ComplexMatrix a = testing::ginibre(2, rng);
    const ComplexMatrix b = testing::ginibre(2, rng);
    const ComplexMatrix c = testing::ginibre(2, rng);
    EXPECT_LT(max_abs(tensor_product(tensor_product(a, b), c) -
                      tensor_product(a, tensor_product(b, c))),
              1e-13);
  }
}

TEST(BipartiteSplit, IndexMapRoundTrip) {
  const BipartiteSplit s(3, 4);
  for (std::size_t g = 1; g <= s.total(); ++g) {
    const auto [i, j] = s.pair(g);
    EXPECT_EQ(s.gamma(i, j), g);
  }
  EXPECT_EQ(s.gamma(2, 1), 5u);
  EXPECT_THROW(s.gamma(4, 1), ValidationError);
  EXPECT_THROW(BipartiteSplit(0, 2), ValidationError);
}

TEST(PartialTrace, ProductStateFactorizes) {
  Rng rng(1);
  const ComplexMatrix ra = testing::random_density(2, rng);
  const ComplexMatrix rb = testing::random_density(3, rng);
  const DensityMatrix rho(tensor_product(ra, rb));
  const BipartiteSplit s(2, 3);
  EXPECT_LT(max_abs(partial_trace(rho, s, Subsystem::A).matrix() - ra), 1e-14);
  EXPECT_LT(max_abs(partial_trace(rho, s, Subsystem::B).matrix() - rb), 1e-14);
}

TEST(PartialTrace, BellStateIsMaximallyMixed) {
  ComplexVector bell = ComplexVector::Zero(4);
  bell(0) = bell(3) = 1.0 / std::sqrt(2.0);
  const auto rho = DensityMatrix::pure(bell);
  const BipartiteSplit s(2, 2);
  const ComplexMatrix half = ComplexMatrix::Identity(2, 2) / 2.0;
  EXPECT_LT(max_abs(partial_trace(rho, s, Subsystem::A).matrix() - half), 1e-15);
  EXPECT_LT(max_abs(partial_trace(rho, s, Subsystem::B).matrix() - half), 1e-15);
}

TEST(PartialTrace, MatchesIndexSummationOracle) {
  Rng rng(2);
  for (auto [da, db] : {std::pair{2u, 2u}, {2u, 3u}, {3u, 2u}, {4u, 3u}}) {
    const DensityMatrix rho(testing::random_density(da * db, rng));
    const BipartiteSplit s(da, db);
    for (auto keep : {Subsystem::A, Subsystem::B}) {
      const auto red = partial_trace(rho, s, keep);
      EXPECT_NEAR(red.matrix().trace().real(), 1.0, 1e-12);
      EXPECT_LT(max_abs(red.matrix() -
                        partial_trace_oracle(rho.matrix(), da, db, keep)),
                1e-14);
    }
  }
}

TEST(PartialTrace, RejectsDimensionMismatch) {
  const auto rho = DensityMatrix::maximally_mixed(4);
  EXPECT_THROW(partial_trace(rho, BipartiteSplit(2, 3), Subsystem::A),
               ValidationError);
  EXPECT_THROW(correlation_term(rho, BipartiteSplit(3, 3)), ValidationError);
}

TEST(CorrelationTerm, ProductBellAndRandom) {
  Rng rng(4);
  const BipartiteSplit s(2, 2);
  const DensityMatrix prod(tensor_product(testing::random_density(2, rng),
                                          testing::random_density(2, rng)));
  EXPECT_LT(max_abs(correlation_term(prod, s)), 1e-15);

  ComplexVector bell = ComplexVector::Zero(4);
  bell(0) = bell(3) = 1.0 / std::sqrt(2.0);
  const ComplexMatrix chi = correlation_term(DensityMatrix::pure(bell), s);
  EXPECT_GT(max_abs(chi), 0.1);
  EXPECT_LT(max_abs(partial_trace(chi, s, Subsystem::A)), 1e-15);
  EXPECT_LT(max_abs(partial_trace(chi, s, Subsystem::B)), 1e-15);

  for (int rep = 0; rep < 50; ++rep) {
    const DensityMatrix rho(testing::random_density(4, rng));
    const ComplexMatrix c = correlation_term(rho, s);
    const ComplexMatrix rebuilt =
        tensor_product(partial_trace(rho, s, Subsystem::A).matrix(),
                       partial_trace(rho, s, Subsystem::B).matrix()) +
        c;
    EXPECT_LT(max_abs(rebuilt - rho.matrix()), 1e-12);
    EXPECT_LT(max_abs(partial_trace(c, s, Subsystem::A)), 1e-10);
    EXPECT_LT(max_abs(partial_trace(c, s, Subsystem::B)), 1e-10);
  }
}

TEST(CorrelationTerm, PartialTracesVanishForUnequalFactors) {
  Rng rng(14);
  const BipartiteSplit s(3, 2);
  for (int rep = 0; rep < 50; ++rep) {
    const DensityMatrix rho(testing::random_density(6, rng));
    const ComplexMatrix c = correlation_term(rho, s);
    EXPECT_LT(max_abs(partial_trace(c, s, Subsystem::A)), 1e-10);
    EXPECT_LT(max_abs(partial_trace(c, s, Subsystem::B)), 1e-10);
  }
}

TEST(AverageEnergy, Examples) {
  const DensityMatrix rho(diag({0.5, 0.3, 0.2}));
  EXPECT_NEAR(average_energy(rho, HermitianOperator(diag({0, 1, 2}))), 0.7,
              1e-15);

  Rng rng(6);
  const HermitianOperator h(testing::random_hermitian(5, rng));
  EXPECT_NEAR(average_energy(DensityMatrix::maximally_mixed(5), h),
              h.matrix().trace().real() / 5.0, 1e-14);
}

TEST(AverageEnergy, MatchesDoubleSumOracleAndIsBasisInvariant) {
  Rng rng(7);
  for (int rep = 0; rep < 50; ++rep) {
    const std::size_t d = 2 + static_cast<std::size_t>(rep % 6);
    const DensityMatrix rho(testing::random_density(d, rng));
    const HermitianOperator h(testing::random_hermitian(d, rng));
    cplx sum = 0.0;
    for (std::size_t i = 0; i < d; ++i)
      for (std::size_t j = 0; j < d; ++j)
        sum += h.matrix()(i, j) * rho.matrix()(j, i);
    const double e = average_energy(rho, h);
    EXPECT_NEAR(e, sum.real(), 1e-12);

    const UnitaryOperator u(testing::haar_unitary(d, rng));
    const HermitianOperator hu(u.matrix() * h.matrix() * u.matrix().adjoint(),
                               EnergyUnit::natural, 1e-12);
    EXPECT_NEAR(average_energy(rho.transformed(u), hu), e, 1e-10);
  }
  EXPECT_THROW(average_energy(DensityMatrix::maximally_mixed(2),
                              HermitianOperator(diag({0, 1, 2}))),
               ValidationError);
}

TEST(DensityMatrix, Validation) {
  EXPECT_THROW(DensityMatrix(diag({0.5, 0.6})), ValidationError);
  EXPECT_THROW(DensityMatrix(diag({1.2, -0.2})), ValidationError);
  ComplexMatrix m = diag({0.5, 0.5});
  m(0, 1) = 0.1;
  EXPECT_THROW(DensityMatrix{m}, ValidationError);
  EXPECT_NO_THROW(DensityMatrix(diag({1.0 + 1e-11, -1e-11})));
}

TEST(UnitaryOperator, Validation) {
  EXPECT_THROW(UnitaryOperator(diag({1.0, 1.1})), ValidationError);
  Rng rng(9);
  EXPECT_NO_THROW(UnitaryOperator(testing::haar_unitary(6, rng)));
}

}  // namespace
}  // namespace qbind
