// Copyright 2026 The cstomo Authors
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
#include <random>

#include "cstomo/spin_model.hpp"
#include "oracles.hpp"

namespace cstomo {
namespace {

const Complex kI(0.0, 1.0);

TEST(Spin, RejectsNonHalfInteger) {
  EXPECT_THROW(Spin::from_double(1.3), std::invalid_argument);
  EXPECT_THROW(Spin::from_double(-0.5), std::invalid_argument);
  EXPECT_EQ(Spin::from_double(3.5).twice(), 7);
  EXPECT_EQ(Spin::from_double(4).multiplicity(), 9);
}

TEST(AngularMomentum, SpinHalfIsPauliOverTwo) {
  const auto j = angular_momentum_ops(0.5);
  Operator fz(2, 2);
  fz << -0.5, 0.0, 0.0, 0.5;
  EXPECT_LT(max_abs(j.fz - fz), 1e-15);
  EXPECT_NEAR(std::abs(j.fx(0, 1)), 0.5, 1e-15);
}

TEST(AngularMomentum, CasimirAndCommutators) {
  for (double f : {0.5, 1.0, 3.0, 4.0}) {
    const auto j = angular_momentum_ops(f);
    const int n = j.fz.rows();
    const Operator casimir = j.fx * j.fx + j.fy * j.fy + j.fz * j.fz;
    EXPECT_LT(max_abs(casimir - f * (f + 1.0) * Operator::Identity(n, n)), 1e-12) << "f=" << f;
    EXPECT_LT(max_abs(j.fx * j.fy - j.fy * j.fx - kI * j.fz), 1e-13) << "f=" << f;
    EXPECT_LT(max_abs(j.fy * j.fz - j.fz * j.fy - kI * j.fx), 1e-13) << "f=" << f;
    EXPECT_LT(max_abs(j.fz * j.fx - j.fx * j.fz - kI * j.fy), 1e-13) << "f=" << f;
  }
}

TEST(HilbertSpace, CesiumLayout) {
  const auto space = HilbertSpace::cesium_ground();
  EXPECT_EQ(space.dim(), 16);
  EXPECT_EQ(space.index(Spin::from_double(3), -3), 0);
  EXPECT_EQ(space.index(Spin::from_double(3), 3), 6);
  EXPECT_EQ(space.index(Spin::from_double(4), -4), 7);
  EXPECT_EQ(space.index(Spin::from_double(4), 4), 15);
  EXPECT_THROW(space.index(Spin::from_double(4), 5), std::invalid_argument);
  EXPECT_THROW(space.block(Spin::from_double(2)), std::invalid_argument);
  EXPECT_EQ(space.labels().size(), 16u);
}

TEST(EmbedBlock, IdentityTraceAndSpectrum) {
  const auto space = HilbertSpace::cesium_ground();
  const Spin f3 = Spin::from_double(3);
  const Operator id = embed_block(Operator::Identity(7, 7), space, f3);
  for (int k = 0; k < 16; ++k) EXPECT_EQ(id(k, k).real(), k < 7 ? 1.0 : 0.0);

  std::mt19937_64 eng(3);
  const Operator op = oracle::random_hermitian(7, eng);
  EXPECT_NEAR(std::abs(embed_block(op, space, f3).trace() - op.trace()), 0.0, 1e-13);

  Eigen::SelfAdjointEigenSolver<Operator> es(embed_block(angular_momentum_ops(3.0).fz, space, f3));
  std::vector<double> expected = {-3, -2, -1, 0, 0, 0, 0, 0, 0, 0, 0, 0, 0, 1, 2, 3};
  for (int k = 0; k < 16; ++k) EXPECT_NEAR(es.eigenvalues()(k), expected[k], 1e-12);
}

TEST(ProbeObservable, StretchedStateExpectations) {
  const auto space = HilbertSpace::cesium_ground();
  const Operator o = probe_observable(space);
  EXPECT_NEAR(std::abs(o.trace()), 0.0, 1e-15);
  const int i33 = space.index(Spin::from_double(3), 3);
  const int i44 = space.index(Spin::from_double(4), 4);
  EXPECT_NEAR(o(i33, i33).real(), 3.0, 1e-15);
  EXPECT_NEAR(o(i44, i44).real(), 0.0, 1e-15);
}

TEST(HermitianBasis, QubitBasisIsPauliOverRootTwo) {
  const HermitianBasis basis(2);
  ASSERT_EQ(basis.size(), 4);
  // Each element must be +-sigma_k / sqrt(2) for a distinct k.
  std::vector<bool> seen(4, false);
  for (int a = 0; a < 4; ++a) {
    const Operator e = basis.element(a);
    int match = -1;
    for (int k = 0; k < 4; ++k) {
      const Operator p = oracle::pauli(k) / std::sqrt(2.0);
      if (max_abs(e - p) < 1e-15 || max_abs(e + p) < 1e-15) match = k;
    }
    ASSERT_GE(match, 0) << "element " << a;
    EXPECT_FALSE(seen[match]);
    seen[match] = true;
  }
  EXPECT_LT(max_abs(basis.element(0) - oracle::pauli(0) / std::sqrt(2.0)), 1e-15);
}

TEST(HermitianBasis, OrthonormalAtSeveralDimensions) {
  for (int d : {2, 3, 5}) {
    const HermitianBasis basis(d);
    for (int a = 0; a < basis.size(); ++a) {
      const Operator ea = basis.element(a);
      EXPECT_TRUE(is_hermitian(ea, 0.0));
      for (int b = 0; b < basis.size(); ++b) {
        const Complex g = (ea * basis.element(b)).trace();
        EXPECT_NEAR(g.real(), a == b ? 1.0 : 0.0, 1e-12);
        EXPECT_NEAR(g.imag(), 0.0, 1e-12);
      }
    }
  }
}

TEST(HermitianBasis, ExpandMatchesDenseTraceAndRoundTrips) {
  std::mt19937_64 eng(17);
  for (int d : {2, 3, 16}) {
    const HermitianBasis basis(d);
    std::vector<Operator> elements;
    for (int a = 0; a < basis.size(); ++a) elements.push_back(basis.element(a));
    for (int trial = 0; trial < 5; ++trial) {
      const Operator h = oracle::random_hermitian(d, eng);
      const CoefficientVector r = basis.expand(h);
      EXPECT_LT((r - oracle::coefficients(h, elements)).cwiseAbs().maxCoeff(), 1e-12);
      EXPECT_LT(max_abs(basis.reconstruct(r) - h), 1e-12);
      EXPECT_NEAR(r(0) * std::sqrt(static_cast<double>(d)), h.trace().real(), 1e-12);
    }
  }
}

TEST(HermitianBasis, MaximallyMixedCoefficients) {
  const HermitianBasis basis(16);
  const CoefficientVector r = basis.expand(DensityMatrix::maximally_mixed(16).matrix());
  EXPECT_NEAR(r(0), 0.25, 1e-15);
  EXPECT_LT(r.tail(255).cwiseAbs().maxCoeff(), 1e-15);
}

TEST(PureState, NormValidation) {
  StateVector v = StateVector::Zero(3);
  v(0) = 1.1;
  EXPECT_THROW(PureState{v}, std::invalid_argument);
  EXPECT_NEAR(PureState::normalized(v).amplitudes().norm(), 1.0, 1e-15);
}

TEST(DensityMatrix, Validation) {
  Operator rho = Operator::Zero(2, 2);
  rho(0, 0) = 1.2;
  rho(1, 1) = -0.2;
  EXPECT_THROW(DensityMatrix{rho}, std::invalid_argument);
  rho(0, 0) = 0.5;
  rho(1, 1) = 0.4;
  EXPECT_THROW(DensityMatrix{rho}, std::invalid_argument);
  rho(1, 1) = 0.5;
  rho(0, 1) = 0.1;
  EXPECT_THROW(DensityMatrix{rho}, std::invalid_argument);
  rho(1, 0) = 0.1;
  EXPECT_NO_THROW(DensityMatrix{rho});
}

TEST(HaarState, NormalizedAndDeterministic) {
  for (std::uint64_t seed = 0; seed < 20; ++seed) {
    const auto psi = haar_random_pure_state(16, seed);
    EXPECT_NEAR(psi.amplitudes().norm(), 1.0, 1e-12);
    EXPECT_EQ(psi.amplitudes(), haar_random_pure_state(16, seed).amplitudes());
  }
  EXPECT_NE(haar_random_pure_state(16, 1).amplitudes(), haar_random_pure_state(16, 2).amplitudes());
}

TEST(HaarState, QubitPopulationIsUniform) {
  // |<0|psi>|^2 is uniform on [0, 1] for Haar qubits: mean 1/2, variance 1/12.
  const int n = 10000;
  double sum = 0.0;
  for (int s = 0; s < n; ++s) sum += std::norm(haar_random_pure_state(2, 1000 + s).amplitudes()(0));
  const double mean = sum / n;
  EXPECT_NEAR(mean, 0.5, 3.0 * std::sqrt(1.0 / 12.0 / n));
}

TEST(Fidelity, Examples) {
  const auto psi = haar_random_pure_state(16, 5);
  EXPECT_NEAR(fidelity(psi, DensityMatrix::from_pure(psi)), 1.0, 1e-12);
  EXPECT_NEAR(fidelity(psi, DensityMatrix::maximally_mixed(16)), 0.0625, 1e-15);
  const auto e0 = PureState::basis(16, 0);
  EXPECT_EQ(fidelity(e0, DensityMatrix::from_pure(PureState::basis(16, 3))), 0.0);
}

TEST(Fidelity, MaximallyMixedMetric) {
  EXPECT_NEAR(fidelity_with_maximally_mixed(DensityMatrix::maximally_mixed(16)), 1.0, 1e-12);
  EXPECT_NEAR(fidelity_with_maximally_mixed(DensityMatrix::from_pure(haar_random_pure_state(16, 9))), 1.0 / 16,
              1e-7);
}

}  // namespace
}  // namespace cstomo
