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
#include <numbers>
#include <random>

#include "cstomo/control_dynamics.hpp"
#include "oracles.hpp"

namespace cstomo {
namespace {

constexpr double kTwoPi = 2.0 * std::numbers::pi;

Eigen::VectorXd sorted_spectrum(const Operator& op) {
  Eigen::SelfAdjointEigenSolver<Operator> es(op, Eigen::EigenvaluesOnly);
  return es.eigenvalues();
}

TEST(Waveforms, StepCounts) {
  const auto w = random_waveforms(30.0, 1);
  EXPECT_EQ(w.phi_x.size(), 2u);
  EXPECT_EQ(w.phi_y.size(), 2u);
  EXPECT_EQ(w.phi_uw.size(), 3u);
  const auto w3 = random_waveforms(3000.0, 7);
  EXPECT_EQ(w3.phi_x.size(), 200u);
  EXPECT_EQ(w3.phi_uw.size(), 300u);
  EXPECT_THROW(random_waveforms(0.0, 1), std::invalid_argument);
}

TEST(Waveforms, DeterministicAndUniform) {
  const auto a = random_waveforms(3000.0, 42);
  const auto b = random_waveforms(3000.0, 42);
  EXPECT_EQ(a.phi_x, b.phi_x);
  EXPECT_EQ(a.phi_y, b.phi_y);
  EXPECT_EQ(a.phi_uw, b.phi_uw);
  EXPECT_NE(a.phi_x, random_waveforms(3000.0, 43).phi_x);

  // 10^4 phases: mean pi within 3 sigma, sigma = 2 pi / sqrt(12 n).
  const auto big = random_waveforms(150000.0, 5);
  ASSERT_EQ(big.phi_x.size(), 10000u);
  double sum = 0.0;
  for (double p : big.phi_x) {
    EXPECT_GE(p, 0.0);
    EXPECT_LT(p, kTwoPi);
    sum += p;
  }
  EXPECT_NEAR(sum / 1e4, std::numbers::pi, 3.0 * kTwoPi / std::sqrt(12.0 * 1e4));
}

TEST(Waveforms, ValidateRejectsBadPhases) {
  auto w = random_waveforms(30.0, 1);
  w.phi_x[0] = kTwoPi;
  EXPECT_THROW(w.validate(), std::invalid_argument);
  w = random_waveforms(30.0, 1);
  w.phi_uw.pop_back();
  EXPECT_THROW(w.validate(), std::invalid_argument);
}

TEST(Hamiltonian, HermitianAndRangeChecked) {
  const auto w = random_waveforms(300.0, 3);
  const ControlParams p;
  for (double t : {0.0, 7.0, 14.999, 15.0, 299.0}) EXPECT_TRUE(is_hermitian(hamiltonian_at(w, p, t), 1e-9));
  EXPECT_THROW(hamiltonian_at(w, p, 300.0), std::out_of_range);
  EXPECT_THROW(hamiltonian_at(w, p, -1.0), std::out_of_range);
}

TEST(Hamiltonian, DetuningOnlyWithoutDrives) {
  const auto w = random_waveforms(30.0, 3);
  ControlParams p;
  p.omega_rf_rad_per_s = 0.0;
  p.omega_uw_rad_per_s = 0.0;
  EXPECT_LT(max_abs(hamiltonian_at(w, p, 1.0)), 1e-300);
  p.detuning_rf_rad_per_s = 100.0;
  const auto space = HilbertSpace::cesium_ground();
  const Operator expected = 100.0 * (embed_block(angular_momentum_ops(4.0).fz, space, Spin::from_double(4)) -
                                     embed_block(angular_momentum_ops(3.0).fz, space, Spin::from_double(3)));
  EXPECT_LT(max_abs(hamiltonian_at(w, p, 1.0) - expected), 1e-12);
}

TEST(Hamiltonian, MicrowaveTwoLevelAlgebra) {
  const auto w = random_waveforms(30.0, 9);
  ControlParams p;
  p.omega_rf_rad_per_s = 0.0;
  const Operator h = hamiltonian_at(w, p, 12.0);
  const auto space = HilbertSpace::cesium_ground();
  const int a = space.index(Spin::from_double(3), 3);
  const int b = space.index(Spin::from_double(4), 4);
  const Operator h2 = h * h;
  const double expected = std::pow(0.5 * p.omega_uw_rad_per_s, 2);
  EXPECT_NEAR(h2(a, a).real(), expected, 1e-9 * expected);
  EXPECT_NEAR(h2(b, b).real(), expected, 1e-9 * expected);
  EXPECT_NEAR(std::abs(h2(a, b)), 0.0, 1e-9 * expected);
  // Nothing else is coupled.
  EXPECT_NEAR(h.norm(), std::sqrt(2.0) * 0.5 * p.omega_uw_rad_per_s, 1e-9 * expected);
  EXPECT_NEAR(std::arg(h(b, a)), w.phi_uw[1] > std::numbers::pi ? w.phi_uw[1] - kTwoPi : w.phi_uw[1], 1e-12);
}

TEST(Propagator, ZeroHamiltonianIsIdentity) {
  EXPECT_LT(max_abs(propagator_step(Operator::Zero(16, 16), 15.0) - Operator::Identity(16, 16)), 1e-15);
}

TEST(Propagator, DiagonalPhases) {
  const auto space = HilbertSpace::cesium_ground();
  const Operator fz = embed_block(angular_momentum_ops(3.0).fz, space, Spin::from_double(3));
  // pi phase per unit m over 1 us.
  const Operator u = propagator_step(fz * (std::numbers::pi * 1e6), 1.0);
  for (int k = 0; k < 16; ++k) {
    const double m = fz(k, k).real();
    EXPECT_NEAR(std::abs(u(k, k) - std::polar(1.0, -m * std::numbers::pi)), 0.0, 1e-12);
  }
}

TEST(Propagator, UnitaryAndMatchesTaylorOracle) {
  std::mt19937_64 eng(11);
  for (int trial = 0; trial < 5; ++trial) {
    const Operator h = oracle::random_hermitian(16, eng, 2.0 * std::numbers::pi * 3e4);
    const Operator u = propagator_step(h, 15.0);
    EXPECT_LT(max_abs(u.adjoint() * u - Operator::Identity(16, 16)), 1e-11);
    EXPECT_LT(max_abs(u - oracle::expm_taylor(h, 15e-6)), 1e-10);
  }
  Operator bad = Operator::Zero(2, 2);
  bad(0, 1) = 1.0;
  EXPECT_THROW(propagator_step(bad, 1.0), std::invalid_argument);
}

TEST(Evolution, SampleCountAndProbeAtZero) {
  const auto w = random_waveforms(300.0, 7);
  const auto s = evolve_observables(w, ControlParams{}, 1.0, 300.0);
  EXPECT_EQ(s.size(), 301u);
  EXPECT_DOUBLE_EQ(s.times_us.back(), 300.0);
  EXPECT_LT(max_abs(s.observables[0] - probe_observable(HilbertSpace::cesium_ground())), 1e-300);
  EXPECT_EQ(evolve_observables(w, ControlParams{}, 7.0, 300.0).size(), 43u);
}

TEST(Evolution, MatchesIndependentStepPropagation) {
  const auto w = random_waveforms(120.0, 21);
  const ControlParams p;
  const auto s = evolve_observables(w, p, 1.0, 120.0);
  const Operator o0 = probe_observable(HilbertSpace::cesium_ground());
  Operator u = Operator::Identity(16, 16);
  for (int i = 1; i <= 120; ++i) {
    // Controls are constant on every 1 us interval (both step lengths are multiples of it).
    u = oracle::expm_taylor(hamiltonian_at(w, p, i - 0.5), 1e-6) * u;
    EXPECT_LT(max_abs(s.observables[i] - u.adjoint() * o0 * u), 1e-10) << "sample " << i;
  }
}

TEST(Evolution, TracelessAndIsospectral) {
  const auto w = random_waveforms(3000.0, 7);
  const auto s = evolve_observables(w, ControlParams{}, 1.0, 3000.0);
  const Eigen::VectorXd ref = sorted_spectrum(s.observables[0]);
  double worst_trace = 0.0, worst_spectrum = 0.0;
  for (std::size_t i = 0; i < s.size(); i += 7) {
    worst_trace = std::max(worst_trace, std::abs(s.observables[i].trace()));
    worst_spectrum = std::max(worst_spectrum, (sorted_spectrum(s.observables[i]) - ref).cwiseAbs().maxCoeff());
  }
  EXPECT_LT(worst_trace, 1e-10);
  EXPECT_LT(worst_spectrum, 1e-9);
}

TEST(Inhomogeneity, GaussHermiteMoments) {
  const auto m = InhomogeneityModel::gauss_hermite(0.02, 5);
  ASSERT_EQ(m.n_samples(), 5);
  double m0 = 0, m1 = 0, m2 = 0, m4 = 0, m6 = 0;
  for (int k = 0; k < 5; ++k) {
    const double x = m.nodes[k], wk = m.weights[k];
    m0 += wk;
    m1 += wk * x;
    m2 += wk * x * x;
    m4 += wk * std::pow(x, 4);
    m6 += wk * std::pow(x, 6);
  }
  EXPECT_NEAR(m0, 1.0, 1e-13);
  EXPECT_NEAR(m1, 0.0, 1e-13);
  EXPECT_NEAR(m2, 1.0, 1e-12);
  EXPECT_NEAR(m4, 3.0, 1e-11);
  EXPECT_NEAR(m6, 15.0, 1e-10);
  EXPECT_EQ(m.nodes[2], 0.0);
  EXPECT_THROW(InhomogeneityModel::gauss_hermite(-0.1, 5), std::invalid_argument);
  EXPECT_THROW(InhomogeneityModel::gauss_hermite(0.1, 0), std::invalid_argument);
}

TEST(Inhomogeneity, DegenerateModelsReduceToHomogeneous) {
  const auto w = random_waveforms(300.0, 4);
  const ControlParams p;
  const auto homo = evolve_observables(w, p, 1.0, 300.0);
  for (const auto& m : {InhomogeneityModel::disabled(), InhomogeneityModel::gauss_hermite(0.0, 5),
                        InhomogeneityModel::gauss_hermite(0.3, 1)}) {
    const auto ens = ensemble_observables(w, p, m, 1.0, 300.0);
    ASSERT_EQ(ens.size(), homo.size());
    double worst = 0.0;
    for (std::size_t i = 0; i < ens.size(); ++i) {
      worst = std::max(worst, max_abs(ens.observables[i] - homo.observables[i]));
    }
    EXPECT_LT(worst, 1e-12);
  }
}

TEST(Inhomogeneity, AveragedObservablesStayTraceless) {
  const auto w = random_waveforms(500.0, 4);
  const auto ens = ensemble_observables(w, ControlParams{}, InhomogeneityModel::gauss_hermite(0.02, 5), 1.0, 500.0);
  const auto homo = evolve_observables(w, ControlParams{}, 1.0, 500.0);
  double worst = 0.0, diff = 0.0;
  for (std::size_t i = 0; i < ens.size(); ++i) {
    worst = std::max(worst, std::abs(ens.observables[i].trace()));
    diff = std::max(diff, max_abs(ens.observables[i] - homo.observables[i]));
  }
  EXPECT_LT(worst, 1e-10);
  EXPECT_GT(diff, 1e-3);  // The average is not the homogeneous series.
  EXPECT_NE(ens.inhomogeneity_digest, homo.inhomogeneity_digest);
}

TEST(Completeness, SingleObservableHasRankOne) {
  const auto w = random_waveforms(30.0, 4);
  auto s = evolve_observables(w, ControlParams{}, 1.0, 30.0);
  s.times_us.resize(1);
  s.observables.resize(1);
  const auto rep = informational_completeness(s, HermitianBasis(16), 1.0);
  EXPECT_EQ(rep.rank, 1);
}

}  // namespace
}  // namespace cstomo
