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

#include <filesystem>
#include <sstream>

#include "cstomo/io.hpp"

namespace cstomo {
namespace {

namespace fs = std::filesystem;

class IoTest : public ::testing::Test {
 protected:
  void SetUp() override {
    const std::string name = ::testing::UnitTest::GetInstance()->current_test_info()->name();
    dir_ = fs::temp_directory_path() / ("cstomo_io_" + name);
    fs::remove_all(dir_);
  }
  void TearDown() override { fs::remove_all(dir_); }
  fs::path dir_;
};

TEST_F(IoTest, DensityRoundTripIsBitExact) {
  const auto rho = DensityMatrix::from_pure(haar_random_pure_state(16, 4));
  io::write_json(dir_ / "rho.json", io::density_to_json(rho));
  const auto back = io::density_from_json(io::read_json(dir_ / "rho.json"));
  EXPECT_EQ(back.matrix(), rho.matrix());
}

TEST_F(IoTest, WaveformsRoundTrip) {
  const auto w = random_waveforms(600.0, 9);
  io::write_json(dir_ / "w.json", io::waveforms_to_json(w));
  const auto back = io::waveforms_from_json(io::read_json(dir_ / "w.json"));
  EXPECT_EQ(back.T_us, w.T_us);
  EXPECT_EQ(back.seed, w.seed);
  EXPECT_EQ(back.phi_x, w.phi_x);
  EXPECT_EQ(back.phi_y, w.phi_y);
  EXPECT_EQ(back.phi_uw, w.phi_uw);
}

TEST_F(IoTest, RecordRoundTripWithSidecar) {
  const auto series = evolve_observables(random_waveforms(60.0, 9), ControlParams{}, 1.0, 60.0);
  const auto rec = synthesize_record(DensityMatrix::from_pure(haar_random_pure_state(16, 2)), series, 1.5, 0.1, 77);
  const fs::path csv = dir_ / "rec.csv";
  io::write_record(csv, rec, 0xabcULL);
  EXPECT_TRUE(fs::exists(io::sidecar_path(csv)));
  const std::string text = io::read_text(csv);
  EXPECT_EQ(text.rfind("# config_digest: ", 0), 0u);
  EXPECT_NE(text.find("\nt_us,M\n"), std::string::npos);
  const auto back = io::read_record(csv);
  EXPECT_EQ(back.times_us, rec.times_us);
  EXPECT_EQ(back.values, rec.values);
  EXPECT_EQ(back.K, 1.5);
  EXPECT_EQ(back.sigma, 0.1);
  EXPECT_EQ(back.noise_seed, 77u);
}

TEST_F(IoTest, EstimateAndRuleRoundTrip) {
  Estimate e;
  e.kind = EstimatorKind::kCompressedSensing;
  e.rho_bar = DensityMatrix::from_pure(haar_random_pure_state(16, 5));
  e.residual = 0.123456789012345678;
  e.iterations = 42;
  e.multiplier = 3.5e-3;
  e.pre_normalization_trace = 0.97;
  e.constraint_residual = 0.11;
  e.converged = true;
  const auto back = io::estimate_from_json(io::estimate_to_json(e, 1));
  EXPECT_EQ(back.kind, e.kind);
  EXPECT_EQ(back.rho_bar.matrix(), e.rho_bar.matrix());
  EXPECT_EQ(back.residual, e.residual);
  EXPECT_EQ(back.iterations, e.iterations);
  EXPECT_EQ(back.multiplier, e.multiplier);
  EXPECT_EQ(back.converged, e.converged);

  EpsilonRule rule;
  rule.slope = 1.0 / 3.0;
  rule.intercept = 0.0;
  rule.calibration_T_us = {100.0, 200.0};
  rule.calibration_samples = {100.0, 200.0};
  rule.calibration_epsilon = {33.0, 67.0};
  rule.calibration_fidelity = {0.9, 0.95};
  const auto rb = io::epsilon_rule_from_json(io::epsilon_rule_to_json(rule, 1));
  EXPECT_EQ(rb.slope, rule.slope);
  EXPECT_EQ(rb.calibration_epsilon, rule.calibration_epsilon);
}

TEST_F(IoTest, SuiteConfigRoundTripAndDigest) {
  SuiteConfig c;
  c.n_states = 5;
  c.sigma = 0.07;
  c.truth.inhomogeneity = InhomogeneityModel::gauss_hermite(0.02, 5);
  c.solver.kkt_tol = 1e-9;
  const auto doc = io::suite_config_to_json(c);
  const auto back = io::suite_config_from_json(doc);
  EXPECT_EQ(io::suite_config_to_json(back), doc);
  EXPECT_EQ(back.truth.inhomogeneity.nodes, c.truth.inhomogeneity.nodes);
  SuiteConfig other = c;
  other.threads = 7;
  EXPECT_EQ(io::config_digest(io::suite_config_to_json(other)), io::config_digest(doc));
  other.noise_seed += 1;
  EXPECT_NE(io::config_digest(io::suite_config_to_json(other)), io::config_digest(doc));
}

TEST_F(IoTest, CurvesCsvRoundTrip) {
  FidelityCurves c;
  c.T_us = {100.0, 200.0};
  c.cs_stats = {{0.5, 0.75}, {0.1, 0.05}, {3, 3}};
  c.ls_stats = {{0.4, 0.6}, {0.1, 0.05}, {3, 2}};
  io::write_text(dir_ / "curves.csv", io::curves_csv(c, 5));
  const auto t = io::read_curves_csv(dir_ / "curves.csv");
  EXPECT_EQ(t.T_ms, (std::vector<double>{0.1, 0.2}));
  EXPECT_EQ(t.cs_mean, c.cs_stats.mean);
  EXPECT_EQ(t.ls_mean, c.ls_stats.mean);
  const std::string text = io::curves_csv(c, 5);
  EXPECT_NE(text.find("T_ms,F_CS,sd_CS,F_LS,sd_LS,n_states"), std::string::npos);
}

TEST_F(IoTest, MalformedInputsAreFormatErrors) {
  EXPECT_THROW(io::read_text(dir_ / "missing.json"), io::FormatError);
  io::write_text(dir_ / "bad.json", "{not json");
  EXPECT_THROW(io::read_json(dir_ / "bad.json"), io::FormatError);
  io::write_text(dir_ / "bad.csv", "t_us,M\n0,abc\n");
  EXPECT_THROW(io::read_record(dir_ / "bad.csv"), io::FormatError);
  io::Json doc = {{"dim", 2}, {"re", {1.0, 0.0}}, {"im", {0.0, 0.0}}};
  EXPECT_THROW(io::operator_from_json(doc), io::FormatError);
}

TEST(FormatDouble, SeventeenDigits) {
  EXPECT_EQ(io::format_double(0.1), "0.10000000000000001");
  std::istringstream in(io::format_double(1.0 / 3.0));
  double v = 0.0;
  in >> v;
  EXPECT_EQ(v, 1.0 / 3.0);
}

}  // namespace
}  // namespace cstomo
