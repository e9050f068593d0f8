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

#pragma once

#include <cstdint>
#include <functional>
#include <optional>
#include <stdexcept>
#include <string>
#include <vector>

#include "cstomo/control_dynamics.hpp"
#include "cstomo/convex_estimators.hpp"
#include "cstomo/measurement_record.hpp"
#include "cstomo/spin_model.hpp"

namespace cstomo {

/// Dynamical model used either to generate records (truth) or to reconstruct them.
struct ModelDescriptor {
  ControlParams params;
  InhomogeneityModel inhomogeneity;
};

struct SuiteConfig {
  /// One calibration state plus n_states - 1 evaluation states.
  int n_states = 49;
  double T_total_us = 3000.0;
  /// Record lengths evaluated; defaults to 100 us .. 3000 us in 100 us steps.
  std::vector<double> T_grid_us = default_T_grid();
  /// Record lengths used for epsilon calibration; empty means T_grid_us.
  std::vector<double> calibration_T_grid_us;
  double sample_dt_us = 1.0;
  double K = 1.0;
  double sigma = 0.03;
  std::uint64_t waveform_seed = 7;
  std::uint64_t state_seed = 11;
  std::uint64_t noise_seed = 13;
  ModelDescriptor truth;
  ModelDescriptor reconstruction;
  SolverConfig solver;
  /// Worker threads for the (state, T) map; 0 picks hardware concurrency. Output is independent of it.
  int threads = 0;
  /// Keep every per-(state, T) estimate in the result.
  bool keep_estimates = false;

  static std::vector<double> default_T_grid();
  void validate() const;
};

struct CurveStats {
  std::vector<double> mean;
  std::vector<double> sd;
  std::vector<int> count;
};

/// Fidelity versus record length. Missing (failed) points are NaN and excluded from the statistics.
struct FidelityCurves {
  std::vector<double> T_us;
  std::vector<int> state_index;
  /// [state][T]
  std::vector<std::vector<double>> cs;
  std::vector<std::vector<double>> ls;
  CurveStats cs_stats;
  CurveStats ls_stats;
};

struct PointOutcome {
  double fidelity = 0.0;
  double residual = 0.0;
  /// Empty on success, otherwise the solver's error class.
  std::string error;
  std::optional<Estimate> estimate;
};

struct SuiteResult {
  FidelityCurves curves;
  /// [state][T], evaluation states only.
  std::vector<std::vector<PointOutcome>> cs;
  std::vector<std::vector<PointOutcome>> ls;
  EpsilonRule epsilon_rule;
};

class FitError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

struct FitResult {
  double tau_ms = 0.0;
  double window_ms = 1.0;
  int n_points = 0;
  /// sqrt(sum (F - fit)^2)
  double residual_norm = 0.0;
  /// residual_norm / sqrt(sum F^2)
  double relative_residual = 0.0;
};

struct ErrorPenalty {
  std::vector<double> T_us;
  std::vector<double> cs;
  std::vector<double> ls;
};

struct MismatchResult {
  SuiteResult well_modeled;
  SuiteResult mismatched;
  ErrorPenalty eta;
};

struct MixedComparison {
  std::vector<double> T_us;
  CurveStats pure;
  CurveStats mixed;
  FitResult pure_fit;
  FitResult mixed_fit;
};

/// Calibrates epsilon(N) on state 0, then reconstructs states 1..n_states-1 at every T.
SuiteResult run_suite(const SuiteConfig& config);
/// Same, with a given epsilon rule instead of calibrating.
SuiteResult run_suite(const SuiteConfig& config, const EpsilonRule& rule);

/// The calibration step of run_suite on its own.
EpsilonRule calibrate_suite_epsilon(const SuiteConfig& config);

/// One-parameter least-squares fit of F(T) = (15/16)(1 - exp(-T/tau)) + 1/16 over T < window.
FitResult fit_exponential(const std::vector<double>& T_ms, const std::vector<double>& fidelity,
                          double window_ms = 1.0);

ErrorPenalty error_penalty(const FidelityCurves& a, const FidelityCurves& b);

/// Runs the suite with the reconstruction model equal to the truth model and again with the
/// inhomogeneity average left out. Seeds, states and records are shared.
MismatchResult mismatch_experiment(const SuiteConfig& config);

/// LS time constants for Haar-pure inputs and for the maximally mixed input.
MixedComparison mixed_state_comparison(const SuiteConfig& config);

/// Index of the largest mean fidelity (first on ties).
std::size_t peak_index(const CurveStats& stats);

/// Deterministic parallel map over [0, n): results are written by index.
void parallel_for(std::size_t n, int threads, const std::function<void(std::size_t)>& body);

}  // namespace cstomo
