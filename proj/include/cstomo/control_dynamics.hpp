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
#include <numbers>
#include <vector>

#include "cstomo/spin_model.hpp"

namespace cstomo {

inline constexpr double kRfStepUs = 15.0;
inline constexpr double kUwStepUs = 10.0;

/// Piecewise-constant phase controls: two rf axes on 15 us steps, microwave on 10 us steps.
struct ControlWaveforms {
  double T_us = 0.0;
  std::uint64_t seed = 0;
  std::vector<double> phi_x;
  std::vector<double> phi_y;
  std::vector<double> phi_uw;

  /// Throws std::invalid_argument on length mismatch with T_us or phases outside [0, 2pi).
  void validate() const;
};

/// Rotating-frame drive strengths, all angular frequencies in rad/s.
struct ControlParams {
  double omega_rf_rad_per_s = 2.0 * std::numbers::pi * 25.0e3;
  double omega_uw_rad_per_s = 2.0 * std::numbers::pi * 27.5e3;
  double detuning_rf_rad_per_s = 0.0;
  double detuning_uw_rad_per_s = 0.0;
  /// Larmor response of f=3 relative to f=4.
  double g_ratio = -1.0;

  void validate() const;
};

/// Ensemble average over a Gaussian fractional spread of the rf amplitude.
struct InhomogeneityModel {
  bool enabled = false;
  double spread = 0.0;
  /// Standard-normal quadrature nodes x_j; sample j scales omega_rf by (1 + spread * x_j).
  std::vector<double> nodes{0.0};
  std::vector<double> weights{1.0};

  static InhomogeneityModel disabled() { return {}; }
  /// n-point Gauss-Hermite rule for the standard normal (Golub-Welsch).
  static InhomogeneityModel gauss_hermite(double spread, int n_samples);

  int n_samples() const { return static_cast<int>(nodes.size()); }
  void validate() const;
};

/// Heisenberg-picture observables O_i = U(t_i)^dag O_0 U(t_i) on a uniform sample grid.
struct ObservableSeries {
  double sample_dt_us = 1.0;
  std::vector<double> times_us;
  std::vector<Operator> observables;
  std::uint64_t waveforms_digest = 0;
  std::uint64_t params_digest = 0;
  std::uint64_t inhomogeneity_digest = 0;

  std::size_t size() const { return observables.size(); }
};

ControlWaveforms random_waveforms(double T_us, std::uint64_t seed);

/// H(t) in rad/s on the cesium ground manifold. Throws std::out_of_range unless 0 <= t < T.
Operator hamiltonian_at(const ControlWaveforms& waveforms, const ControlParams& params, double t_us);

/// exp(-i H dt) with H in rad/s and dt in microseconds, via eigendecomposition.
Operator propagator_step(const Operator& hamiltonian, double dt_us);

ObservableSeries evolve_observables(const ControlWaveforms& waveforms, const ControlParams& params,
                                    double sample_dt_us, double T_us);

ObservableSeries ensemble_observables(const ControlWaveforms& waveforms, const ControlParams& params,
                                      const InhomogeneityModel& inhomogeneity, double sample_dt_us,
                                      double T_us);

struct CompletenessReport {
  int rank = 0;
  /// sigma_max / sigma_min over the traceless columns (infinite when rank-deficient).
  double condition = 0.0;
  std::vector<double> singular_values;
};

/// Rank of A_{i,alpha} = K Tr(O_i E_alpha) over alpha >= 1, threshold 1e-9 * sigma_max.
CompletenessReport informational_completeness(const ObservableSeries& series, const HermitianBasis& basis,
                                              double K);

std::uint64_t digest(const ControlWaveforms& w);
std::uint64_t digest(const ControlParams& p);
std::uint64_t digest(const InhomogeneityModel& m);

}  // namespace cstomo
