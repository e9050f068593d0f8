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
#include <vector>

#include "cstomo/control_dynamics.hpp"
#include "cstomo/spin_model.hpp"

namespace cstomo {

/// Sampled probe signal M_i = K <f_z(t_i)> + sigma w_i.
struct MeasurementRecord {
  std::vector<double> times_us;
  std::vector<double> values;
  /// Noiseless component K Tr(rho0 O_i); empty for records not generated here.
  /// Diagnostics only, the estimators never read it.
  std::vector<double> noiseless;
  double K = 1.0;
  double sigma = 0.0;
  std::uint64_t noise_seed = 0;
  std::uint64_t series_digest = 0;

  std::size_t size() const { return values.size(); }
  Eigen::Map<const Eigen::VectorXd> as_vector() const {
    return {values.data(), static_cast<Eigen::Index>(values.size())};
  }
  /// Throws std::invalid_argument on non-increasing times, size mismatch or non-finite values.
  void validate() const;
};

/// Linear map r -> predicted record, A(i, alpha) = K Tr(O_i E_alpha).
struct DesignMatrix {
  Eigen::MatrixXd A;
  double K = 1.0;
  std::uint64_t series_digest = 0;

  Eigen::Index rows() const { return A.rows(); }
};

MeasurementRecord synthesize_record(const DensityMatrix& rho0, const ObservableSeries& series, double K,
                                    double sigma, std::uint64_t seed);

/// Keeps samples with t_i <= T. Throws std::invalid_argument for T <= 0.
MeasurementRecord truncate(const MeasurementRecord& record, double T_us);
ObservableSeries truncate(const ObservableSeries& series, double T_us);

DesignMatrix design_matrix(const ObservableSeries& series, const HermitianBasis& basis, double K);

/// First n rows of an existing design matrix (same index set as truncate()).
DesignMatrix truncate_rows(const DesignMatrix& design, Eigen::Index n);

std::uint64_t digest(const ObservableSeries& series);

}  // namespace cstomo
