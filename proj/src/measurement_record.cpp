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

#include "cstomo/measurement_record.hpp"

#include <cmath>
#include <random>
#include <stdexcept>

#include "cstomo/digest.hpp"
#include "cstomo/rng.hpp"

namespace cstomo {
namespace {

std::size_t kept_count(const std::vector<double>& times, double T_us) {
  if (!(T_us > 0.0)) throw std::invalid_argument("truncation time must be positive");
  std::size_t n = 0;
  while (n < times.size() && times[n] <= T_us + 1e-9) ++n;
  return n;
}

}  // namespace

void MeasurementRecord::validate() const {
  if (times_us.size() != values.size()) throw std::invalid_argument("record times/values size mismatch");
  if (!noiseless.empty() && noiseless.size() != values.size()) {
    throw std::invalid_argument("record noiseless size mismatch");
  }
  for (std::size_t i = 0; i < values.size(); ++i) {
    if (!std::isfinite(values[i]) || !std::isfinite(times_us[i])) {
      throw std::invalid_argument("record contains non-finite values");
    }
    if (i > 0 && !(times_us[i] > times_us[i - 1])) {
      throw std::invalid_argument("record times must be strictly increasing");
    }
  }
  if (!(K > 0.0)) throw std::invalid_argument("gain K must be positive");
  if (!(sigma >= 0.0)) throw std::invalid_argument("sigma must be non-negative");
}

MeasurementRecord synthesize_record(const DensityMatrix& rho0, const ObservableSeries& series, double K,
                                    double sigma, std::uint64_t seed) {
  if (!(K > 0.0)) throw std::invalid_argument("gain K must be positive");
  if (!(sigma >= 0.0)) throw std::invalid_argument("sigma must be non-negative");
  if (series.size() == 0) throw std::invalid_argument("empty observable series");
  if (series.observables.front().rows() != rho0.dim()) {
    throw std::invalid_argument("synthesize_record: dimension mismatch");
  }
  MeasurementRecord rec;
  rec.times_us = series.times_us;
  rec.K = K;
  rec.sigma = sigma;
  rec.noise_seed = seed;
  rec.series_digest = digest(series);
  rec.values.resize(series.size());
  rec.noiseless.resize(series.size());
  Engine eng = make_engine(seed);
  std::normal_distribution<double> normal(0.0, 1.0);
  const Operator& rho = rho0.matrix();
  for (std::size_t i = 0; i < series.size(); ++i) {
    // Tr(rho O) = sum_jk rho_jk O_kj
    const double expectation = (rho.cwiseProduct(series.observables[i].transpose())).sum().real();
    rec.noiseless[i] = K * expectation;
    rec.values[i] = rec.noiseless[i] + sigma * normal(eng);
  }
  return rec;
}

MeasurementRecord truncate(const MeasurementRecord& record, double T_us) {
  const std::size_t n = kept_count(record.times_us, T_us);
  MeasurementRecord out = record;
  out.times_us.resize(n);
  out.values.resize(n);
  if (!out.noiseless.empty()) out.noiseless.resize(n);
  return out;
}

ObservableSeries truncate(const ObservableSeries& series, double T_us) {
  const std::size_t n = kept_count(series.times_us, T_us);
  ObservableSeries out = series;
  out.times_us.resize(n);
  out.observables.resize(n);
  return out;
}

DesignMatrix design_matrix(const ObservableSeries& series, const HermitianBasis& basis, double K) {
  DesignMatrix dm;
  dm.K = K;
  dm.series_digest = digest(series);
  dm.A.resize(static_cast<Eigen::Index>(series.size()), basis.size());
  for (std::size_t i = 0; i < series.size(); ++i) {
    dm.A.row(static_cast<Eigen::Index>(i)) = K * basis.expand(series.observables[i]).transpose();
  }
  return dm;
}

DesignMatrix truncate_rows(const DesignMatrix& design, Eigen::Index n) {
  if (n < 1 || n > design.rows()) throw std::invalid_argument("truncate_rows: row count out of range");
  DesignMatrix out;
  out.K = design.K;
  out.series_digest = design.series_digest;
  out.A = design.A.topRows(n);
  return out;
}

std::uint64_t digest(const ObservableSeries& series) {
  Fnv1a h;
  h.bytes("series")
      .f64(series.sample_dt_us)
      .u64(series.size())
      .u64(series.waveforms_digest)
      .u64(series.params_digest)
      .u64(series.inhomogeneity_digest);
  return h.value();
}

}  // namespace cstomo
