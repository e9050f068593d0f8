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

#include "cstomo/control_dynamics.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <stdexcept>

#include "cstomo/digest.hpp"
#include "cstomo/rng.hpp"

namespace cstomo {
namespace {

constexpr double kTwoPi = 2.0 * std::numbers::pi;
constexpr double kTimeEps = 1e-9;
constexpr int kPolarCorrectionInterval = 500;

std::size_t step_count(double T_us, double step_us) {
  return static_cast<std::size_t>(std::ceil(T_us / step_us - kTimeEps));
}

// Block operators of the cesium manifold, embedded once.
struct DriveOperators {
  Operator fx3, fy3, fz3, fx4, fy4, fz4;
  Operator p4;
  Operator uw_raise;  // |4,4><3,3|
};

const DriveOperators& drive_operators() {
  static const DriveOperators ops = [] {
    const HilbertSpace space = HilbertSpace::cesium_ground();
    const Spin f3 = Spin::from_twice(6);
    const Spin f4 = Spin::from_twice(8);
    const AngularMomentum a3 = angular_momentum_ops(f3);
    const AngularMomentum a4 = angular_momentum_ops(f4);
    DriveOperators d;
    d.fx3 = embed_block(a3.fx, space, f3);
    d.fy3 = embed_block(a3.fy, space, f3);
    d.fz3 = embed_block(a3.fz, space, f3);
    d.fx4 = embed_block(a4.fx, space, f4);
    d.fy4 = embed_block(a4.fy, space, f4);
    d.fz4 = embed_block(a4.fz, space, f4);
    d.p4 = embed_block(Operator::Identity(9, 9), space, f4);
    d.uw_raise = Operator::Zero(space.dim(), space.dim());
    d.uw_raise(space.index(f4, 4), space.index(f3, 3)) = 1.0;
    return d;
  }();
  return ops;
}

Operator hamiltonian_from_phases(double phi_x, double phi_y, double phi_uw, const ControlParams& p) {
  const DriveOperators& d = drive_operators();
  const double w = p.omega_rf_rad_per_s;
  const double g = p.g_ratio;
  const double cx = std::cos(phi_x), sx = std::sin(phi_x);
  const double cy = std::cos(phi_y), sy = std::sin(phi_y);
  // The y coil is the x coil rotated by +90 degrees about z; f=3 sees the conjugate rotating frame.
  Operator h = w * ((cx - sy) * d.fx4 + (sx + cy) * d.fy4) + g * w * ((cx + sy) * d.fx3 + (cy - sx) * d.fy3);
  const Complex coupling = 0.5 * p.omega_uw_rad_per_s * std::polar(1.0, phi_uw);
  h += coupling * d.uw_raise + std::conj(coupling) * d.uw_raise.adjoint();
  h += p.detuning_rf_rad_per_s * (d.fz4 + g * d.fz3) + p.detuning_uw_rad_per_s * d.p4;
  return h;
}

void polar_correct(Operator& u) {
  Eigen::JacobiSVD<Operator> svd(u, Eigen::ComputeFullU | Eigen::ComputeFullV);
  u = svd.matrixU() * svd.matrixV().adjoint();
}

// Propagates one homogeneous member of the ensemble.
std::vector<Operator> propagate_series(const ControlWaveforms& w, const ControlParams& params,
                                       double sample_dt_us, std::size_t n_samples) {
  const Operator o0 = probe_observable(HilbertSpace::cesium_ground());
  const int d = static_cast<int>(o0.rows());
  std::vector<Operator> out;
  out.reserve(n_samples);
  out.push_back(o0);

  Operator u = Operator::Identity(d, d);
  double t = 0.0;
  long cached_ix = -1, cached_iuw = -1;
  Eigen::SelfAdjointEigenSolver<Operator> eig;
  double cached_len = -1.0;
  Operator step;
  int steps = 0;

  for (std::size_t i = 1; i < n_samples; ++i) {
    const double target = static_cast<double>(i) * sample_dt_us;
    while (t < target - kTimeEps) {
      const long ix = static_cast<long>(std::floor(t / kRfStepUs + kTimeEps));
      const long iuw = static_cast<long>(std::floor(t / kUwStepUs + kTimeEps));
      const double end = std::min({(ix + 1) * kRfStepUs, (iuw + 1) * kUwStepUs, target});
      const double len = end - t;
      if (ix != cached_ix || iuw != cached_iuw) {
        eig.compute(hamiltonian_from_phases(w.phi_x[ix], w.phi_y[ix], w.phi_uw[iuw], params));
        cached_ix = ix;
        cached_iuw = iuw;
        cached_len = -1.0;
      }
      if (std::abs(len - cached_len) > 1e-12) {
        const Eigen::VectorXcd phases =
            (eig.eigenvalues() * (-len * 1e-6)).unaryExpr([](double a) { return std::polar(1.0, a); });
        step = eig.eigenvectors() * phases.asDiagonal() * eig.eigenvectors().adjoint();
        cached_len = len;
      }
      u = step * u;
      t = end;
      if (++steps % kPolarCorrectionInterval == 0) polar_correct(u);
    }
    out.push_back(u.adjoint() * o0 * u);
  }
  return out;
}

std::size_t sample_count(double sample_dt_us, double T_us) {
  return static_cast<std::size_t>(std::floor(T_us / sample_dt_us + kTimeEps)) + 1;
}

void check_grid(const ControlWaveforms& w, double sample_dt_us, double T_us) {
  if (!(T_us > 0.0)) throw std::invalid_argument("T must be positive");
  if (!(sample_dt_us > 0.0)) throw std::invalid_argument("sample_dt must be positive");
  if (T_us > w.T_us + kTimeEps) throw std::invalid_argument("T exceeds waveform duration");
  w.validate();
}

}  // namespace

void ControlWaveforms::validate() const {
  if (!(T_us > 0.0)) throw std::invalid_argument("waveform duration must be positive");
  if (phi_x.size() != step_count(T_us, kRfStepUs) || phi_y.size() != step_count(T_us, kRfStepUs) ||
      phi_uw.size() != step_count(T_us, kUwStepUs)) {
    throw std::invalid_argument("waveform length does not match duration");
  }
  for (const auto* v : {&phi_x, &phi_y, &phi_uw}) {
    for (double phi : *v) {
      if (!(phi >= 0.0 && phi < kTwoPi)) throw std::invalid_argument("phase outside [0, 2pi)");
    }
  }
}

void ControlParams::validate() const {
  if (!(omega_rf_rad_per_s >= 0.0) || !(omega_uw_rad_per_s >= 0.0)) {
    throw std::invalid_argument("drive amplitudes must be non-negative");
  }
  if (!std::isfinite(detuning_rf_rad_per_s) || !std::isfinite(detuning_uw_rad_per_s) || !std::isfinite(g_ratio)) {
    throw std::invalid_argument("non-finite control parameter");
  }
}

InhomogeneityModel InhomogeneityModel::gauss_hermite(double spread, int n_samples) {
  if (n_samples < 1) throw std::invalid_argument("n_samples must be >= 1");
  if (!(spread >= 0.0)) throw std::invalid_argument("spread must be non-negative");
  // Jacobi matrix of the probabilists' Hermite recurrence: off-diagonal sqrt(k).
  Eigen::MatrixXd jacobi = Eigen::MatrixXd::Zero(n_samples, n_samples);
  for (int k = 1; k < n_samples; ++k) {
    jacobi(k - 1, k) = jacobi(k, k - 1) = std::sqrt(static_cast<double>(k));
  }
  Eigen::SelfAdjointEigenSolver<Eigen::MatrixXd> es(jacobi);
  InhomogeneityModel m;
  m.enabled = true;
  m.spread = spread;
  m.nodes.resize(n_samples);
  m.weights.resize(n_samples);
  double total = 0.0;
  for (int k = 0; k < n_samples; ++k) {
    m.nodes[k] = es.eigenvalues()(k);
    m.weights[k] = es.eigenvectors()(0, k) * es.eigenvectors()(0, k);
    total += m.weights[k];
  }
  for (double& wk : m.weights) wk /= total;
  // Symmetric rule: pin the centre node to exactly zero for odd n.
  if (n_samples % 2 == 1) m.nodes[n_samples / 2] = 0.0;
  return m;
}

void InhomogeneityModel::validate() const {
  if (nodes.empty() || nodes.size() != weights.size()) {
    throw std::invalid_argument("inhomogeneity needs n_samples >= 1 matching nodes and weights");
  }
  double total = 0.0;
  for (double wk : weights) {
    if (!(wk >= 0.0)) throw std::invalid_argument("negative quadrature weight");
    total += wk;
  }
  if (std::abs(total - 1.0) > 1e-12) throw std::invalid_argument("quadrature weights must sum to 1");
  if (!(spread >= 0.0)) throw std::invalid_argument("spread must be non-negative");
}

ControlWaveforms random_waveforms(double T_us, std::uint64_t seed) {
  if (!(T_us > 0.0)) throw std::invalid_argument("T must be positive");
  ControlWaveforms w;
  w.T_us = T_us;
  w.seed = seed;
  auto fill = [&](std::vector<double>& v, std::size_t n, std::uint64_t stream) {
    Engine eng = make_engine(derive_seed(seed, stream));
    std::uniform_real_distribution<double> uni(0.0, kTwoPi);
    v.resize(n);
    for (double& phi : v) {
      do {
        phi = uni(eng);
      } while (phi >= kTwoPi);
    }
  };
  fill(w.phi_x, step_count(T_us, kRfStepUs), 0);
  fill(w.phi_y, step_count(T_us, kRfStepUs), 1);
  fill(w.phi_uw, step_count(T_us, kUwStepUs), 2);
  return w;
}

Operator hamiltonian_at(const ControlWaveforms& waveforms, const ControlParams& params, double t_us) {
  if (!(t_us >= 0.0 && t_us < waveforms.T_us)) throw std::out_of_range("t outside [0, T)");
  const auto ix = static_cast<std::size_t>(std::floor(t_us / kRfStepUs));
  const auto iuw = static_cast<std::size_t>(std::floor(t_us / kUwStepUs));
  if (ix >= waveforms.phi_x.size() || iuw >= waveforms.phi_uw.size()) {
    throw std::out_of_range("t beyond waveform samples");
  }
  return hamiltonian_from_phases(waveforms.phi_x[ix], waveforms.phi_y[ix], waveforms.phi_uw[iuw], params);
}

Operator propagator_step(const Operator& hamiltonian, double dt_us) {
  const double scale = std::max(1.0, max_abs(hamiltonian));
  if (!is_hermitian(hamiltonian, 1e-12 * scale)) {
    throw std::invalid_argument("propagator_step requires a Hermitian operator");
  }
  Eigen::SelfAdjointEigenSolver<Operator> es(hamiltonian);
  const Eigen::VectorXcd phases =
      (es.eigenvalues() * (-dt_us * 1e-6)).unaryExpr([](double a) { return std::polar(1.0, a); });
  return es.eigenvectors() * phases.asDiagonal() * es.eigenvectors().adjoint();
}

ObservableSeries evolve_observables(const ControlWaveforms& waveforms, const ControlParams& params,
                                    double sample_dt_us, double T_us) {
  check_grid(waveforms, sample_dt_us, T_us);
  params.validate();
  ObservableSeries s;
  s.sample_dt_us = sample_dt_us;
  const std::size_t n = sample_count(sample_dt_us, T_us);
  s.times_us.resize(n);
  for (std::size_t i = 0; i < n; ++i) s.times_us[i] = static_cast<double>(i) * sample_dt_us;
  s.observables = propagate_series(waveforms, params, sample_dt_us, n);
  s.waveforms_digest = digest(waveforms);
  s.params_digest = digest(params);
  s.inhomogeneity_digest = digest(InhomogeneityModel::disabled());
  return s;
}

ObservableSeries ensemble_observables(const ControlWaveforms& waveforms, const ControlParams& params,
                                      const InhomogeneityModel& inhomogeneity, double sample_dt_us,
                                      double T_us) {
  inhomogeneity.validate();
  if (!inhomogeneity.enabled) return evolve_observables(waveforms, params, sample_dt_us, T_us);
  check_grid(waveforms, sample_dt_us, T_us);
  params.validate();

  ObservableSeries s;
  s.sample_dt_us = sample_dt_us;
  const std::size_t n = sample_count(sample_dt_us, T_us);
  s.times_us.resize(n);
  for (std::size_t i = 0; i < n; ++i) s.times_us[i] = static_cast<double>(i) * sample_dt_us;

  for (int j = 0; j < inhomogeneity.n_samples(); ++j) {
    ControlParams pj = params;
    pj.omega_rf_rad_per_s *= 1.0 + inhomogeneity.spread * inhomogeneity.nodes[j];
    std::vector<Operator> member = propagate_series(waveforms, pj, sample_dt_us, n);
    const double wj = inhomogeneity.weights[j];
    if (j == 0) {
      s.observables.resize(n);
      for (std::size_t i = 0; i < n; ++i) s.observables[i] = wj * member[i];
    } else {
      for (std::size_t i = 0; i < n; ++i) s.observables[i] += wj * member[i];
    }
  }
  // Every member starts from the same O_0; keep it exact.
  s.observables[0] = probe_observable(HilbertSpace::cesium_ground());
  s.waveforms_digest = digest(waveforms);
  s.params_digest = digest(params);
  s.inhomogeneity_digest = digest(inhomogeneity);
  return s;
}

CompletenessReport informational_completeness(const ObservableSeries& series, const HermitianBasis& basis,
                                              double K) {
  if (series.size() == 0) throw std::invalid_argument("empty observable series");
  const int cols = basis.size() - 1;
  Eigen::MatrixXd a(static_cast<Eigen::Index>(series.size()), cols);
  for (std::size_t i = 0; i < series.size(); ++i) {
    a.row(static_cast<Eigen::Index>(i)) = K * basis.expand(series.observables[i]).tail(cols).transpose();
  }
  Eigen::BDCSVD<Eigen::MatrixXd> svd(a);
  const Eigen::VectorXd& sv = svd.singularValues();
  CompletenessReport report;
  report.singular_values.assign(sv.data(), sv.data() + sv.size());
  const double smax = sv.size() > 0 ? sv(0) : 0.0;
  const double threshold = 1e-9 * smax;
  for (Eigen::Index k = 0; k < sv.size(); ++k) {
    if (sv(k) > threshold) ++report.rank;
  }
  if (report.rank == cols && smax > 0.0) {
    report.condition = smax / sv(sv.size() - 1);
  } else {
    report.condition = std::numeric_limits<double>::infinity();
  }
  return report;
}

std::uint64_t digest(const ControlWaveforms& w) {
  Fnv1a h;
  h.bytes("waveforms").f64(w.T_us).u64(w.seed).f64s(w.phi_x).f64s(w.phi_y).f64s(w.phi_uw);
  return h.value();
}

std::uint64_t digest(const ControlParams& p) {
  Fnv1a h;
  h.bytes("params")
      .f64(p.omega_rf_rad_per_s)
      .f64(p.omega_uw_rad_per_s)
      .f64(p.detuning_rf_rad_per_s)
      .f64(p.detuning_uw_rad_per_s)
      .f64(p.g_ratio);
  return h.value();
}

std::uint64_t digest(const InhomogeneityModel& m) {
  Fnv1a h;
  h.bytes("inhomogeneity").u64(m.enabled ? 1 : 0).f64(m.spread).f64s(m.nodes).f64s(m.weights);
  return h.value();
}

}  // namespace cstomo
