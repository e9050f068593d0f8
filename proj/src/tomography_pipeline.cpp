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

#include "cstomo/tomography_pipeline.hpp"

#include <algorithm>
#include <atomic>
#include <cmath>
#include <exception>
#include <limits>
#include <mutex>
#include <thread>

#include "cstomo/rng.hpp"

namespace cstomo {
namespace {

constexpr double kNaN = std::numeric_limits<double>::quiet_NaN();
constexpr int kDim = 16;

// Stream indices for derive_seed.
constexpr std::uint64_t kMixedNoiseStream = 1ULL << 32;

struct SharedInputs {
  ControlWaveforms waveforms;
  ObservableSeries truth;
  ObservableSeries model;
};

SharedInputs build_inputs(const SuiteConfig& cfg, bool model_is_truth) {
  SharedInputs in;
  in.waveforms = random_waveforms(cfg.T_total_us, cfg.waveform_seed);
  in.truth = ensemble_observables(in.waveforms, cfg.truth.params, cfg.truth.inhomogeneity, cfg.sample_dt_us,
                                  cfg.T_total_us);
  if (model_is_truth) {
    in.model = in.truth;
  } else {
    in.model = ensemble_observables(in.waveforms, cfg.reconstruction.params, cfg.reconstruction.inhomogeneity,
                                    cfg.sample_dt_us, cfg.T_total_us);
  }
  return in;
}

bool same_model(const ModelDescriptor& a, const ModelDescriptor& b) {
  return digest(a.params) == digest(b.params) && digest(a.inhomogeneity) == digest(b.inhomogeneity);
}

std::vector<Eigen::Index> rows_for_grid(const ObservableSeries& series, const std::vector<double>& T_grid) {
  std::vector<Eigen::Index> rows;
  rows.reserve(T_grid.size());
  for (double T : T_grid) rows.push_back(static_cast<Eigen::Index>(truncate(series, T).size()));
  return rows;
}

// Gram matrices for every prefix length, accumulated in increasing row order.
std::vector<std::shared_ptr<const GramData>> prefix_grams(const Eigen::MatrixXd& A,
                                                          const std::vector<Eigen::Index>& rows,
                                                          int power_iterations) {
  std::vector<std::size_t> order(rows.size());
  for (std::size_t k = 0; k < order.size(); ++k) order[k] = k;
  std::stable_sort(order.begin(), order.end(), [&](std::size_t x, std::size_t y) { return rows[x] < rows[y]; });
  std::vector<std::shared_ptr<const GramData>> out(rows.size());
  Eigen::MatrixXd acc = Eigen::MatrixXd::Zero(A.cols(), A.cols());
  Eigen::Index done = 0;
  for (std::size_t k : order) {
    if (rows[k] > done) {
      acc.selfadjointView<Eigen::Lower>().rankUpdate(A.middleRows(done, rows[k] - done).transpose());
      done = rows[k];
    }
    out[k] = gram_from_matrix(acc.selfadjointView<Eigen::Lower>(), power_iterations);
  }
  return out;
}

CurveStats summarize(const std::vector<std::vector<double>>& per_state, std::size_t n_T) {
  CurveStats st;
  st.mean.assign(n_T, kNaN);
  st.sd.assign(n_T, kNaN);
  st.count.assign(n_T, 0);
  for (std::size_t k = 0; k < n_T; ++k) {
    double sum = 0.0;
    int n = 0;
    for (const auto& row : per_state) {
      if (std::isfinite(row[k])) {
        sum += row[k];
        ++n;
      }
    }
    st.count[k] = n;
    if (n == 0) continue;
    const double mean = sum / n;
    double ss = 0.0;
    for (const auto& row : per_state) {
      if (std::isfinite(row[k])) ss += (row[k] - mean) * (row[k] - mean);
    }
    st.mean[k] = mean;
    st.sd[k] = n > 1 ? std::sqrt(ss / (n - 1)) : 0.0;
  }
  return st;
}

PointOutcome run_point(const PureState& psi, const QuadraticProblem& problem, EstimatorKind kind, double epsilon,
                       const SolverConfig& solver, bool keep) {
  PointOutcome out;
  try {
    Estimate est = kind == EstimatorKind::kLeastSquares ? solve_ls(problem, solver)
                                                        : solve_cs(problem, epsilon, solver);
    out.fidelity = fidelity(psi, est.rho_bar);
    out.residual = est.residual;
    if (keep) out.estimate = std::move(est);
  } catch (const SolverError& e) {
    out.fidelity = kNaN;
    out.residual = kNaN;
    out.error = e.error_class();
  }
  return out;
}

PureState suite_state(const SuiteConfig& cfg, int s) {
  return haar_random_pure_state(kDim, derive_seed(cfg.state_seed, static_cast<std::uint64_t>(s)));
}

EpsilonRule calibrate_on(const SuiteConfig& cfg, const SharedInputs& in) {
  const auto& grid = cfg.calibration_T_grid_us.empty() ? cfg.T_grid_us : cfg.calibration_T_grid_us;
  return calibrate_epsilon(suite_state(cfg, 0), in.truth, in.model, cfg.K, cfg.sigma, grid,
                           derive_seed(cfg.noise_seed, 0), cfg.solver);
}

SuiteResult run_suite_on(const SuiteConfig& cfg, const SharedInputs& in, const EpsilonRule* given_rule) {
  const HermitianBasis basis(kDim);
  const DesignMatrix design = design_matrix(in.model, basis, cfg.K);
  const std::vector<Eigen::Index> rows = rows_for_grid(in.model, cfg.T_grid_us);
  const auto grams = prefix_grams(design.A, rows, cfg.solver.power_iterations);

  std::vector<PureState> states;
  std::vector<MeasurementRecord> records;
  for (int s = 0; s < cfg.n_states; ++s) {
    states.push_back(suite_state(cfg, s));
    records.push_back(synthesize_record(DensityMatrix::from_pure(states.back()), in.truth, cfg.K, cfg.sigma,
                                        derive_seed(cfg.noise_seed, s)));
  }

  SuiteResult result;
  result.epsilon_rule = given_rule ? *given_rule : calibrate_on(cfg, in);

  const std::size_t n_eval = static_cast<std::size_t>(cfg.n_states - 1);
  const std::size_t n_T = cfg.T_grid_us.size();
  result.cs.assign(n_eval, std::vector<PointOutcome>(n_T));
  result.ls.assign(n_eval, std::vector<PointOutcome>(n_T));

  parallel_for(n_eval * n_T, cfg.threads, [&](std::size_t task) {
    const std::size_t s = task / n_T;
    const std::size_t k = task % n_T;
    const MeasurementRecord& rec = records[s + 1];
    const Eigen::Index n = rows[k];
    const QuadraticProblem problem(design.A, n, rec.as_vector().head(n), grams[k]);
    const PureState& psi = states[s + 1];
    result.ls[s][k] = run_point(psi, problem, EstimatorKind::kLeastSquares, 0.0, cfg.solver, cfg.keep_estimates);
    result.cs[s][k] = run_point(psi, problem, EstimatorKind::kCompressedSensing,
                                result.epsilon_rule(static_cast<double>(n)), cfg.solver, cfg.keep_estimates);
  });

  FidelityCurves& c = result.curves;
  c.T_us = cfg.T_grid_us;
  for (std::size_t s = 0; s < n_eval; ++s) {
    c.state_index.push_back(static_cast<int>(s + 1));
    std::vector<double> fc(n_T), fl(n_T);
    for (std::size_t k = 0; k < n_T; ++k) {
      fc[k] = result.cs[s][k].fidelity;
      fl[k] = result.ls[s][k].fidelity;
    }
    c.cs.push_back(std::move(fc));
    c.ls.push_back(std::move(fl));
  }
  c.cs_stats = summarize(c.cs, n_T);
  c.ls_stats = summarize(c.ls, n_T);
  return result;
}

double fit_model(double T, double tau) { return (15.0 / 16.0) * (1.0 - std::exp(-T / tau)) + 1.0 / 16.0; }

}  // namespace

std::vector<double> SuiteConfig::default_T_grid() {
  std::vector<double> grid;
  for (int k = 1; k <= 30; ++k) grid.push_back(100.0 * k);
  return grid;
}

void SuiteConfig::validate() const {
  if (n_states < 2) throw std::invalid_argument("n_states must be >= 2");
  if (!(T_total_us > 0.0)) throw std::invalid_argument("T_total must be positive");
  if (T_grid_us.empty()) throw std::invalid_argument("T grid is empty");
  for (const auto* grid : {&T_grid_us, &calibration_T_grid_us}) {
    for (double T : *grid) {
      if (!(T > 0.0 && T <= T_total_us + 1e-9)) throw std::invalid_argument("T grid must lie in (0, T_total]");
    }
  }
  if (!(sample_dt_us > 0.0)) throw std::invalid_argument("sample_dt must be positive");
  if (!(K > 0.0)) throw std::invalid_argument("K must be positive");
  if (!(sigma >= 0.0)) throw std::invalid_argument("sigma must be non-negative");
  truth.params.validate();
  truth.inhomogeneity.validate();
  reconstruction.params.validate();
  reconstruction.inhomogeneity.validate();
  solver.validate();
  if (threads < 0) throw std::invalid_argument("threads must be >= 0");
}

void parallel_for(std::size_t n, int threads, const std::function<void(std::size_t)>& body) {
  std::size_t workers = threads > 0 ? static_cast<std::size_t>(threads)
                                    : std::max<std::size_t>(1, std::thread::hardware_concurrency());
  workers = std::min(workers, n);
  if (workers <= 1) {
    for (std::size_t i = 0; i < n; ++i) body(i);
    return;
  }
  std::atomic<std::size_t> next{0};
  std::exception_ptr failure;
  std::mutex failure_mutex;
  std::vector<std::thread> pool;
  pool.reserve(workers);
  for (std::size_t w = 0; w < workers; ++w) {
    pool.emplace_back([&] {
      for (std::size_t i = next++; i < n; i = next++) {
        try {
          body(i);
        } catch (...) {
          std::lock_guard<std::mutex> lock(failure_mutex);
          if (!failure) failure = std::current_exception();
        }
      }
    });
  }
  for (auto& t : pool) t.join();
  if (failure) std::rethrow_exception(failure);
}

SuiteResult run_suite(const SuiteConfig& config) {
  config.validate();
  const SharedInputs in = build_inputs(config, same_model(config.truth, config.reconstruction));
  return run_suite_on(config, in, nullptr);
}

SuiteResult run_suite(const SuiteConfig& config, const EpsilonRule& rule) {
  config.validate();
  const SharedInputs in = build_inputs(config, same_model(config.truth, config.reconstruction));
  return run_suite_on(config, in, &rule);
}

EpsilonRule calibrate_suite_epsilon(const SuiteConfig& config) {
  config.validate();
  return calibrate_on(config, build_inputs(config, same_model(config.truth, config.reconstruction)));
}

FitResult fit_exponential(const std::vector<double>& T_ms, const std::vector<double>& fidelity, double window_ms) {
  if (T_ms.size() != fidelity.size()) throw std::invalid_argument("fit: T and F differ in length");
  std::vector<double> ts, fs;
  for (std::size_t k = 0; k < T_ms.size(); ++k) {
    if (T_ms[k] < window_ms && std::isfinite(fidelity[k])) {
      ts.push_back(T_ms[k]);
      fs.push_back(fidelity[k]);
    }
  }
  if (ts.size() < 3) throw FitError("fit needs at least 3 points inside the window");
  const auto [lo_it, hi_it] = std::minmax_element(fs.begin(), fs.end());
  if (*hi_it - *lo_it <= 1e-12) throw FitError("degenerate (constant) fidelity curve");

  auto sse = [&](double tau) {
    double s = 0.0;
    for (std::size_t k = 0; k < ts.size(); ++k) {
      const double e = fs[k] - fit_model(ts[k], tau);
      s += e * e;
    }
    return s;
  };
  // Coarse scan in log tau, then golden-section, then Gauss-Newton polish.
  const double log_lo = std::log(1e-4), log_hi = std::log(1e4);
  const int n_scan = 400;
  int best = 0;
  double best_sse = std::numeric_limits<double>::infinity();
  for (int i = 0; i <= n_scan; ++i) {
    const double v = sse(std::exp(log_lo + (log_hi - log_lo) * i / n_scan));
    if (v < best_sse) {
      best_sse = v;
      best = i;
    }
  }
  if (best == 0 || best == n_scan) throw FitError("time constant outside the fit range");
  const double step = (log_hi - log_lo) / n_scan;
  double a = log_lo + (best - 1) * step, b = log_lo + (best + 1) * step;
  const double inv_phi = (std::sqrt(5.0) - 1.0) / 2.0;
  double c = b - inv_phi * (b - a), d = a + inv_phi * (b - a);
  double fc = sse(std::exp(c)), fd = sse(std::exp(d));
  for (int it = 0; it < 100 && b - a > 1e-12; ++it) {
    if (fc < fd) {
      b = d;
      d = c;
      fd = fc;
      c = b - inv_phi * (b - a);
      fc = sse(std::exp(c));
    } else {
      a = c;
      c = d;
      fc = fd;
      d = a + inv_phi * (b - a);
      fd = sse(std::exp(d));
    }
  }
  double tau = std::exp(0.5 * (a + b));
  for (int it = 0; it < 50; ++it) {
    double jtj = 0.0, jtr = 0.0;
    for (std::size_t k = 0; k < ts.size(); ++k) {
      const double e = std::exp(-ts[k] / tau);
      const double j = -(15.0 / 16.0) * e * ts[k] / (tau * tau);
      jtj += j * j;
      jtr += j * (fs[k] - fit_model(ts[k], tau));
    }
    if (!(jtj > 0.0)) break;
    const double delta = jtr / jtj;
    const double candidate = tau + delta;
    if (!(candidate > 0.0) || sse(candidate) > sse(tau)) break;
    tau = candidate;
    if (std::abs(delta) <= 1e-15 * tau) break;
  }

  FitResult fr;
  fr.tau_ms = tau;
  fr.window_ms = window_ms;
  fr.n_points = static_cast<int>(ts.size());
  fr.residual_norm = std::sqrt(sse(tau));
  double norm = 0.0;
  for (double f : fs) norm += f * f;
  fr.relative_residual = fr.residual_norm / std::sqrt(norm);
  return fr;
}

ErrorPenalty error_penalty(const FidelityCurves& a, const FidelityCurves& b) {
  if (a.T_us != b.T_us) throw std::invalid_argument("error_penalty: T grids differ");
  ErrorPenalty eta;
  eta.T_us = a.T_us;
  for (std::size_t k = 0; k < a.T_us.size(); ++k) {
    eta.cs.push_back(a.cs_stats.mean[k] - b.cs_stats.mean[k]);
    eta.ls.push_back(a.ls_stats.mean[k] - b.ls_stats.mean[k]);
  }
  return eta;
}

MismatchResult mismatch_experiment(const SuiteConfig& config) {
  config.validate();
  if (!config.truth.inhomogeneity.enabled) {
    throw std::invalid_argument("mismatch experiment needs an inhomogeneous truth model");
  }
  SuiteConfig well = config;
  well.reconstruction = config.truth;
  SuiteConfig mis = config;
  mis.reconstruction.params = config.truth.params;
  mis.reconstruction.inhomogeneity = InhomogeneityModel::disabled();

  SharedInputs in = build_inputs(well, true);
  MismatchResult out;
  out.well_modeled = run_suite_on(well, in, nullptr);
  in.model = evolve_observables(in.waveforms, mis.reconstruction.params, mis.sample_dt_us, mis.T_total_us);
  out.mismatched = run_suite_on(mis, in, nullptr);
  out.eta = error_penalty(out.well_modeled.curves, out.mismatched.curves);
  return out;
}

MixedComparison mixed_state_comparison(const SuiteConfig& config) {
  config.validate();
  if (!(config.sigma > 0.0)) throw std::invalid_argument("mixed-state comparison needs sigma > 0");
  const SharedInputs in = build_inputs(config, same_model(config.truth, config.reconstruction));
  const HermitianBasis basis(kDim);
  const DesignMatrix design = design_matrix(in.model, basis, config.K);
  const std::vector<Eigen::Index> rows = rows_for_grid(in.model, config.T_grid_us);
  const auto grams = prefix_grams(design.A, rows, config.solver.power_iterations);

  const std::size_t n_eval = static_cast<std::size_t>(config.n_states - 1);
  const std::size_t n_T = config.T_grid_us.size();
  std::vector<PureState> states;
  std::vector<MeasurementRecord> pure_records, mixed_records;
  for (std::size_t s = 1; s <= n_eval; ++s) {
    states.push_back(suite_state(config, static_cast<int>(s)));
    pure_records.push_back(synthesize_record(DensityMatrix::from_pure(states.back()), in.truth, config.K,
                                             config.sigma, derive_seed(config.noise_seed, s)));
    mixed_records.push_back(synthesize_record(DensityMatrix::maximally_mixed(kDim), in.truth, config.K,
                                              config.sigma, derive_seed(config.noise_seed, kMixedNoiseStream + s)));
  }
  std::vector<std::vector<double>> fp(n_eval, std::vector<double>(n_T)), fm = fp;
  parallel_for(n_eval * n_T, config.threads, [&](std::size_t task) {
    const std::size_t s = task / n_T;
    const std::size_t k = task % n_T;
    const Eigen::Index n = rows[k];
    const QuadraticProblem pure(design.A, n, pure_records[s].as_vector().head(n), grams[k]);
    fp[s][k] = fidelity(states[s], solve_ls(pure, config.solver).rho_bar);
    const QuadraticProblem mixed(design.A, n, mixed_records[s].as_vector().head(n), grams[k]);
    fm[s][k] = fidelity_with_maximally_mixed(solve_ls(mixed, config.solver).rho_bar);
  });

  MixedComparison out;
  out.T_us = config.T_grid_us;
  out.pure = summarize(fp, n_T);
  out.mixed = summarize(fm, n_T);
  std::vector<double> T_ms;
  for (double T : config.T_grid_us) T_ms.push_back(T / 1000.0);
  out.pure_fit = fit_exponential(T_ms, out.pure.mean);
  out.mixed_fit = fit_exponential(T_ms, out.mixed.mean);
  return out;
}

std::size_t peak_index(const CurveStats& stats) {
  std::size_t best = 0;
  double best_v = -std::numeric_limits<double>::infinity();
  for (std::size_t k = 0; k < stats.mean.size(); ++k) {
    if (std::isfinite(stats.mean[k]) && stats.mean[k] > best_v) {
      best_v = stats.mean[k];
      best = k;
    }
  }
  return best;
}

}  // namespace cstomo
