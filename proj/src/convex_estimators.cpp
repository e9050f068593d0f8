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

#include "cstomo/convex_estimators.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <numeric>

#include "cstomo/rng.hpp"

namespace cstomo {
namespace {

constexpr double kTiny = 1e-300;
constexpr int kStallWindow = 25;
// Golden-section refinement steps of the epsilon calibration (bracket shrinks to 0.618^n).
constexpr int kGoldenSteps = 10;
// Multiplier range searched below mu_max, as a ratio.
constexpr double kMultiplierRange = 1e-12;

Operator hermitian_part(const Operator& m) { return 0.5 * (m + m.adjoint()); }

void require_hermitian(const Operator& h) {
  const double scale = std::max(1.0, max_abs(h));
  if (!is_hermitian(h, 1e-10 * scale)) throw std::invalid_argument("projection requires a Hermitian operator");
}

// Accelerated projected gradient on F(r) = Delta(r) + linear * r_0 with function-value restart.
struct FistaResult {
  CoefficientVector r;
  double objective = 0.0;
  int iterations = 0;
  bool converged = false;
};

template <class Projection>
FistaResult fista(const QuadraticProblem& p, CoefficientVector x, double linear, Projection project,
                  const SolverConfig& cfg) {
  const HermitianBasis& basis = p.basis();
  const Eigen::MatrixXd& g = p.gram();
  const Eigen::VectorXd& b = p.atm();
  const double lip = p.lipschitz();
  FistaResult out;

  auto objective = [&](const CoefficientVector& r, const Eigen::VectorXd& gr) {
    return p.residual_gram(r, gr) + linear * r(0);
  };

  Eigen::VectorXd gx = g * x;
  double fx = objective(x, gx);
  if (!(lip > 0.0)) {
    // Zero design: Delta is constant, only the linear term acts.
    CoefficientVector z = x;
    z(0) -= linear;
    out.r = basis.expand(project(basis.reconstruct(z)));
    gx = g * out.r;
    out.objective = objective(out.r, gx);
    out.iterations = 1;
    out.converged = true;
    return out;
  }

  const double kkt_threshold = cfg.kkt_tol * (2.0 * b.norm() + std::abs(linear));
  CoefficientVector y = x;
  Eigen::VectorXd gy = gx;
  double t = 1.0;
  bool momentum = false;
  int stall = 0;
  int it = 0;
  for (; it < cfg.max_iterations; ++it) {
    CoefficientVector z = y - (2.0 / lip) * (gy - b);
    z(0) -= linear / lip;
    CoefficientVector xn = basis.expand(project(basis.reconstruct(z)));
    Eigen::VectorXd gxn = g * xn;
    const double fn = objective(xn, gxn);
    const double mapping = lip * (y - xn).norm();

    if (fn > fx && momentum && cfg.restart) {
      y = x;
      gy = gx;
      t = 1.0;
      momentum = false;
      continue;
    }
    if (fn > fx) {
      // A plain projected step cannot increase F in exact arithmetic, so an increase of
      // round-off size means the objective is resolved to machine precision.
      const double roundoff = 1e3 * std::numeric_limits<double>::epsilon() * (std::abs(fx) + p.mtm());
      out.converged = mapping <= kkt_threshold || fn - fx <= roundoff;
      ++it;
      break;
    }
    const double rel = (fx - fn) / std::max(std::abs(fn), kTiny);
    stall = rel < cfg.objective_tol ? stall + 1 : 0;

    const double tn = 0.5 * (1.0 + std::sqrt(1.0 + 4.0 * t * t));
    const double beta = (t - 1.0) / tn;
    y = xn + beta * (xn - x);
    gy = gxn + beta * (gxn - gx);
    momentum = beta > 0.0;
    x = std::move(xn);
    gx = std::move(gxn);
    fx = fn;
    t = tn;
    if (mapping <= kkt_threshold || stall >= kStallWindow) {
      out.converged = true;
      ++it;
      break;
    }
  }
  out.r = std::move(x);
  out.objective = fx;
  out.iterations = it;
  return out;
}

double power_iteration(const Eigen::MatrixXd& g, int iterations) {
  if (g.rows() == 0) return 0.0;
  Engine eng = make_engine(0x5eedULL);
  std::uniform_real_distribution<double> uni(0.5, 1.5);
  Eigen::VectorXd v(g.rows());
  for (Eigen::Index k = 0; k < v.size(); ++k) v(k) = uni(eng);
  double lambda = 0.0;
  for (int k = 0; k < iterations; ++k) {
    const double n = v.norm();
    if (!(n > 0.0)) return 0.0;
    v /= n;
    Eigen::VectorXd w = g * v;
    lambda = v.dot(w);
    v = std::move(w);
  }
  return lambda;
}

DensityMatrix to_density(const Operator& m) { return DensityMatrix(hermitian_part(m)); }

}  // namespace

void SolverConfig::validate() const {
  if (max_iterations < 1) throw std::invalid_argument("max_iterations must be >= 1");
  if (!(objective_tol > 0.0) || !(kkt_tol > 0.0) || !(epsilon_rel_tol > 0.0)) {
    throw std::invalid_argument("solver tolerances must be positive");
  }
  if (power_iterations < 1 || max_multiplier_steps < 1) {
    throw std::invalid_argument("iteration counts must be >= 1");
  }
}

const char* to_string(EstimatorKind kind) {
  return kind == EstimatorKind::kLeastSquares ? "ls" : "cs";
}

EstimatorKind estimator_from_string(const std::string& name) {
  if (name == "ls") return EstimatorKind::kLeastSquares;
  if (name == "cs") return EstimatorKind::kCompressedSensing;
  throw std::invalid_argument("unknown estimator '" + name + "' (expected ls or cs)");
}

std::shared_ptr<const GramData> make_gram(const Eigen::Ref<const Eigen::MatrixXd>& A, int power_iterations) {
  auto data = std::make_shared<GramData>();
  data->gram = Eigen::MatrixXd::Zero(A.cols(), A.cols());
  data->gram.selfadjointView<Eigen::Lower>().rankUpdate(A.transpose());
  data->gram = data->gram.selfadjointView<Eigen::Lower>();
  // Power iteration underestimates lambda_max slightly; keep a 1% margin on the step.
  data->lipschitz = 2.0 * 1.01 * power_iteration(data->gram, power_iterations);
  return data;
}

std::shared_ptr<const GramData> gram_from_matrix(Eigen::MatrixXd gram, int power_iterations) {
  auto data = std::make_shared<GramData>();
  data->gram = std::move(gram);
  data->lipschitz = 2.0 * 1.01 * power_iteration(data->gram, power_iterations);
  return data;
}

QuadraticProblem::QuadraticProblem(const MeasurementRecord& record, const DesignMatrix& design,
                                   const SolverConfig& config)
    : design_(nullptr),
      owned_design_(design.A),
      rows_(design.rows()),
      record_(record.as_vector()),
      basis_(static_cast<int>(std::lround(std::sqrt(static_cast<double>(design.A.cols()))))) {
  if (record.size() == 0 || design.rows() == 0) throw std::invalid_argument("empty record");
  if (static_cast<Eigen::Index>(record.size()) != design.rows()) {
    throw std::invalid_argument("record and design matrix have different lengths");
  }
  if (basis_.size() != design.A.cols()) throw std::invalid_argument("design matrix width is not d^2");
  design_ = &owned_design_;
  gram_ = make_gram(owned_design_, config.power_iterations);
  atm_ = owned_design_.transpose() * record_;
  mtm_ = record_.squaredNorm();
}

QuadraticProblem::QuadraticProblem(const Eigen::MatrixXd& design, Eigen::Index rows, Eigen::VectorXd record,
                                   std::shared_ptr<const GramData> gram)
    : design_(&design),
      rows_(rows),
      record_(std::move(record)),
      gram_(std::move(gram)),
      basis_(static_cast<int>(std::lround(std::sqrt(static_cast<double>(design.cols()))))) {
  if (rows_ < 1 || rows_ > design.rows()) throw std::invalid_argument("empty record");
  if (record_.size() != rows_) throw std::invalid_argument("record and design matrix have different lengths");
  if (basis_.size() != design.cols()) throw std::invalid_argument("design matrix width is not d^2");
  if (!gram_ || gram_->gram.rows() != design.cols()) throw std::invalid_argument("Gram size mismatch");
  atm_ = design.topRows(rows_).transpose() * record_;
  mtm_ = record_.squaredNorm();
}

double QuadraticProblem::residual(const CoefficientVector& r) const {
  return (record_ - design_->topRows(rows_) * r).squaredNorm();
}

double QuadraticProblem::residual_gram(const CoefficientVector& r, const Eigen::VectorXd& gr) const {
  return mtm_ - 2.0 * atm_.dot(r) + r.dot(gr);
}

double residual_delta(const DensityMatrix& rho, const MeasurementRecord& record, const DesignMatrix& design) {
  if (static_cast<Eigen::Index>(record.size()) != design.rows()) {
    throw std::invalid_argument("record and design matrix have different lengths");
  }
  if (static_cast<Eigen::Index>(rho.dim()) * rho.dim() != design.A.cols()) {
    throw std::invalid_argument("state dimension does not match design matrix");
  }
  const HermitianBasis basis(rho.dim());
  return (record.as_vector() - design.A * basis.expand(rho.matrix())).squaredNorm();
}

Eigen::VectorXd project_simplex(const Eigen::VectorXd& v) {
  const Eigen::Index n = v.size();
  if (n == 0) throw std::invalid_argument("project_simplex: empty vector");
  std::vector<double> u(v.data(), v.data() + n);
  std::sort(u.begin(), u.end(), std::greater<>());
  double cumulative = 0.0;
  double theta = 0.0;
  for (Eigen::Index k = 0; k < n; ++k) {
    cumulative += u[k];
    const double candidate = (cumulative - 1.0) / static_cast<double>(k + 1);
    if (u[k] - candidate > 0.0) theta = candidate;
  }
  Eigen::VectorXd p = (v.array() - theta).max(0.0).matrix();
  const double s = p.sum();
  if (s > 0.0) p /= s;
  return p;
}

Operator project_psd(const Operator& h) {
  require_hermitian(h);
  Eigen::SelfAdjointEigenSolver<Operator> es(hermitian_part(h));
  const Eigen::VectorXd lam = es.eigenvalues().cwiseMax(0.0);
  return hermitian_part(es.eigenvectors() * lam.asDiagonal() * es.eigenvectors().adjoint());
}

Operator project_density(const Operator& h) {
  require_hermitian(h);
  Eigen::SelfAdjointEigenSolver<Operator> es(hermitian_part(h));
  const Eigen::VectorXd p = project_simplex(es.eigenvalues());
  return hermitian_part(es.eigenvectors() * p.asDiagonal() * es.eigenvectors().adjoint());
}

Estimate solve_ls(const MeasurementRecord& record, const DesignMatrix& design, const SolverConfig& config) {
  config.validate();
  return solve_ls(QuadraticProblem(record, design, config), config);
}

Estimate solve_ls(const QuadraticProblem& problem, const SolverConfig& config) {
  config.validate();
  const int d = problem.dim();
  const HermitianBasis& basis = problem.basis();
  CoefficientVector start = basis.expand(Operator::Identity(d, d) / static_cast<double>(d));
  FistaResult fr = fista(problem, std::move(start), 0.0, project_density, config);

  Estimate est;
  est.kind = EstimatorKind::kLeastSquares;
  Operator rho = basis.reconstruct(fr.r);
  rho /= rho.trace().real();
  est.rho_bar = to_density(rho);
  est.residual = problem.residual(basis.expand(est.rho_bar.matrix()));
  est.iterations = fr.iterations;
  est.converged = fr.converged;
  est.constraint_residual = est.residual;
  return est;
}

// ---------------------------------------------------------------------------
// Lagrangian path for the trace-minimization estimator

LagrangianPath::LagrangianPath(const QuadraticProblem& problem, SolverConfig config)
    : problem_(problem), config_(config) {
  config_.validate();
  Eigen::SelfAdjointEigenSolver<Operator> es(problem_.basis().reconstruct(problem_.atm()),
                                             Eigen::EigenvaluesOnly);
  mu_max_ = std::max(0.0, 2.0 * es.eigenvalues().maxCoeff());
}

const LagrangianPath::Point& LagrangianPath::at(double mu) {
  if (auto it = cache_.find(mu); it != cache_.end()) return it->second;
  const HermitianBasis& basis = problem_.basis();
  CoefficientVector start = CoefficientVector::Zero(basis.size());
  if (!cache_.empty()) {
    // Warm start from the cached multiplier nearest in log scale.
    auto hi = cache_.lower_bound(mu);
    auto best = cache_.end();
    double best_gap = std::numeric_limits<double>::infinity();
    for (auto it : {hi, hi == cache_.begin() ? cache_.end() : std::prev(hi)}) {
      if (it == cache_.end()) continue;
      const double gap = std::abs(std::log(std::max(it->first, kTiny)) - std::log(std::max(mu, kTiny)));
      if (gap < best_gap) {
        best_gap = gap;
        best = it;
      }
    }
    if (best != cache_.end()) start = best->second.r;
  }
  const double linear = mu * std::sqrt(static_cast<double>(basis.dim()));
  FistaResult fr = fista(problem_, std::move(start), linear, project_psd, config_);
  Point pt;
  pt.residual = problem_.residual(fr.r);
  pt.trace = fr.r(0) * std::sqrt(static_cast<double>(basis.dim()));
  pt.iterations = fr.iterations;
  pt.converged = fr.converged;
  pt.r = std::move(fr.r);
  return cache_.emplace(mu, std::move(pt)).first->second;
}

double LagrangianPath::residual_floor() {
  if (!(mu_max_ > 0.0)) return problem_.mtm();
  // Continuation down to the bottom of the multiplier range, one decade at a time.
  const double bottom = mu_max_ * kMultiplierRange;
  for (double mu = mu_max_ * 0.1; mu > bottom; mu *= 0.1) at(mu);
  return at(bottom).residual;
}

Estimate LagrangianPath::solve(double epsilon) {
  if (!(epsilon > 0.0)) throw std::invalid_argument("epsilon must be positive");
  const double mtm = problem_.mtm();
  if (epsilon >= mtm) {
    throw ZeroStateError("epsilon >= ||M||^2: rho = 0 is feasible and trace-minimal");
  }
  if (!(mu_max_ > 0.0)) throw InfeasibleEpsilon("no nonzero PSD state lowers the residual");
  const double tol = config_.epsilon_rel_tol;
  const double s_bottom = std::log(mu_max_ * kMultiplierRange);
  auto log_gap = [&](const Point& pt) { return std::log(std::max(pt.residual, kTiny) / epsilon); };

  // Bracket [s_lo, s_hi] in log mu with Delta(s_lo) <= epsilon < Delta(s_hi); Delta(mu_max) = ||M||^2.
  double s_hi = std::log(mu_max_);
  double f_hi = std::log(mtm / epsilon);
  double s_lo = -std::numeric_limits<double>::infinity();
  double f_lo = 0.0;
  for (const auto& [mu, pt] : cache_) {
    if (!(mu > 0.0)) continue;
    const double s = std::log(mu);
    const double f = log_gap(pt);
    if (f <= 0.0 && s > s_lo) {
      s_lo = s;
      f_lo = f;
    } else if (f > 0.0 && s < s_hi) {
      s_hi = s;
      f_hi = f;
    }
  }

  double best_mu = 0.0;
  double best_gap = std::numeric_limits<double>::infinity();
  auto evaluate = [&](double s) {
    const double mu = std::exp(s);
    const double f = log_gap(at(mu));
    const double gap = std::abs(std::expm1(f));
    if (gap < best_gap) {
      best_gap = gap;
      best_mu = mu;
    }
    return f;
  };
  if (std::isfinite(s_lo)) evaluate(s_lo);
  if (s_hi < std::log(mu_max_)) evaluate(s_hi);

  // No lower bracket yet: continue downward a decade at a time from the upper end.
  while (!std::isfinite(s_lo) && best_gap > tol) {
    const double s = std::max(s_hi - std::log(10.0), s_bottom);
    const double f = evaluate(s);
    if (f <= 0.0) {
      s_lo = s;
      f_lo = f;
    } else {
      s_hi = s;
      f_hi = f;
      if (s <= s_bottom) {
        if (best_gap <= tol) break;
        throw InfeasibleEpsilon("epsilon below the smallest residual reachable on the PSD cone");
      }
    }
  }

  int side = 0;
  for (int step = 0; step < config_.max_multiplier_steps && best_gap > tol; ++step) {
    // Illinois false position in (log mu, log Delta), bisection when it lands near an end.
    double s = s_lo - f_lo * (s_hi - s_lo) / (f_hi - f_lo);
    const double width = s_hi - s_lo;
    if (!std::isfinite(s) || s <= s_lo + 0.02 * width || s >= s_hi - 0.02 * width) s = 0.5 * (s_lo + s_hi);
    const double f = evaluate(s);
    if (f > 0.0) {
      s_hi = s;
      f_hi = f;
      if (side == 1) f_lo *= 0.5;
      side = 1;
    } else {
      s_lo = s;
      f_lo = f;
      if (side == -1) f_hi *= 0.5;
      side = -1;
    }
  }
  const bool found = best_gap <= tol;

  const Point& pt = at(best_mu);
  if (!(pt.trace > 0.0) || pt.r.cwiseAbs().maxCoeff() < 1e-300) {
    throw ZeroStateError("trace-minimal state is zero; cannot renormalize");
  }
  const HermitianBasis& basis = problem_.basis();
  Operator rho = basis.reconstruct(pt.r);
  const double trace = rho.trace().real();
  if (!(trace > 1e-14)) throw ZeroStateError("trace-minimal state is zero; cannot renormalize");

  Estimate est;
  est.kind = EstimatorKind::kCompressedSensing;
  est.rho_bar = to_density(rho / trace);
  est.residual = problem_.residual(basis.expand(est.rho_bar.matrix()));
  est.multiplier = best_mu;
  est.pre_normalization_trace = trace;
  est.constraint_residual = pt.residual;
  est.converged = found && pt.converged;
  for (const auto& [mu, p] : cache_) est.iterations += p.iterations;
  return est;
}

Estimate solve_cs(const MeasurementRecord& record, const DesignMatrix& design, double epsilon,
                  const SolverConfig& config) {
  config.validate();
  return solve_cs(QuadraticProblem(record, design, config), epsilon, config);
}

Estimate solve_cs(const QuadraticProblem& problem, double epsilon, const SolverConfig& config) {
  LagrangianPath path(problem, config);
  return path.solve(epsilon);
}

// ---------------------------------------------------------------------------
// epsilon calibration

EpsilonRule fit_epsilon_rule(const std::vector<double>& samples, const std::vector<double>& epsilons) {
  if (samples.size() != epsilons.size() || samples.empty()) {
    throw CalibrationError("no feasible calibration points");
  }
  const auto n = static_cast<double>(samples.size());
  double snn = 0.0, sne = 0.0, sn = 0.0, se = 0.0;
  for (std::size_t k = 0; k < samples.size(); ++k) {
    snn += samples[k] * samples[k];
    sne += samples[k] * epsilons[k];
    sn += samples[k];
    se += epsilons[k];
  }
  auto residual = [&](double a, double c) {
    double r = 0.0;
    for (std::size_t k = 0; k < samples.size(); ++k) {
      const double e = epsilons[k] - (a * samples[k] + c);
      r += e * e;
    }
    return std::sqrt(r);
  };
  EpsilonRule rule;
  rule.slope = sne / snn;
  rule.intercept = 0.0;
  double res = residual(rule.slope, 0.0);
  const double det = n * snn - sn * sn;
  if (samples.size() >= 3 && det > 0.0) {
    const double a1 = (n * sne - sn * se) / det;
    const double c1 = (se - a1 * sn) / n;
    const double res1 = residual(a1, c1);
    if (a1 > 0.0 && res1 * 2.0 < res) {
      rule.slope = a1;
      rule.intercept = c1;
      res = res1;
    }
  }
  if (!(rule.slope > 0.0)) throw CalibrationError("calibrated epsilon slope is not positive");
  const double mean = se / n;
  rule.fit_relative_residual = mean > 0.0 ? res / (std::sqrt(n) * mean) : 0.0;
  return rule;
}

EpsilonRule calibrate_epsilon(const PureState& calibration_state, const ObservableSeries& truth,
                              const ObservableSeries& model, double K, double sigma,
                              const std::vector<double>& T_grid_us, std::uint64_t seed,
                              const SolverConfig& config) {
  if (T_grid_us.empty()) throw std::invalid_argument("calibration T grid is empty");
  if (truth.size() != model.size()) throw std::invalid_argument("truth and model series differ in length");
  config.validate();
  const HermitianBasis basis(calibration_state.dim());
  const MeasurementRecord full =
      synthesize_record(DensityMatrix::from_pure(calibration_state), truth, K, sigma, seed);
  const DesignMatrix design = design_matrix(model, basis, K);

  std::vector<double> samples, epsilons, fids, times;
  for (double T : T_grid_us) {
    const MeasurementRecord rec = truncate(full, T);
    const auto rows = static_cast<Eigen::Index>(rec.size());
    auto gram = make_gram(design.A.topRows(rows), config.power_iterations);
    const QuadraticProblem problem(design.A, rows, rec.as_vector(), gram);
    LagrangianPath path(problem, config);

    if (!(path.mu_max() > 0.0)) continue;

    // The search runs over log mu: every multiplier is the exact solution for
    // epsilon = Delta(mu), so each evaluation costs one warm-started solve
    // instead of a root search. Larger mu means larger epsilon.
    const double hi = std::log(path.mu_max());
    const double lo = std::log(path.mu_max() * kMultiplierRange);
    auto score = [&](double s) {
      const LagrangianPath::Point& pt = path.at(std::exp(s));
      if (!(pt.trace > 1e-14) || !(pt.residual < problem.mtm())) return -1.0;
      return fidelity(calibration_state, to_density(basis.reconstruct(pt.r) / pt.trace));
    };
    double best_s = hi, best_f = -1.0;
    auto consider = [&](double s, double f) {
      // Ties resolve toward the smaller multiplier, i.e. the smaller epsilon.
      if (f > best_f + 1e-12 || (std::abs(f - best_f) <= 1e-12 && s < best_s)) {
        best_f = f;
        best_s = s;
      }
    };
    // Coarse half-decade scan downward from mu_max. Large multipliers are cheap
    // and warm-start the smaller ones; the scan stops once fidelity has fallen
    // on two consecutive steps.
    const double step = 0.5 * std::log(10.0);
    int falling = 0;
    for (double s = hi - step; s >= lo - 1e-12; s -= step) {
      const double previous_best = best_f;
      consider(s, score(s));
      falling = best_f > previous_best ? 0 : falling + 1;
      if (best_f >= 0.0 && falling >= 2) break;
    }
    if (best_f < 0.0) continue;
    // Golden-section refinement within one step of the coarse optimum.
    const double inv_phi = (std::sqrt(5.0) - 1.0) / 2.0;
    double a = std::max(lo, best_s - step), b = std::min(hi, best_s + step);
    double c = b - inv_phi * (b - a), e = a + inv_phi * (b - a);
    double fc = score(c), fe = score(e);
    consider(c, fc);
    consider(e, fe);
    for (int it = 0; it < kGoldenSteps; ++it) {
      if (fc >= fe) {
        b = e;
        e = c;
        fe = fc;
        c = b - inv_phi * (b - a);
        fc = score(c);
        consider(c, fc);
      } else {
        a = c;
        c = e;
        fc = fe;
        e = a + inv_phi * (b - a);
        fe = score(e);
        consider(e, fe);
      }
    }
    if (best_f < 0.0) continue;
    times.push_back(T);
    samples.push_back(static_cast<double>(rows));
    epsilons.push_back(path.at(std::exp(best_s)).residual);
    fids.push_back(best_f);
  }
  if (samples.empty()) throw CalibrationError("every epsilon was infeasible or degenerate");
  EpsilonRule rule = fit_epsilon_rule(samples, epsilons);
  rule.calibration_T_us = std::move(times);
  rule.calibration_samples = std::move(samples);
  rule.calibration_epsilon = std::move(epsilons);
  rule.calibration_fidelity = std::move(fids);
  return rule;
}

EpsilonRule calibrate_epsilon(const PureState& calibration_state, const ObservableSeries& series, double K,
                              double sigma, const std::vector<double>& T_grid_us, std::uint64_t seed,
                              const SolverConfig& config) {
  return calibrate_epsilon(calibration_state, series, series, K, sigma, T_grid_us, seed, config);
}

}  // namespace cstomo
