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
#include <map>
#include <memory>
#include <optional>
#include <stdexcept>
#include <string>
#include <vector>

#include "cstomo/measurement_record.hpp"
#include "cstomo/spin_model.hpp"

namespace cstomo {

/// Base for recoverable estimator failures. error_class() is the machine-readable tag.
class SolverError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
  virtual const char* error_class() const noexcept { return "solver-error"; }
};

/// epsilon below the smallest residual reachable on the PSD cone.
class InfeasibleEpsilon : public SolverError {
 public:
  using SolverError::SolverError;
  const char* error_class() const noexcept override { return "infeasible-epsilon"; }
};

/// epsilon so large that rho = 0 satisfies the constraint; nothing to renormalize.
class ZeroStateError : public SolverError {
 public:
  using SolverError::SolverError;
  const char* error_class() const noexcept override { return "zero-state"; }
};

class CalibrationError : public SolverError {
 public:
  using SolverError::SolverError;
  const char* error_class() const noexcept override { return "calibration-failure"; }
};

struct SolverConfig {
  int max_iterations = 20000;
  /// Stop once the relative objective change stays below this for a window of iterations.
  double objective_tol = 1e-9;
  /// Stop once the gradient-mapping norm falls below kkt_tol * ||A^T M||.
  double kkt_tol = 1e-8;
  int power_iterations = 50;
  /// Lagrangian search target: |Delta - epsilon| / epsilon <= epsilon_rel_tol.
  double epsilon_rel_tol = 0.01;
  int max_multiplier_steps = 80;
  /// Function-value restart of the Nesterov momentum.
  bool restart = true;

  void validate() const;
};

enum class EstimatorKind { kLeastSquares, kCompressedSensing };

const char* to_string(EstimatorKind kind);
EstimatorKind estimator_from_string(const std::string& name);

struct Estimate {
  EstimatorKind kind = EstimatorKind::kLeastSquares;
  DensityMatrix rho_bar = DensityMatrix::maximally_mixed(2);
  /// Delta evaluated at rho_bar, directly from the record.
  double residual = 0.0;
  int iterations = 0;
  bool converged = false;
  /// CS only: multiplier mu*, trace before renormalization, and Delta before renormalization.
  double multiplier = 0.0;
  double pre_normalization_trace = 1.0;
  double constraint_residual = 0.0;
};

/// epsilon(N) = slope * N + intercept, with N the number of record samples.
struct EpsilonRule {
  double slope = 0.0;
  double intercept = 0.0;
  std::vector<double> calibration_T_us;
  std::vector<double> calibration_samples;
  std::vector<double> calibration_epsilon;
  std::vector<double> calibration_fidelity;
  /// ||eps* - fit|| / (sqrt(n) * mean(eps*)) over the calibration points.
  double fit_relative_residual = 0.0;

  double operator()(double n_samples) const { return slope * n_samples + intercept; }
};

/// Gram matrix G = A^T A and the Lipschitz constant 2 lambda_max(G) of grad Delta.
struct GramData {
  Eigen::MatrixXd gram;
  double lipschitz = 0.0;
};

std::shared_ptr<const GramData> make_gram(const Eigen::Ref<const Eigen::MatrixXd>& A, int power_iterations);
/// Wraps an already accumulated symmetric Gram matrix.
std::shared_ptr<const GramData> gram_from_matrix(Eigen::MatrixXd gram, int power_iterations);

/// Delta(r) = ||M - A r||^2 over the first `rows` rows of a design, sharing a precomputed Gram.
class QuadraticProblem {
 public:
  QuadraticProblem(const MeasurementRecord& record, const DesignMatrix& design, const SolverConfig& config);
  /// `design` must outlive the problem.
  QuadraticProblem(const Eigen::MatrixXd& design, Eigen::Index rows, Eigen::VectorXd record,
                   std::shared_ptr<const GramData> gram);

  int dim() const { return basis_.dim(); }
  const HermitianBasis& basis() const { return basis_; }
  const Eigen::MatrixXd& gram() const { return gram_->gram; }
  double lipschitz() const { return gram_->lipschitz; }
  const Eigen::VectorXd& atm() const { return atm_; }
  double mtm() const { return mtm_; }
  Eigen::Index rows() const { return rows_; }

  /// Direct residual ||M - A r||^2.
  double residual(const CoefficientVector& r) const;
  /// Gram-form residual M^T M - 2 b^T r + r^T G r given G r.
  double residual_gram(const CoefficientVector& r, const Eigen::VectorXd& gr) const;

 private:
  const Eigen::MatrixXd* design_;
  Eigen::MatrixXd owned_design_;
  Eigen::Index rows_;
  Eigen::VectorXd record_;
  std::shared_ptr<const GramData> gram_;
  Eigen::VectorXd atm_;
  double mtm_ = 0.0;
  HermitianBasis basis_;
};

double residual_delta(const DensityMatrix& rho, const MeasurementRecord& record, const DesignMatrix& design);

/// Frobenius-nearest PSD matrix: negative eigenvalues clipped to zero.
Operator project_psd(const Operator& h);
/// Frobenius-nearest density matrix: eigenvalues projected onto the probability simplex.
Operator project_density(const Operator& h);
/// Euclidean projection of v onto {p >= 0, sum p = 1} (sorted-threshold algorithm).
Eigen::VectorXd project_simplex(const Eigen::VectorXd& v);

Estimate solve_ls(const MeasurementRecord& record, const DesignMatrix& design, const SolverConfig& config = {});
Estimate solve_ls(const QuadraticProblem& problem, const SolverConfig& config = {});

Estimate solve_cs(const MeasurementRecord& record, const DesignMatrix& design, double epsilon,
                  const SolverConfig& config = {});
Estimate solve_cs(const QuadraticProblem& problem, double epsilon, const SolverConfig& config = {});

/// Solutions of min_{rho >= 0} Delta(rho) + mu Tr(rho) along mu, cached for warm starts.
class LagrangianPath {
 public:
  struct Point {
    CoefficientVector r;
    double residual = 0.0;
    double trace = 0.0;
    int iterations = 0;
    bool converged = false;
  };

  LagrangianPath(const QuadraticProblem& problem, SolverConfig config);

  /// Smallest multiplier at which rho = 0 is optimal: 2 lambda_max(A^* M).
  double mu_max() const { return mu_max_; }
  const Point& at(double mu);
  /// Smallest residual on the PSD cone, approximated at mu = 1e-12 mu_max.
  double residual_floor();
  Estimate solve(double epsilon);

 private:
  const QuadraticProblem& problem_;
  SolverConfig config_;
  double mu_max_;
  std::map<double, Point> cache_;
};

/// Finds the fidelity-maximizing epsilon per record length on a calibration state and fits
/// epsilon = slope * N. The record is synthesized from `truth` and reconstructed with `model`.
EpsilonRule calibrate_epsilon(const PureState& calibration_state, const ObservableSeries& truth,
                              const ObservableSeries& model, double K, double sigma,
                              const std::vector<double>& T_grid_us, std::uint64_t seed,
                              const SolverConfig& config = {});
EpsilonRule calibrate_epsilon(const PureState& calibration_state, const ObservableSeries& series, double K,
                              double sigma, const std::vector<double>& T_grid_us, std::uint64_t seed,
                              const SolverConfig& config = {});

/// Least-squares fit through the origin of (N, eps*); an intercept is kept only if it halves the residual.
EpsilonRule fit_epsilon_rule(const std::vector<double>& samples, const std::vector<double>& epsilons);

}  // namespace cstomo
