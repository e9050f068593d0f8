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

// Small synthetic estimation problems shared by the unit and acceptance tests,
// with brute-force reference optima over the factorization rho = B B^dagger / Tr.

#include <cmath>
#include <random>
#include <vector>

#include "cstomo/convex_estimators.hpp"
#include "oracles.hpp"

namespace cstomo::toy {

using oracle::Vector;

inline SolverConfig tight_config() {
  SolverConfig c;
  c.max_iterations = 400000;
  c.objective_tol = 1e-16;
  c.kkt_tol = 1e-11;
  c.epsilon_rel_tol = 1e-10;
  c.max_multiplier_steps = 400;
  return c;
}

/// A small synthetic problem: rows of random Hermitian observables.
struct ToyProblem {
  int d = 2;
  std::vector<Operator> elements;
  DesignMatrix design;
  MeasurementRecord record;

  double delta(const Operator& rho) const {
    return (record.as_vector() - design.A * oracle::coefficients(rho, elements)).squaredNorm();
  }
};

inline ToyProblem make_toy(int d, int rows, std::uint64_t seed, double offset) {
  ToyProblem t;
  t.d = d;
  const HermitianBasis basis(d);
  for (int a = 0; a < basis.size(); ++a) t.elements.push_back(basis.element(a));
  std::mt19937_64 eng(seed);
  t.design.A.resize(rows, basis.size());
  for (int i = 0; i < rows; ++i) {
    t.design.A.row(i) = oracle::coefficients(oracle::random_hermitian(d, eng), t.elements).transpose();
  }
  // Record of a random state, pushed off the state's image so the LS optimum lies on the boundary.
  const Operator rho = DensityMatrix::from_pure(haar_random_pure_state(d, seed + 1)).matrix();
  const Eigen::VectorXd m = t.design.A * oracle::coefficients(rho, t.elements);
  std::normal_distribution<double> n(0.0, 1.0);
  for (int i = 0; i < rows; ++i) {
    t.record.times_us.push_back(i);
    t.record.values.push_back(m(i) + offset * n(eng));
  }
  return t;
}

/// Trace-minimization objective for a direction rho: the smallest feasible scale, or, when
/// no scale is feasible, a large constant plus the best attainable residual so a local
/// search is pulled into the feasible set.
inline double scale_or_penalty(const Vector& m, const Vector& a, double eps) {
  const double t = oracle::min_scale(m, a, eps);
  if (std::isfinite(t)) return t;
  const double s = std::max(0.0, m.dot(a) / std::max(a.squaredNorm(), 1e-300));
  return 1e6 + (m - s * a).squaredNorm();
}

inline double frobenius(const Operator& a, const Operator& b) { return (a - b).norm(); }

inline Operator unit_trace(const Operator& b) {
  const Operator r = b * b.adjoint();
  return r / r.trace().real();
}

/// Exhaustive multilevel grid over the d^2 factor parameters, then a local polish.
inline Vector grid_factor_search(const oracle::Objective& f, int d, unsigned seed) {
  const int n = d * d;
  Vector x = oracle::zoom_grid(f, Vector::Constant(n, 0.1), Vector::Constant(n, 1.5), 9, 24, 0.5);
  return oracle::direction_search(f, x, 1e-3, 1e-14, seed);
}

/// Best state over several random starts of a direction search on the factor parameters.
inline Operator best_of_restarts(const oracle::Objective& f, int d, std::uint64_t seed, int starts) {
  std::mt19937_64 eng(seed);
  std::normal_distribution<double> n(0.0, 1.0);
  double best = oracle::kInf;
  Vector best_p;
  for (int start = 0; start < starts; ++start) {
    Vector p(d * d);
    for (int k = 0; k < d * d; ++k) p(k) = n(eng);
    if (!std::isfinite(f(p))) continue;
    p = oracle::direction_search(f, p, 0.5, 1e-13, static_cast<unsigned>(seed * 16 + start));
    if (f(p) < best) {
      best = f(p);
      best_p = p;
    }
  }
  if (best_p.size() == 0) return Operator::Constant(d, d, oracle::kInf);
  return unit_trace(oracle::factor(best_p, d));
}

}  // namespace cstomo::toy
