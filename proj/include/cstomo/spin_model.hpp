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

#include <complex>
#include <cstdint>
#include <string>
#include <vector>

#include <Eigen/Dense>

namespace cstomo {

using Complex = std::complex<double>;
using Operator = Eigen::MatrixXcd;
using StateVector = Eigen::VectorXcd;
using CoefficientVector = Eigen::VectorXd;

/// Spin quantum number stored as 2f so half-integers stay exact.
class Spin {
 public:
  /// Throws std::invalid_argument unless 2f is a non-negative integer.
  static Spin from_double(double f);
  static constexpr Spin from_twice(int twice_f) { return Spin(twice_f); }

  constexpr int twice() const { return twice_f_; }
  constexpr double value() const { return 0.5 * twice_f_; }
  constexpr int multiplicity() const { return twice_f_ + 1; }

  friend constexpr bool operator==(Spin, Spin) = default;

 private:
  constexpr explicit Spin(int twice_f) : twice_f_(twice_f) {}
  int twice_f_;
};

struct SpinBlock {
  Spin f;
  int offset;
};

/// Direct sum of spin manifolds, m ascending within each block.
class HilbertSpace {
 public:
  explicit HilbertSpace(const std::vector<Spin>& spins);

  /// Cesium 6S1/2 ground manifold: f=3 block (7 levels) then f=4 block (9 levels).
  static HilbertSpace cesium_ground();

  int dim() const { return dim_; }
  const std::vector<SpinBlock>& blocks() const { return blocks_; }

  /// Throws std::invalid_argument if no block carries this spin.
  const SpinBlock& block(Spin f) const;

  /// Flat index of |f, m>. Throws std::invalid_argument for an unknown level.
  int index(Spin f, double m) const;

  /// Human-readable label "|f,m>" for each basis index, in storage order.
  std::vector<std::string> labels() const;

 private:
  std::vector<SpinBlock> blocks_;
  int dim_ = 0;
};

struct AngularMomentum {
  Operator fx;
  Operator fy;
  Operator fz;
};

/// f_x, f_y, f_z on 2f+1 levels in the m-ascending basis.
AngularMomentum angular_momentum_ops(Spin f);
AngularMomentum angular_momentum_ops(double f);

/// Places a block operator on the diagonal sub-square of `f` within `space`.
Operator embed_block(const Operator& op, const HilbertSpace& space, Spin f);

/// f_z of the f=3 manifold, zero on f=4. This is O_0 of the measurement.
Operator probe_observable(const HilbertSpace& space);

/// Orthonormal Hermitian operator basis with E_0 = I/sqrt(d).
///
/// Ordering: E_0, the d-1 diagonal traceless elements, the symmetric
/// off-diagonal elements (|j><k| + |k><j|)/sqrt(2), then the antisymmetric
/// elements i(|j><k| - |k><j|)/sqrt(2), off-diagonal pairs in lexicographic
/// (j, k) order with j < k. expand/reconstruct use the structure directly and
/// cost O(d^2).
class HermitianBasis {
 public:
  explicit HermitianBasis(int dim);

  int dim() const { return dim_; }
  int size() const { return dim_ * dim_; }

  /// Dense matrix of element alpha. Mostly for tests and diagnostics.
  Operator element(int alpha) const;

  /// r_alpha = Tr(op E_alpha). Non-Hermitian input keeps only its Hermitian part.
  CoefficientVector expand(const Operator& op) const;
  Operator reconstruct(const CoefficientVector& r) const;

 private:
  int dim_;
  int num_pairs_;
  std::vector<int> pair_j_;
  std::vector<int> pair_k_;
};

class PureState {
 public:
  /// Normalizes nothing; throws std::invalid_argument unless ||psi|| = 1 within 1e-12.
  explicit PureState(StateVector amplitudes);
  static PureState normalized(const StateVector& v);
  /// Basis vector |index>.
  static PureState basis(int dim, int index);

  int dim() const { return static_cast<int>(amplitudes_.size()); }
  const StateVector& amplitudes() const { return amplitudes_; }
  Operator projector() const;

 private:
  StateVector amplitudes_;
};

class DensityMatrix {
 public:
  /// Validates Hermiticity (1e-12), positivity (eigenvalues >= -1e-10) and unit trace (1e-10).
  explicit DensityMatrix(Operator rho);
  static DensityMatrix from_pure(const PureState& psi);
  static DensityMatrix maximally_mixed(int dim);

  int dim() const { return static_cast<int>(rho_.rows()); }
  const Operator& matrix() const { return rho_; }

 private:
  Operator rho_;
};

/// Standard-normal complex Ginibre matrix -> QR -> phase-corrected first column.
PureState haar_random_pure_state(int dim, std::uint64_t seed);

/// <psi0| rho |psi0>, clamped to [0, 1] when round-off strays at most 1e-10 outside.
double fidelity(const PureState& psi0, const DensityMatrix& rho);

/// Fidelity of rho against I/d: (sum_k sqrt(lambda_k))^2 / d. Equals 1 only at
/// rho = I/d and 1/d for any pure rho.
double fidelity_with_maximally_mixed(const DensityMatrix& rho);

double max_abs(const Operator& op);
bool is_hermitian(const Operator& op, double tol);

}  // namespace cstomo
