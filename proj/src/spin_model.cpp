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

#include "cstomo/spin_model.hpp"

#include <algorithm>
#include <cmath>
#include <sstream>
#include <stdexcept>

#include "cstomo/rng.hpp"

namespace cstomo {

Spin Spin::from_double(double f) {
  const double twice = 2.0 * f;
  const double rounded = std::round(twice);
  if (!std::isfinite(f) || f < 0.0 || std::abs(twice - rounded) > 1e-12) {
    throw std::invalid_argument("spin must be a non-negative integer or half-integer");
  }
  return Spin(static_cast<int>(rounded));
}

HilbertSpace::HilbertSpace(const std::vector<Spin>& spins) {
  if (spins.empty()) throw std::invalid_argument("HilbertSpace needs at least one block");
  for (const Spin f : spins) {
    if (std::any_of(blocks_.begin(), blocks_.end(), [f](const SpinBlock& b) { return b.f == f; })) {
      throw std::invalid_argument("duplicate spin block");
    }
    blocks_.push_back({f, dim_});
    dim_ += f.multiplicity();
  }
}

HilbertSpace HilbertSpace::cesium_ground() {
  return HilbertSpace({Spin::from_twice(6), Spin::from_twice(8)});
}

const SpinBlock& HilbertSpace::block(Spin f) const {
  for (const auto& b : blocks_) {
    if (b.f == f) return b;
  }
  throw std::invalid_argument("unknown spin block f=" + std::to_string(f.value()));
}

int HilbertSpace::index(Spin f, double m) const {
  const SpinBlock& b = block(f);
  const double shifted = m + f.value();
  const double rounded = std::round(shifted);
  if (std::abs(shifted - rounded) > 1e-12 || rounded < 0 || rounded > f.twice()) {
    throw std::invalid_argument("m out of range for block");
  }
  return b.offset + static_cast<int>(rounded);
}

std::vector<std::string> HilbertSpace::labels() const {
  std::vector<std::string> out;
  out.reserve(dim_);
  for (const auto& b : blocks_) {
    for (int k = 0; k < b.f.multiplicity(); ++k) {
      std::ostringstream os;
      os << '|' << b.f.value() << ',' << (k - 0.5 * b.f.twice()) << '>';
      out.push_back(os.str());
    }
  }
  return out;
}

AngularMomentum angular_momentum_ops(Spin f) {
  const int n = f.multiplicity();
  const double j = f.value();
  AngularMomentum ops{Operator::Zero(n, n), Operator::Zero(n, n), Operator::Zero(n, n)};
  // f_+ |m> = sqrt(j(j+1) - m(m+1)) |m+1>, index k <-> m = k - j.
  Operator fplus = Operator::Zero(n, n);
  for (int k = 0; k < n; ++k) {
    const double m = k - j;
    ops.fz(k, k) = m;
    if (k + 1 < n) fplus(k + 1, k) = std::sqrt(j * (j + 1) - m * (m + 1));
  }
  const Operator fminus = fplus.adjoint();
  ops.fx = 0.5 * (fplus + fminus);
  ops.fy = Complex(0.0, -0.5) * (fplus - fminus);
  return ops;
}

AngularMomentum angular_momentum_ops(double f) { return angular_momentum_ops(Spin::from_double(f)); }

Operator embed_block(const Operator& op, const HilbertSpace& space, Spin f) {
  const SpinBlock& b = space.block(f);
  const int n = f.multiplicity();
  if (op.rows() != n || op.cols() != n) {
    throw std::invalid_argument("block operator size does not match 2f+1");
  }
  Operator out = Operator::Zero(space.dim(), space.dim());
  out.block(b.offset, b.offset, n, n) = op;
  return out;
}

Operator probe_observable(const HilbertSpace& space) {
  const Spin f3 = Spin::from_twice(6);
  return embed_block(angular_momentum_ops(f3).fz, space, f3);
}

// ---------------------------------------------------------------------------
// HermitianBasis

HermitianBasis::HermitianBasis(int dim) : dim_(dim), num_pairs_(dim * (dim - 1) / 2) {
  if (dim < 2) throw std::invalid_argument("HermitianBasis requires d >= 2");
  pair_j_.reserve(num_pairs_);
  pair_k_.reserve(num_pairs_);
  for (int j = 0; j < dim; ++j) {
    for (int k = j + 1; k < dim; ++k) {
      pair_j_.push_back(j);
      pair_k_.push_back(k);
    }
  }
}

Operator HermitianBasis::element(int alpha) const {
  if (alpha < 0 || alpha >= size()) throw std::out_of_range("basis index out of range");
  const int d = dim_;
  Operator e = Operator::Zero(d, d);
  if (alpha == 0) {
    e.diagonal().setConstant(1.0 / std::sqrt(static_cast<double>(d)));
    return e;
  }
  if (alpha < d) {
    const int l = alpha;
    const double norm = 1.0 / std::sqrt(static_cast<double>(l) * (l + 1));
    for (int j = 0; j < l; ++j) e(j, j) = norm;
    e(l, l) = -l * norm;
    return e;
  }
  const double s = 1.0 / std::sqrt(2.0);
  int p = alpha - d;
  if (p < num_pairs_) {
    e(pair_j_[p], pair_k_[p]) = s;
    e(pair_k_[p], pair_j_[p]) = s;
    return e;
  }
  p -= num_pairs_;
  e(pair_j_[p], pair_k_[p]) = Complex(0.0, s);
  e(pair_k_[p], pair_j_[p]) = Complex(0.0, -s);
  return e;
}

CoefficientVector HermitianBasis::expand(const Operator& op) const {
  const int d = dim_;
  if (op.rows() != d || op.cols() != d) throw std::invalid_argument("expand: dimension mismatch");
  CoefficientVector r(size());
  double diag_sum = 0.0;
  for (int j = 0; j < d; ++j) diag_sum += op(j, j).real();
  r(0) = diag_sum / std::sqrt(static_cast<double>(d));
  // Diagonal elements via running prefix sums of the real diagonal.
  double prefix = op(0, 0).real();
  for (int l = 1; l < d; ++l) {
    const double norm = 1.0 / std::sqrt(static_cast<double>(l) * (l + 1));
    r(l) = norm * (prefix - l * op(l, l).real());
    prefix += op(l, l).real();
  }
  const double s = 1.0 / std::sqrt(2.0);
  for (int p = 0; p < num_pairs_; ++p) {
    const int j = pair_j_[p];
    const int k = pair_k_[p];
    // Hermitian part of op: average of op(j,k) and conj(op(k,j)).
    const Complex h = 0.5 * (op(j, k) + std::conj(op(k, j)));
    r(d + p) = 2.0 * s * h.real();
    r(d + num_pairs_ + p) = 2.0 * s * h.imag();
  }
  return r;
}

Operator HermitianBasis::reconstruct(const CoefficientVector& r) const {
  const int d = dim_;
  if (r.size() != size()) throw std::invalid_argument("reconstruct: dimension mismatch");
  Operator out = Operator::Zero(d, d);
  const double c0 = r(0) / std::sqrt(static_cast<double>(d));
  // Diagonal: entry j receives +norm_l r_l for every l > j and -l norm_l r_l for l == j.
  double tail = 0.0;
  for (int l = d - 1; l >= 1; --l) {
    const double norm = 1.0 / std::sqrt(static_cast<double>(l) * (l + 1));
    out(l, l) = c0 + tail - l * norm * r(l);
    tail += norm * r(l);
  }
  out(0, 0) = c0 + tail;
  const double s = 1.0 / std::sqrt(2.0);
  for (int p = 0; p < num_pairs_; ++p) {
    const int j = pair_j_[p];
    const int k = pair_k_[p];
    const Complex v(s * r(d + p), s * r(d + num_pairs_ + p));
    out(j, k) = v;
    out(k, j) = std::conj(v);
  }
  return out;
}

// ---------------------------------------------------------------------------
// States

PureState::PureState(StateVector amplitudes) : amplitudes_(std::move(amplitudes)) {
  if (amplitudes_.size() < 1) throw std::invalid_argument("empty state vector");
  if (std::abs(amplitudes_.norm() - 1.0) > 1e-12) {
    throw std::invalid_argument("state vector is not normalized");
  }
}

PureState PureState::normalized(const StateVector& v) {
  const double n = v.norm();
  if (!(n > 0.0)) throw std::invalid_argument("cannot normalize a zero vector");
  return PureState(v / n);
}

PureState PureState::basis(int dim, int index) {
  if (index < 0 || index >= dim) throw std::out_of_range("basis index out of range");
  StateVector v = StateVector::Zero(dim);
  v(index) = 1.0;
  return PureState(std::move(v));
}

Operator PureState::projector() const { return amplitudes_ * amplitudes_.adjoint(); }

DensityMatrix::DensityMatrix(Operator rho) : rho_(std::move(rho)) {
  if (rho_.rows() != rho_.cols() || rho_.rows() < 1) {
    throw std::invalid_argument("density matrix must be square and non-empty");
  }
  const double scale = std::max(1.0, max_abs(rho_));
  if (!is_hermitian(rho_, 1e-12 * scale)) throw std::invalid_argument("density matrix is not Hermitian");
  if (std::abs(rho_.trace().real() - 1.0) > 1e-10) {
    throw std::invalid_argument("density matrix trace differs from 1");
  }
  Eigen::SelfAdjointEigenSolver<Operator> es(rho_, Eigen::EigenvaluesOnly);
  if (es.eigenvalues().minCoeff() < -1e-10) {
    throw std::invalid_argument("density matrix has a negative eigenvalue");
  }
}

DensityMatrix DensityMatrix::from_pure(const PureState& psi) { return DensityMatrix(psi.projector()); }

DensityMatrix DensityMatrix::maximally_mixed(int dim) {
  return DensityMatrix(Operator::Identity(dim, dim) / static_cast<double>(dim));
}

PureState haar_random_pure_state(int dim, std::uint64_t seed) {
  if (dim < 1) throw std::invalid_argument("dimension must be >= 1");
  Engine eng = make_engine(seed);
  std::normal_distribution<double> normal(0.0, 1.0);
  Operator z(dim, dim);
  for (int c = 0; c < dim; ++c) {
    for (int r = 0; r < dim; ++r) {
      const double re = normal(eng);
      const double im = normal(eng);
      z(r, c) = Complex(re, im) / std::sqrt(2.0);
    }
  }
  Eigen::HouseholderQR<Operator> qr(z);
  const Operator q = qr.householderQ() * Operator::Identity(dim, dim);
  const Complex r00 = qr.matrixQR()(0, 0);
  // Q R = Q Lambda Lambda^-1 R with Lambda = diag(r_ii/|r_ii|) makes Q Lambda Haar-distributed.
  const Complex phase = std::abs(r00) > 0.0 ? r00 / std::abs(r00) : Complex(1.0);
  StateVector v = q.col(0) * phase;
  return PureState::normalized(v);
}

double fidelity(const PureState& psi0, const DensityMatrix& rho) {
  if (psi0.dim() != rho.dim()) throw std::invalid_argument("fidelity: dimension mismatch");
  const auto& v = psi0.amplitudes();
  const double f = (v.adjoint() * rho.matrix() * v)(0, 0).real();
  if (f < -1e-10 || f > 1.0 + 1e-10) {
    throw std::logic_error("fidelity out of [0,1] beyond round-off");
  }
  return std::clamp(f, 0.0, 1.0);
}

double fidelity_with_maximally_mixed(const DensityMatrix& rho) {
  Eigen::SelfAdjointEigenSolver<Operator> es(rho.matrix(), Eigen::EigenvaluesOnly);
  double s = 0.0;
  for (int k = 0; k < es.eigenvalues().size(); ++k) s += std::sqrt(std::max(0.0, es.eigenvalues()(k)));
  return std::clamp(s * s / rho.dim(), 0.0, 1.0);
}

double max_abs(const Operator& op) { return op.size() == 0 ? 0.0 : op.cwiseAbs().maxCoeff(); }

bool is_hermitian(const Operator& op, double tol) {
  return op.rows() == op.cols() && max_abs(op - op.adjoint()) <= tol;
}

}  // namespace cstomo
