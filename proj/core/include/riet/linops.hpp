// Copyright 2026 The ri-et Authors
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

// Dense complex linear algebra on tensor-structured operators.
//
// Every Operator carries the list of tensor-factor dimensions it acts on, so
// that kron and partial_trace can keep track of which index is which. The
// factor order used throughout the library is (electronic, oscillator,
// ancilla...).

#pragma once

#include <complex>
#include <span>
#include <vector>

#include <Eigen/Dense>

namespace riet {

using Complex = std::complex<double>;
using Matrix = Eigen::MatrixXcd;
using RealVector = Eigen::VectorXd;
using Dims = std::vector<int>;

inline constexpr Complex kI{0.0, 1.0};

class Operator {
 public:
  Operator() = default;
  /// Throws ArgumentError unless `data` is square and prod(dims) == rows.
  Operator(Matrix data, Dims dims);
  /// Single-factor operator.
  explicit Operator(Matrix data);

  static Operator identity(const Dims& dims);
  static Operator zero(const Dims& dims);

  const Matrix& matrix() const noexcept { return data_; }
  const Dims& dims() const noexcept { return dims_; }
  Eigen::Index dim() const noexcept { return data_.rows(); }

  Complex operator()(Eigen::Index r, Eigen::Index c) const { return data_(r, c); }

  Operator adjoint() const { return Operator(data_.adjoint(), dims_); }
  Complex trace() const { return data_.trace(); }

  /// max_ij |A_ij - conj(A_ji)|
  double hermiticity_error() const;
  bool is_hermitian(double tol) const { return hermiticity_error() <= tol; }

  Operator& operator+=(const Operator& other);
  Operator& operator-=(const Operator& other);
  Operator& operator*=(Complex s);

  friend Operator operator+(Operator a, const Operator& b) { return a += b; }
  friend Operator operator-(Operator a, const Operator& b) { return a -= b; }
  friend Operator operator*(Operator a, Complex s) { return a *= s; }
  friend Operator operator*(Complex s, Operator a) { return a *= s; }
  friend Operator operator*(Operator a, double s) { return a *= Complex(s); }
  friend Operator operator*(double s, Operator a) { return a *= Complex(s); }
  /// Matrix product; factor dims must agree.
  friend Operator operator*(const Operator& a, const Operator& b);

 private:
  Matrix data_;
  Dims dims_;
};

/// Hermitian, PSD, unit-trace operator. The checked constructor validates at
/// the tolerances below; `unchecked` is for engine outputs whose invariants
/// hold by construction up to round-off.
class DensityMatrix {
 public:
  static constexpr double kHermitianTol = 1e-10;
  static constexpr double kTraceTol = 1e-10;
  static constexpr double kPositivityTol = 1e-10;

  DensityMatrix() = default;
  explicit DensityMatrix(Operator op);

  static DensityMatrix unchecked(Operator op);
  /// |psi><psi| for a normalized state vector.
  static DensityMatrix pure(const Eigen::VectorXcd& psi, const Dims& dims);

  const Operator& op() const noexcept { return op_; }
  const Matrix& matrix() const noexcept { return op_.matrix(); }
  const Dims& dims() const noexcept { return op_.dims(); }
  Eigen::Index dim() const noexcept { return op_.dim(); }

  double purity() const;

 private:
  struct Unchecked {};
  DensityMatrix(Operator op, Unchecked) : op_(std::move(op)) {}

  Operator op_;
};

struct EigenDecomposition {
  RealVector eigenvalues;  // ascending
  Matrix eigenvectors;     // unitary, columns are eigenvectors

  Matrix reconstruct() const;
};

Operator kron(const Operator& a, const Operator& b);
Matrix kron(const Matrix& a, const Matrix& b);

/// Trace out every factor not listed in `keep`. The result keeps the
/// remaining factors in their original order.
Operator partial_trace(const Operator& op, std::span<const int> keep);
DensityMatrix partial_trace(const DensityMatrix& rho, std::span<const int> keep);

EigenDecomposition herm_eig(const Operator& h);
EigenDecomposition herm_eig(const Matrix& h);

/// exp(-i theta h) for Hermitian h.
Operator expm_i_herm(const Operator& h, double theta);
Matrix expm_i_herm(const Matrix& h, double theta);

/// exp(theta x) = I + theta x for x with x*x = 0.
Operator expm_nilpotent2(const Operator& x, Complex theta);

/// Principal square root of a PSD operator; negative eigenvalues clipped to 0.
Operator sqrt_psd(const DensityMatrix& rho);
Matrix sqrt_psd(const Matrix& rho);

/// Uhlmann fidelity Tr sqrt(sqrt(rho) sigma sqrt(rho)).
double fidelity(const DensityMatrix& rho, const DensityMatrix& sigma);
double fidelity(const Matrix& rho, const Matrix& sigma);

/// Wootters concurrence of a two-qubit state.
double concurrence(const DensityMatrix& rho);
double concurrence(const Matrix& rho);

/// (m + m^dagger) / 2 in place.
void hermitize(Matrix& m);

}  // namespace riet
