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

#include "riet/linops.hpp"

#include <algorithm>
#include <cmath>
#include <functional>
#include <numeric>
#include <sstream>

#include <Eigen/Eigenvalues>

#include "riet/errors.hpp"

namespace riet {
namespace {

long product(const Dims& dims) {
  return std::accumulate(dims.begin(), dims.end(), 1L, std::multiplies<>());
}

void check_dims(const Matrix& data, const Dims& dims) {
  if (data.rows() != data.cols()) {
    throw ArgumentError("operator matrix must be square");
  }
  if (dims.empty()) {
    throw ArgumentError("operator factor_dims must be non-empty");
  }
  for (int d : dims) {
    if (d < 1) throw ArgumentError("operator factor dimension must be >= 1");
  }
  if (product(dims) != data.rows()) {
    std::ostringstream msg;
    msg << "product of factor_dims (" << product(dims) << ") does not match matrix dimension ("
        << data.rows() << ")";
    throw ArgumentError(msg.str());
  }
}

double max_abs(const Matrix& m) { return m.size() == 0 ? 0.0 : m.cwiseAbs().maxCoeff(); }

double hermiticity_error(const Matrix& m) { return max_abs(m - m.adjoint()); }

void require_hermitian(const Matrix& h, const char* who) {
  const double tol = 1e-10 * std::max(1.0, max_abs(h));
  if (hermiticity_error(h) > tol) {
    throw ArgumentError(std::string(who) + ": input is not Hermitian");
  }
}

}  // namespace

// ---------------------------------------------------------------- Operator

Operator::Operator(Matrix data, Dims dims) : data_(std::move(data)), dims_(std::move(dims)) {
  check_dims(data_, dims_);
}

Operator::Operator(Matrix data) : data_(std::move(data)), dims_{static_cast<int>(data_.rows())} {
  check_dims(data_, dims_);
}

Operator Operator::identity(const Dims& dims) {
  const long n = product(dims);
  return Operator(Matrix::Identity(n, n), dims);
}

Operator Operator::zero(const Dims& dims) {
  const long n = product(dims);
  return Operator(Matrix::Zero(n, n), dims);
}

double Operator::hermiticity_error() const { return riet::hermiticity_error(data_); }

Operator& Operator::operator+=(const Operator& other) {
  if (dims_ != other.dims_) throw ArgumentError("operator sum: factor dims differ");
  data_ += other.data_;
  return *this;
}

Operator& Operator::operator-=(const Operator& other) {
  if (dims_ != other.dims_) throw ArgumentError("operator difference: factor dims differ");
  data_ -= other.data_;
  return *this;
}

Operator& Operator::operator*=(Complex s) {
  data_ *= s;
  return *this;
}

Operator operator*(const Operator& a, const Operator& b) {
  if (a.dims_ != b.dims_) throw ArgumentError("operator product: factor dims differ");
  return Operator(a.data_ * b.data_, a.dims_);
}

// ----------------------------------------------------------- DensityMatrix

DensityMatrix::DensityMatrix(Operator op) : op_(std::move(op)) {
  const Matrix& m = op_.matrix();
  if (riet::hermiticity_error(m) > kHermitianTol) {
    throw ArgumentError("density matrix is not Hermitian");
  }
  if (std::abs(m.trace() - Complex(1.0)) > kTraceTol) {
    throw ArgumentError("density matrix trace is not 1");
  }
  Matrix h = m;
  hermitize(h);
  Eigen::SelfAdjointEigenSolver<Matrix> es(h, Eigen::EigenvaluesOnly);
  if (es.eigenvalues().minCoeff() < -kPositivityTol) {
    throw ArgumentError("density matrix has a negative eigenvalue");
  }
}

DensityMatrix DensityMatrix::unchecked(Operator op) { return DensityMatrix(std::move(op), Unchecked{}); }

DensityMatrix DensityMatrix::pure(const Eigen::VectorXcd& psi, const Dims& dims) {
  return DensityMatrix(Operator(psi * psi.adjoint(), dims));
}

double DensityMatrix::purity() const {
  // Tr(rho^2) = sum |rho_ij|^2 for Hermitian rho.
  return matrix().squaredNorm();
}

// ------------------------------------------------------ EigenDecomposition

Matrix EigenDecomposition::reconstruct() const {
  return eigenvectors * eigenvalues.cast<Complex>().asDiagonal() * eigenvectors.adjoint();
}

// ------------------------------------------------------------------- kron

Matrix kron(const Matrix& a, const Matrix& b) {
  const Eigen::Index rb = b.rows();
  const Eigen::Index cb = b.cols();
  Matrix out(a.rows() * rb, a.cols() * cb);
  for (Eigen::Index j = 0; j < a.cols(); ++j) {
    for (Eigen::Index i = 0; i < a.rows(); ++i) {
      out.block(i * rb, j * cb, rb, cb) = a(i, j) * b;
    }
  }
  return out;
}

Operator kron(const Operator& a, const Operator& b) {
  Dims dims = a.dims();
  dims.insert(dims.end(), b.dims().begin(), b.dims().end());
  return Operator(kron(a.matrix(), b.matrix()), std::move(dims));
}

// ---------------------------------------------------------- partial trace

Operator partial_trace(const Operator& op, std::span<const int> keep) {
  const Dims& dims = op.dims();
  const int nf = static_cast<int>(dims.size());
  if (keep.empty()) throw ArgumentError("partial_trace: keep set is empty");
  std::vector<bool> kept(nf, false);
  for (int k : keep) {
    if (k < 0 || k >= nf) {
      throw ArgumentError("partial_trace: invalid factor index " + std::to_string(k));
    }
    if (kept[k]) throw ArgumentError("partial_trace: duplicate factor index " + std::to_string(k));
    kept[k] = true;
  }

  // Row-major strides of the full index (factor 0 is the slowest).
  std::vector<long> stride(nf, 1);
  for (int f = nf - 2; f >= 0; --f) stride[f] = stride[f + 1] * dims[f + 1];

  // Enumerate offsets contributed by the kept and traced digits separately;
  // full index = kept_offset + traced_offset.
  auto offsets = [&](bool want_kept) {
    std::vector<long> out{0};
    for (int f = 0; f < nf; ++f) {
      if (kept[f] != want_kept) continue;
      std::vector<long> next;
      next.reserve(out.size() * dims[f]);
      for (long base : out) {
        for (int d = 0; d < dims[f]; ++d) next.push_back(base + d * stride[f]);
      }
      out = std::move(next);
    }
    return out;
  };
  const std::vector<long> koff = offsets(true);
  const std::vector<long> toff = offsets(false);

  Dims out_dims;
  for (int f = 0; f < nf; ++f) {
    if (kept[f]) out_dims.push_back(dims[f]);
  }

  const Matrix& m = op.matrix();
  const long nk = static_cast<long>(koff.size());
  Matrix out = Matrix::Zero(nk, nk);
  for (long c = 0; c < nk; ++c) {
    for (long r = 0; r < nk; ++r) {
      Complex acc = 0.0;
      for (long t : toff) acc += m(koff[r] + t, koff[c] + t);
      out(r, c) = acc;
    }
  }
  return Operator(std::move(out), std::move(out_dims));
}

DensityMatrix partial_trace(const DensityMatrix& rho, std::span<const int> keep) {
  Operator reduced = partial_trace(rho.op(), keep);
  Matrix m = reduced.matrix();
  hermitize(m);
  return DensityMatrix::unchecked(Operator(std::move(m), reduced.dims()));
}

// ------------------------------------------------------ eigen / functions

EigenDecomposition herm_eig(const Matrix& h) {
  require_hermitian(h, "herm_eig");
  Matrix sym = h;
  hermitize(sym);
  Eigen::SelfAdjointEigenSolver<Matrix> es(sym);
  if (es.info() != Eigen::Success) throw ArgumentError("herm_eig: eigensolver failed");
  return {es.eigenvalues(), es.eigenvectors()};
}

EigenDecomposition herm_eig(const Operator& h) { return herm_eig(h.matrix()); }

Matrix expm_i_herm(const Matrix& h, double theta) {
  const EigenDecomposition ed = herm_eig(h);
  Eigen::VectorXcd phases(ed.eigenvalues.size());
  for (Eigen::Index i = 0; i < phases.size(); ++i) {
    phases(i) = std::exp(Complex(0.0, -theta * ed.eigenvalues(i)));
  }
  return ed.eigenvectors * phases.asDiagonal() * ed.eigenvectors.adjoint();
}

Operator expm_i_herm(const Operator& h, double theta) {
  return Operator(expm_i_herm(h.matrix(), theta), h.dims());
}

Operator expm_nilpotent2(const Operator& x, Complex theta) {
  const Matrix& m = x.matrix();
  const double scale = std::max(1.0, max_abs(m) * max_abs(m));
  if (max_abs(m * m) > 1e-12 * scale) {
    throw ArgumentError("expm_nilpotent2: operator does not square to zero");
  }
  Matrix out = theta * m;
  out.diagonal().array() += 1.0;
  return Operator(std::move(out), x.dims());
}

Matrix sqrt_psd(const Matrix& rho) {
  Matrix sym = rho;
  hermitize(sym);
  Eigen::SelfAdjointEigenSolver<Matrix> es(sym);
  RealVector roots = es.eigenvalues().cwiseMax(0.0).cwiseSqrt();
  Matrix out = es.eigenvectors() * roots.cast<Complex>().asDiagonal() * es.eigenvectors().adjoint();
  hermitize(out);
  return out;
}

Operator sqrt_psd(const DensityMatrix& rho) { return Operator(sqrt_psd(rho.matrix()), rho.dims()); }

double fidelity(const Matrix& rho, const Matrix& sigma) {
  if (rho.rows() != sigma.rows() || rho.cols() != sigma.cols()) {
    throw ArgumentError("fidelity: dimension mismatch");
  }
  const Matrix s = sqrt_psd(rho);
  Matrix inner = s * sigma * s;
  hermitize(inner);
  Eigen::SelfAdjointEigenSolver<Matrix> es(inner, Eigen::EigenvaluesOnly);
  return es.eigenvalues().cwiseMax(0.0).cwiseSqrt().sum();
}

double fidelity(const DensityMatrix& rho, const DensityMatrix& sigma) {
  return fidelity(rho.matrix(), sigma.matrix());
}

double concurrence(const Matrix& rho) {
  if (rho.rows() != 4 || rho.cols() != 4) {
    throw ArgumentError("concurrence: expected a 4x4 two-qubit state");
  }
  Matrix yy = Matrix::Zero(4, 4);
  yy(0, 3) = -1.0;
  yy(1, 2) = 1.0;
  yy(2, 1) = 1.0;
  yy(3, 0) = -1.0;
  const Matrix tilde = yy * rho.conjugate() * yy;
  // Eigenvalues of rho*tilde equal those of sqrt(rho) tilde sqrt(rho),
  // which is Hermitian PSD.
  const Matrix s = sqrt_psd(rho);
  Matrix r = s * tilde * s;
  hermitize(r);
  Eigen::SelfAdjointEigenSolver<Matrix> es(r, Eigen::EigenvaluesOnly);
  RealVector lam = es.eigenvalues().cwiseMax(0.0).cwiseSqrt();
  std::sort(lam.data(), lam.data() + lam.size(), std::greater<>());
  return std::max(0.0, lam(0) - lam(1) - lam(2) - lam(3));
}

double concurrence(const DensityMatrix& rho) {
  if (rho.dims() != Dims{2, 2}) {
    throw ArgumentError("concurrence: expected factor dims (2, 2)");
  }
  return concurrence(rho.matrix());
}

void hermitize(Matrix& m) {
  // Avoid aliasing: adjoint() of m read while writing m.
  Matrix adj = m.adjoint();
  m = 0.5 * (m + adj);
}

}  // namespace riet
