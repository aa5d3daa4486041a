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

// Shared helpers for the test suites.

#pragma once

#include <cmath>
#include <complex>
#include <random>

#include "riet/linops.hpp"

namespace riet::testing {

inline Matrix random_matrix(int rows, int cols, std::mt19937& rng) {
  std::normal_distribution<double> n;
  Matrix m(rows, cols);
  for (int i = 0; i < rows; ++i) {
    for (int j = 0; j < cols; ++j) m(i, j) = Complex(n(rng), n(rng));
  }
  return m;
}

inline Matrix random_hermitian(int d, std::mt19937& rng) {
  const Matrix a = random_matrix(d, d, rng);
  return 0.5 * (a + a.adjoint());
}

/// Full-rank random state rho = G G^dag / tr.
inline Matrix random_density(int d, std::mt19937& rng) {
  const Matrix g = random_matrix(d, d, rng);
  Matrix rho = g * g.adjoint();
  rho /= rho.trace();
  return rho;
}

inline Matrix random_unitary(int d, std::mt19937& rng) {
  Eigen::HouseholderQR<Matrix> qr(random_matrix(d, d, rng));
  return qr.householderQ() * Matrix::Identity(d, d);
}

inline double max_abs(const Matrix& m) { return m.size() == 0 ? 0.0 : m.cwiseAbs().maxCoeff(); }

/// sum_k (-i theta h)^k / k! with scaling and squaring.
inline Matrix taylor_expm_i(const Matrix& h, double theta, int terms = 30) {
  int squarings = 0;
  double norm = std::abs(theta) * h.cwiseAbs().rowwise().sum().maxCoeff();
  while (norm > 0.5) {
    norm /= 2.0;
    ++squarings;
  }
  const Matrix x = Complex(0.0, -theta / std::pow(2.0, squarings)) * h;
  Matrix term = Matrix::Identity(h.rows(), h.cols());
  Matrix sum = term;
  for (int k = 1; k < terms; ++k) {
    term = term * x / static_cast<double>(k);
    sum += term;
  }
  for (int s = 0; s < squarings; ++s) sum = sum * sum;
  return sum;
}

}  // namespace riet::testing
