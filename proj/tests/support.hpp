// Copyright 2026 The disq Authors
//
// Licensed under the Apache License, Version 2.0 (the "License");
// you may not use this file except in compliance with the License.
// You may obtain a copy of the License at
//
//      http://www.apache.org/licenses/LICENSE-2.0
//
// Unless required by applicable law or agreed to in writing, software
// distributed under the License is distributed on an "AS IS" BASIS,
// WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
// See the License for the specific language governing permissions and
// limitations under the License.

// Oracles and generators shared by the test binaries. Oracles are written
// from definitions with plain loops and never call the routine they check.

#pragma once

#include <algorithm>
#include <cmath>
#include <complex>
#include <random>
#include <vector>

#include <Eigen/Dense>
#include <Eigen/Eigenvalues>

#include "disq/qops.hpp"

namespace disq::testing {

// Generators ------------------------------------------------------------------

class Gen {
 public:
  explicit Gen(std::uint64_t seed) : rng_(seed) {}

  double uniform(double lo, double hi) { return std::uniform_real_distribution<double>(lo, hi)(rng_); }
  int integer(int lo, int hi) { return std::uniform_int_distribution<int>(lo, hi)(rng_); }
  cplx gaussian_c() {
    std::normal_distribution<double> n(0.0, 1.0);
    return {n(rng_), n(rng_)};
  }

  Matrix complex_matrix(int rows, int cols) {
    Matrix m(rows, cols);
    for (int i = 0; i < rows; ++i)
      for (int j = 0; j < cols; ++j) m(i, j) = gaussian_c();
    return m;
  }

  Matrix hermitian(int d) {
    Matrix g = complex_matrix(d, d);
    return (g + g.adjoint()) / 2.0;
  }

  /// Ginibre state, rank `rank` (full when 0).
  Matrix state(int d, int rank = 0) {
    Matrix g = complex_matrix(d, rank > 0 ? rank : d);
    Matrix rho = g * g.adjoint();
    return rho / rho.trace();
  }

  /// Haar unitary from QR of a Ginibre matrix with phase fix.
  Matrix unitary(int d) {
    Eigen::HouseholderQR<Matrix> qr(complex_matrix(d, d));
    Matrix q = qr.householderQ();
    Matrix r = qr.matrixQR().triangularView<Eigen::Upper>();
    for (int i = 0; i < d; ++i) {
      cplx ph = r(i, i) / std::abs(r(i, i));
      q.col(i) *= ph;
    }
    return q;
  }

  /// Random complete Kraus set: blocks of a random isometry.
  std::vector<Matrix> kraus_set(int d, int count) {
    Matrix u = unitary(d * count);
    std::vector<Matrix> ks;
    for (int k = 0; k < count; ++k) ks.push_back(u.block(k * d, 0, d, d));
    return ks;
  }

  std::mt19937_64& engine() { return rng_; }

 private:
  std::mt19937_64 rng_;
};

// Oracles ---------------------------------------------------------------------

/// Digits of a flat index, first factor most significant.
inline std::vector<int> digits_of(int index, const std::vector<int>& dims) {
  std::vector<int> d(dims.size());
  for (int k = static_cast<int>(dims.size()) - 1; k >= 0; --k) {
    d[k] = index % dims[k];
    index /= dims[k];
  }
  return d;
}

/// Element-wise embedding: <x|op|y> = <x_t|local|y_t> * prod_{k not in t} delta(x_k, y_k).
inline Matrix embed_oracle(const Matrix& local, const std::vector<int>& dims, const std::vector<int>& targets) {
  int total = 1;
  for (int d : dims) total *= d;
  Matrix out = Matrix::Zero(total, total);
  for (int x = 0; x < total; ++x)
    for (int y = 0; y < total; ++y) {
      auto dx = digits_of(x, dims), dy = digits_of(y, dims);
      bool same = true;
      for (std::size_t k = 0; k < dims.size(); ++k)
        if (std::find(targets.begin(), targets.end(), static_cast<int>(k)) == targets.end() && dx[k] != dy[k])
          same = false;
      if (!same) continue;
      int lx = 0, ly = 0;
      for (int t : targets) {
        lx = lx * dims[t] + dx[t];
        ly = ly * dims[t] + dy[t];
      }
      out(x, y) = local(lx, ly);
    }
  return out;
}

/// Partial trace keeping `keep` (in the given order) by summing matching entries.
inline Matrix partial_trace_oracle(const Matrix& m, const std::vector<int>& dims, const std::vector<int>& keep) {
  int kd = 1;
  for (int k : keep) kd *= dims[k];
  Matrix out = Matrix::Zero(kd, kd);
  const int total = static_cast<int>(m.rows());
  for (int x = 0; x < total; ++x)
    for (int y = 0; y < total; ++y) {
      auto dx = digits_of(x, dims), dy = digits_of(y, dims);
      bool traced_equal = true;
      for (std::size_t k = 0; k < dims.size(); ++k)
        if (std::find(keep.begin(), keep.end(), static_cast<int>(k)) == keep.end() && dx[k] != dy[k])
          traced_equal = false;
      if (!traced_equal) continue;
      int kx = 0, ky = 0;
      for (int k : keep) {
        kx = kx * dims[k] + dx[k];
        ky = ky * dims[k] + dy[k];
      }
      out(kx, ky) += m(x, y);
    }
  return out;
}

/// Wootters concurrence from the eigenvalues of rho * rho~ (non-Hermitian route).
inline double concurrence_oracle(const Matrix& rho) {
  Matrix yy = Matrix::Zero(4, 4);
  yy(0, 3) = -1.0;
  yy(1, 2) = 1.0;
  yy(2, 1) = 1.0;
  yy(3, 0) = -1.0;
  Matrix tilde = yy * rho.conjugate() * yy;
  Eigen::ComplexEigenSolver<Matrix> es(rho * tilde);
  std::vector<double> l;
  for (int i = 0; i < 4; ++i) l.push_back(std::sqrt(std::max(0.0, es.eigenvalues()(i).real())));
  std::sort(l.begin(), l.end(), std::greater<>());
  return std::max(0.0, l[0] - l[1] - l[2] - l[3]);
}

inline double binary_entropy(double p) {
  if (p <= 0.0 || p >= 1.0) return 0.0;
  return -p * std::log2(p) - (1 - p) * std::log2(1 - p);
}

/// One Lindblad dissipator, written out.
inline Matrix dissipator(const Matrix& a, const Matrix& rho) {
  Matrix ada = a.adjoint() * a;
  return a * rho * a.adjoint() - 0.5 * (ada * rho + rho * ada);
}

/// Dense superoperator of rho -> f(rho), column by column (column-stacking vec).
template <class F>
Matrix superoperator(int d, F f) {
  Matrix s(d * d, d * d);
  for (int j = 0; j < d * d; ++j) {
    Matrix e = Matrix::Zero(d, d);
    e(j % d, j / d) = 1.0;
    Matrix out = f(e);
    s.col(j) = Eigen::Map<const Vector>(out.data(), d * d);
  }
  return s;
}

inline double max_abs(const Matrix& m) { return m.size() ? m.cwiseAbs().maxCoeff() : 0.0; }

}  // namespace disq::testing
