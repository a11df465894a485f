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

#pragma once

#include <complex>
#include <cstdint>
#include <random>
#include <span>
#include <stdexcept>
#include <string>
#include <string_view>
#include <vector>

#include <Eigen/Dense>
#include <Eigen/Sparse>

namespace disq {

using cplx = std::complex<double>;
using Matrix = Eigen::MatrixXcd;
using Vector = Eigen::VectorXcd;
using SparseMatrix = Eigen::SparseMatrix<cplx>;

/// Absolute tolerance for the Hermiticity, trace and positivity checks on states.
inline constexpr double kStateTolerance = 1e-9;

/// Unknown label, duplicate label or dimension mismatch against a layout.
class LayoutError : public std::invalid_argument {
 public:
  using std::invalid_argument::invalid_argument;
};

/// A matrix that was supposed to be a density matrix is not one.
class InvariantViolation : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

struct Factor {
  std::string label;
  int dim = 2;

  bool operator==(const Factor&) const = default;
};

/// Ordered tensor-product structure. The first factor is the most significant
/// index of the computational basis.
class SystemLayout {
 public:
  SystemLayout() = default;
  explicit SystemLayout(std::vector<Factor> factors);

  /// Layout made of qubits with the given labels, in order.
  static SystemLayout qubits(const std::vector<std::string>& labels);

  const std::vector<Factor>& factors() const { return factors_; }
  std::size_t size() const { return factors_.size(); }
  int total_dim() const { return total_dim_; }
  bool contains(std::string_view label) const;
  std::size_t index_of(std::string_view label) const;
  int dim_of(std::string_view label) const { return factors_[index_of(label)].dim; }
  std::vector<std::string> labels() const;

  /// Sub-layout with the given labels, in the order given.
  SystemLayout select(const std::vector<std::string>& labels) const;

  /// Per-factor digits of a flat basis index.
  std::vector<int> digits(int index) const;
  int flat_index(std::span<const int> digits) const;

  bool operator==(const SystemLayout& other) const { return factors_ == other.factors_; }

 private:
  std::vector<Factor> factors_;
  int total_dim_ = 1;
};

/// Hermitian, positive semidefinite, unit-trace matrix over a layout.
class DensityMatrix {
 public:
  /// Validates the state invariants at kStateTolerance; throws InvariantViolation.
  DensityMatrix(SystemLayout layout, Matrix data);

  /// Skips validation. For internal hot paths whose output is validated later.
  static DensityMatrix unchecked(SystemLayout layout, Matrix data);

  static DensityMatrix maximally_mixed(SystemLayout layout);
  static DensityMatrix pure(SystemLayout layout, const Vector& psi);

  const SystemLayout& layout() const { return layout_; }
  const Matrix& data() const { return data_; }
  int dim() const { return static_cast<int>(data_.rows()); }

 private:
  struct NoCheck {};
  DensityMatrix(SystemLayout layout, Matrix data, NoCheck);

  SystemLayout layout_;
  Matrix data_;
};

/// Checks the state invariants and returns a description of the first
/// violation, or an empty string when the matrix is a valid state.
std::string state_violation(const Matrix& rho, double tol = kStateTolerance);

/// Operator on a layout, acting as identity outside `support`.
struct Operator {
  SystemLayout layout;
  SparseMatrix data;
  std::vector<std::string> support;

  Matrix dense() const { return Matrix(data); }
};

// Single-qubit building blocks.
Matrix pauli(int i);        // 0 = I, 1 = X, 2 = Y, 3 = Z
Matrix sigma_minus();       // |0><1|
Matrix sigma_plus();        // |1><0|
Matrix excited_projector(); // |1><1|

/// Bell states: 0 = (|00>+|11>)/sqrt2, 1 = (|01>+|10>)/sqrt2,
/// 2 = (|01>-|10>)/sqrt2, 3 = (|00>-|11>)/sqrt2. Index 0 is the target state.
Vector bell_state(int i);
/// Projector onto (|00>+|11>)/sqrt2.
Matrix omega();

Matrix kron(const Matrix& a, const Matrix& b);
Matrix kron(std::initializer_list<Matrix> factors);

/// Embeds `local` (acting on `targets`, in that order) into `layout`.
Operator embed(const Matrix& local, const SystemLayout& layout,
               const std::vector<std::string>& targets);

/// Reduced state on `keep` (in the order given).
DensityMatrix partial_trace(const DensityMatrix& rho, const std::vector<std::string>& keep);
/// Same, for any square matrix over `layout`. Used on generator outputs.
Matrix partial_trace(const Matrix& m, const SystemLayout& layout,
                     const std::vector<std::string>& keep);

/// Partial transpose on the factors in `transposed`.
Matrix partial_transpose(const Matrix& m, const SystemLayout& layout,
                         const std::vector<std::string>& transposed);

/// f*Omega + (1-f)(I-Omega)/3 on two qubits labelled `a`, `b`.
DensityMatrix werner_state(double f, const std::string& a = "A", const std::string& b = "B");
/// tr(Omega rho) for a two-qubit state.
double fidelity_with_omega(const DensityMatrix& rho);
/// tr(Omega rho_pair) for the pair (a, b) of a larger state.
double fidelity_with_omega(const DensityMatrix& rho, const std::string& a, const std::string& b);

double concurrence(const DensityMatrix& rho);
/// Entanglement of formation in ebits (two qubits only).
double eof(const DensityMatrix& rho);
/// (||rho^{T_B}||_1 - 1) / 2 for the cut `party_b` versus the rest.
double negativity(const DensityMatrix& rho, const std::vector<std::string>& party_b);
/// log2 ||rho^{T_B}||_1.
double log_negativity(const DensityMatrix& rho, const std::vector<std::string>& party_b);
/// Von Neumann entropy in bits.
double entropy(const DensityMatrix& rho);

double trace_norm(const Matrix& m);
double trace_distance(const Matrix& a, const Matrix& b);
double trace_distance(const DensityMatrix& a, const DensityMatrix& b);

/// Random full-rank state from a Ginibre matrix.
DensityMatrix random_state(const SystemLayout& layout, std::mt19937_64& rng);
/// Random pure state (Haar).
DensityMatrix random_pure_state(const SystemLayout& layout, std::mt19937_64& rng);

/// Applies the Kraus map sum_k K rho K^dagger.
Matrix apply_kraus(std::span<const Matrix> kraus, const Matrix& rho);
/// || sum_k K^dagger K - I ||_max.
double kraus_completeness_error(std::span<const Matrix> kraus);

}  // namespace disq
