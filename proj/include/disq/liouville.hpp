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

#include <variant>
#include <vector>

#include "disq/integrator.hpp"
#include "disq/qops.hpp"

namespace disq {

/// Total dimension up to which the vectorized generator is assembled.
inline constexpr int kLiouvillianMaxDim = 64;
/// Total dimension up to which kernels are found by dense SVD.
inline constexpr int kDenseKernelMaxDim = 16;

/// A rho A^dagger - {A^dagger A, rho}/2.
struct Jump {
  Operator op;
};
/// +i [H, rho].
struct Hamiltonian {
  Operator op;
};
/// T(rho) - rho with T given by Kraus operators on the full layout.
struct Channel {
  std::vector<SparseMatrix> kraus;
};

struct LindbladTerm {
  std::variant<Jump, Hamiltonian, Channel> kind;
  double rate = 0.0;

  static LindbladTerm jump(Operator a, double rate);
  static LindbladTerm hamiltonian(Operator h, double rate);
  static LindbladTerm channel(std::vector<SparseMatrix> kraus, double rate);
  static LindbladTerm channel(const std::vector<Matrix>& kraus, double rate);
};

class MasterEquation {
 public:
  /// Validates that every term lives on `layout`, rates are nonnegative and
  /// Kraus sets are complete to 1e-9.
  MasterEquation(SystemLayout layout, std::vector<LindbladTerm> terms);

  const SystemLayout& layout() const { return layout_; }
  const std::vector<LindbladTerm>& terms() const { return terms_; }
  int dim() const { return layout_.total_dim(); }

  /// Returns a copy with `extra` appended.
  MasterEquation with_terms(const std::vector<LindbladTerm>& extra) const;

  /// d rho / dt for an arbitrary square matrix (linear extension).
  Matrix apply(const Matrix& rho) const;

 private:
  struct Compiled {
    enum Kind { kJump, kHamiltonian, kChannel } kind;
    double rate;
    std::vector<SparseMatrix> ops;      // A, H, or Kraus set
    std::vector<SparseMatrix> ops_adj;  // adjoints
    SparseMatrix ada;                   // A^dagger A (jumps)
  };

  SystemLayout layout_;
  std::vector<LindbladTerm> terms_;
  std::vector<Compiled> compiled_;
  SparseMatrix effective_;  // -i H_eff part for jumps and Hamiltonians: K rho + rho K^dagger

  friend SparseMatrix build_liouvillian_matrix(const MasterEquation& me);
};

/// Sum of rate * term(rho). Traceless and Hermitian for a Hermitian input.
Matrix apply_generator(const MasterEquation& me, const DensityMatrix& rho);

/// Matrix L with vec(d rho/dt) = L vec(rho), column-stacking vec. Throws
/// LayoutError beyond kLiouvillianMaxDim.
SparseMatrix build_liouvillian_matrix(const MasterEquation& me);

struct EvolveOptions {
  StepControl step;
  bool project_hermitian = true;
  /// Times at which states are recorded; empty means only t_end.
  std::vector<double> sample_times;
};

struct Trajectory {
  std::vector<double> times;
  std::vector<DensityMatrix> states;
};

/// Integrates the master equation from rho0 to t_end. Every recorded state is
/// validated against the state invariants.
Trajectory evolve(const MasterEquation& me, const DensityMatrix& rho0, double t_end,
                  const EvolveOptions& opts = {});

/// The steady-state kernel has dimension greater than one.
class NonUniqueSteadyState : public std::runtime_error {
 public:
  NonUniqueSteadyState(std::string what, std::vector<Matrix> basis)
      : std::runtime_error(std::move(what)), kernel_basis(std::move(basis)) {}
  std::vector<Matrix> kernel_basis;
};

struct SteadyStateOptions {
  double residual_tol = 1e-8;
  /// Singular values below kernel_tol * largest count as kernel (dense path).
  double kernel_tol = 1e-10;
  /// Long-time integration span for dimensions beyond kLiouvillianMaxDim.
  double max_time = 1e6;
};

struct SteadyState {
  DensityMatrix state;
  double residual;  // || apply_generator(state) ||_1
};

SteadyState steady_state(const MasterEquation& me, const SteadyStateOptions& opts = {});

}  // namespace disq
