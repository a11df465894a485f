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

// Dissipative classical channels and the register construction that turns a
// one-round LOCC map T into an effective generator delta (T(rho) - rho) on a
// two-qubit main system.
//
// Register layout (basis state 0 means "empty"):
//   Ia  Alice's outgoing register, n + 1 states
//   Ob  Bob's incoming register,   n + 1 states
//   Ib  Bob's outgoing register,   n^2 + 1 states
//   Oa  Alice's incoming register, n^2 + 1 states

#pragma once

#include <array>
#include <string>
#include <vector>

#include "disq/liouville.hpp"

namespace disq::commchan {

struct ChannelConfig {
  double Gamma = 1.0;  // communication rate
  double delta = 0.0;  // LOCC trigger rate
  double gamma = 0.0;  // main-system rate
  int n_outcomes = 2;

  double alpha() const { return (gamma + delta) / Gamma; }
  void validate() const;
};

/// Kraus operators of the channel that moves a nonempty `src` register into
/// `dst` (overwriting it) and resets `src`. Empty input leaves `dst` alone.
std::vector<SparseMatrix> channel_kraus(const SystemLayout& layout, const std::string& src,
                                        const std::string& dst);
/// Gamma (T(rho) - rho) for the channel above.
LindbladTerm channel_generator(double Gamma, const SystemLayout& layout, const std::string& src,
                               const std::string& dst);

// Five-state occupation model.
struct OccupationVector {
  double p0000 = 1.0;
  double p000X = 0.0;
  double p00XA = 0.0;  // third register occupied, fourth arbitrary
  double p0XAA = 0.0;
  double pXAAA = 0.0;

  double sum() const { return p0000 + p000X + p00XA + p0XAA + pXAAA; }
  std::array<double, 5> as_array() const { return {p0000, p000X, p00XA, p0XAA, pXAAA}; }
  static OccupationVector from_array(const std::array<double, 5>& a) {
    return {a[0], a[1], a[2], a[3], a[4]};
  }
};

OccupationVector occupation_rhs(const OccupationVector& p, double delta, double Gamma);
OccupationVector occupation_steady(double delta, double Gamma);
OccupationVector evolve_occupation(const OccupationVector& p0, double delta, double Gamma, double t);

/// One-round LOCC on a qubit pair: Alice's POVM A_i, Bob's POVM B^i_j
/// (conditioned on i), Alice's channel T_ij with Kraus C^{ij}_k. All operators
/// are 2x2 on the acting party's qubit; indices run from 0 here.
struct OneRoundLocc {
  std::string name;
  std::vector<Matrix> a;                            // a[i]
  std::vector<std::vector<Matrix>> b;               // b[i][j]
  std::vector<std::vector<std::vector<Matrix>>> c;  // c[i][j][k]

  int n() const { return static_cast<int>(a.size()); }
  void validate() const;
  /// T(rho) on the 4x4 main-system matrix (Alice first).
  Matrix apply(const Matrix& rho) const;
};

/// A_i = U/sqrt(n), B^i_j = V/sqrt(n), C = I: T(rho) = (U x V) rho (U x V)^dagger.
OneRoundLocc local_unitary_pair(const Matrix& u, const Matrix& v, int n = 2);
/// Alice measures Z; Bob measures Z and flips his qubit if Alice saw 1;
/// Alice applies Z if Bob saw 1.
OneRoundLocc conditional_pauli();

/// Jump operators of the main-system process (4x4), applied at rate gamma.
/// Default: amplitude damping on both qubits, scaled so max ||L(rho)||_1 = 1.
std::vector<Matrix> default_main_jumps();

/// [A, B, Ia, Ob, Ib, Oa].
SystemLayout register_layout(int n);

/// The full register construction as a master equation over register_layout.
MasterEquation build_full(const ChannelConfig& cfg, const OneRoundLocc& t,
                          const std::vector<Matrix>& main_jumps);

/// Register-diagonal states: one 4x4 block per register configuration.
class BlockModel {
 public:
  BlockModel(const ChannelConfig& cfg, const OneRoundLocc& t, const std::vector<Matrix>& main_jumps);

  int num_blocks() const { return num_blocks_; }
  int config_index(int ia, int ob, int ib, int oa) const;
  std::array<int, 4> config_digits(int c) const;

  /// State vector: vec of block c occupies entries [16c, 16c + 16).
  Vector empty_registers(const Matrix& main_state) const;
  Matrix block(const Vector& state, int c) const;
  Vector apply(const Vector& state) const { return generator_ * state; }
  const SparseMatrix& generator() const { return generator_; }

  Vector from_full(const Matrix& rho) const;
  Matrix to_full(const Vector& state) const;

  /// Aggregated occupations: p0000, pX000, p0X00, p00X0, p000X, and the
  /// five-state grouping.
  struct Occupations {
    double p0000, pX000, p0X00, p00X0, p000X;
    OccupationVector grouped;
  };
  Occupations occupations(const Vector& state) const;

  /// Backward-Euler steps of size h for total time t, then explicit
  /// integration over `relax` to remove the stiff-solver lag.
  Vector evolve(const Vector& state, double t, double h, double relax) const;

  const ChannelConfig& config() const { return cfg_; }

 private:
  ChannelConfig cfg_;
  int n_, dims_[4], num_blocks_;
  SparseMatrix generator_;
};

struct BoundsReport {
  double delta, Gamma, t_wait;
  double pX000, p0X00, p00X0, p000X, p0000;
  double lower, upper;
  bool all_hold;
};

/// Occupations after t_wait starting from empty registers, checked against
/// delta/Gamma - 7 (delta/Gamma)^2 <= p <= delta/Gamma.
BoundsReport verify_bounds(double delta, double Gamma, double t_wait);

enum class GeneratorExtraction { kExact, kRichardson };

struct ErrorPoint {
  double Gamma, alpha, error_trace_norm;
};

struct ErrorReport {
  std::string map_name;
  double gamma, delta;
  std::vector<ErrorPoint> points;
  double slope;           // least-squares log-log slope of error vs alpha
  bool monotone;          // error non-increasing in Gamma
};

/// || d rho_0000/dt - [gamma L(rho_0000) + delta (T(rho_0000) - rho_0000)] ||_1 / delta
/// after a waiting time 10/delta, for every Gamma.
ErrorReport effective_locc_error(const OneRoundLocc& t, double gamma, double delta,
                                 const std::vector<double>& Gammas,
                                 GeneratorExtraction mode = GeneratorExtraction::kRichardson);

/// Least-squares slope of log(y) against log(x).
double loglog_slope(const std::vector<double>& x, const std::vector<double>& y);

}  // namespace disq::commchan
