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

// Two-pair distillation into a target pair, with either a local flip
// Hamiltonian on each side (no communication) or a measure-and-flip LOCC
// channel. Qubit order: s1A s1B s2A s2B tA tB.

#pragma once

#include <array>
#include <optional>
#include <string>
#include <vector>

#include "disq/liouville.hpp"

namespace disq::scheme1 {

enum class Variant { kNoComm, kLocc };

struct Pair {
  std::string alice;
  std::string bob;
};

inline const Pair kSource1{"s1A", "s1B"};
inline const Pair kSource2{"s2A", "s2B"};
inline const Pair kTarget{"tA", "tB"};

struct Params {
  double r = 0.4;
  double gamma = 1.0;
  double delta_f = 0.1;
  double eps_c = 0.0;
  double eps_h = 0.0;
  double eps_d = 0.0;
  Variant variant = Variant::kNoComm;
  /// LOCC variant only: twirl the target before the flip.
  bool twirled = false;
  /// Dephase only s1 on Alice's side and s2 on Bob's side.
  bool asymmetric_dephasing = false;

  void validate() const;
};

SystemLayout layout();

/// (|00> - tanh(r)|11>) / sqrt(1 + tanh(r)^2).
Vector dark_state(double r);

/// cosh(r) s-_Alice + sinh(r) s+_Bob and cosh(r) s-_Bob + sinh(r) s+_Alice.
std::array<Operator, 2> entangling_jumps(double r, const SystemLayout& layout, const Pair& pair);

/// Entangling jumps at rate gamma for one pair.
std::vector<LindbladTerm> entangling_terms(double r, double gamma, const SystemLayout& layout,
                                           const Pair& pair);

/// Cooling, heating and dephasing on both qubits of a pair. Zero rates are
/// omitted. Dephasing can be restricted to one side.
std::vector<LindbladTerm> noise_terms(double eps_c, double eps_h, double eps_d,
                                      const SystemLayout& layout, const Pair& pair,
                                      bool dephase_alice = true, bool dephase_bob = true);

/// Flip operator on one side, local basis |t s1 s2>: swaps the target qubit
/// with the qubit encoded as |0>=|01>, |1>=|10> on the sources; zero
/// outside that subspace.
Matrix flip_local();

/// Flip operator for the side whose qubits are (s1, s2, t).
Operator flip_hamiltonian(const SystemLayout& layout, const std::string& s1, const std::string& s2,
                          const std::string& t);

/// Sixteen Kraus operators sigma_i (x) sigma_j / 4 on a qubit pair.
std::vector<Matrix> twirl_kraus();

/// Twelve Kraus operators (U (x) conj(U)) / sqrt(12) over the Pauli group
/// times the order-three Clifford. Maps any two-qubit state to the Werner
/// state with the same overlap with Omega.
std::vector<Matrix> werner_twirl_kraus();

/// Kraus operators of the measure-and-flip channel on the full layout.
std::vector<Matrix> locc_map_kraus(bool twirled, const SystemLayout& layout);

MasterEquation build_no_comm(const Params& p);
MasterEquation build_locc(const Params& p);
MasterEquation build(const Params& p);

struct Observables {
  double eof_target = 0.0;
  double eof_s1 = 0.0;
  double entropy_s1 = 0.0;
  double logneg_source = 0.0;
  double ss_residual = 0.0;
};

/// Reduced-state observables of a full scheme state.
Observables observables(const DensityMatrix& rho);

struct ScanRow {
  Params params;
  std::optional<Observables> obs;  // empty when the steady state is not unique
  std::string error;
};

/// Steady state and observables at every grid point.
std::vector<ScanRow> scan(const std::vector<Params>& grid);

/// Copies of `base` with one named parameter (r, gamma, delta_f, eps_c, eps_h,
/// eps_d, eps_n) set to each value; eps_n sets cooling, heating and dephasing.
std::vector<Params> sweep(const Params& base, const std::string& name, const std::vector<double>& values);

}  // namespace disq::scheme1
