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

// Continuous entanglement swapping between two source pairs A-B1 and B2-C
// into a target pair A-C. Qubit order: a b1 b2 c tA tC.

#pragma once

#include <vector>

#include "disq/liouville.hpp"

namespace disq::swap {

struct Params {
  double f = 1.0;         // entangler fixed point of both sources
  double gamma_sw = 1.0;  // entangling rate
  double eps = 0.0;       // local depolarizing rate on the sources
  double delta_sw = 0.0;  // swap rate

  void validate() const;
};

/// Fidelity after swapping two Werner pairs of fidelity f: (1 - 2f + 4f^2)/3.
double swap_output_fidelity(double f);

/// Source relaxation exponent (gamma_sw + eps) / delta_sw (infinite at delta_sw = 0).
double exponent(const Params& p);

/// 1/4 + (4 f_s - 1)^2 / 12 * 2a^2 / ((a+1)(2a+1)).
double closed_form_fidelity(const Params& p);
/// Quadrature of swap_output_fidelity over the re-initialization distribution.
double quadrature_fidelity(const Params& p);

/// Thrown when the quadrature and closed form disagree beyond 1e-9.
class TranscriptionError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

/// Steady-state target fidelity, by quadrature, checked against the closed form.
double continuous_swap_fidelity(const Params& p);

SystemLayout layout();

/// Bell measurement on (b1, b2), Pauli correction on c, result written to the
/// target, sources reset to the maximally mixed state. 256 Kraus operators.
std::vector<SparseMatrix> swap_locc_kraus();

/// Fidelity of the swap output of rho (four source qubits a b1 b2 c), via the
/// Bell-measurement Kraus operators. Oracle for swap_output_fidelity.
double bell_measurement_fidelity(const Matrix& sources);

MasterEquation build(const Params& p);

/// Steady-state target fidelity of the full master equation.
double simulate_continuous_swap(const Params& p);

}  // namespace disq::swap
