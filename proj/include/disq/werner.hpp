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

// Werner-state pumping with local depolarizing noise: generators, the exact
// propagator, continuous distillation fidelities and the 4-to-1 protocol.

#pragma once

#include <array>
#include <functional>
#include <string>
#include <vector>

#include "disq/liouville.hpp"

namespace disq::werner {

class QuadratureError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

struct Params {
  double f = 1.0;        // fixed point of the entangler
  double gamma = 1.0;    // entangling rate
  double eps = 0.0;      // local depolarizing rate
  double delta_d = 0.0;  // distillation (flip) rate
  int n = 1;             // sources per distillation block
  int m = 1;             // boost multiplicity

  void validate() const;
};

/// (gamma f + eps/4) / (gamma + eps).
double reduced_fidelity(double f, double gamma, double eps);

// Jump operators on a qubit pair (4x4 local matrices).
/// |psi_0><psi_i|, i = 0..3, with psi_0 the target Bell state.
std::vector<Matrix> q_jumps();
/// sigma_i (x) sigma_j / 4; sum of their dissipators is tr(rho) 1 - rho.
std::vector<Matrix> w_jumps();
/// sigma_i / 2 on one qubit; sum of dissipators replaces that qubit by 1/2.
std::vector<Matrix> depolarizing_jumps();

/// Generator tr(rho) rho_W(f) - rho at rate gamma, as jump terms on (a, b):
/// (4f-1)/3 of the Q family plus 4(1-f)/3 of the W family.
std::vector<LindbladTerm> entangler_terms(double f, double gamma, const SystemLayout& layout,
                                          const std::string& a, const std::string& b);
/// (eps/2) (N_a + N_b) on (a, b).
std::vector<LindbladTerm> noise_terms(double eps, const SystemLayout& layout, const std::string& a,
                                      const std::string& b);

/// gamma E_f + (eps/2) N on a single pair labelled A, B.
MasterEquation pair_equation(double f, double gamma, double eps);

// Direct superoperator actions on two-qubit matrices, for identity checks.
Matrix q_map(const Matrix& rho);            // tr(rho) Omega - rho
Matrix w_map(const Matrix& rho);            // tr(rho) 1 - rho
Matrix ef_map(const Matrix& rho, double f); // tr(rho) rho_W(f) - rho

/// Coefficients of rho0, rho1, rho2 = rho_W(f) and rho3 = 1 in the solution.
std::array<double, 4> g_coefficients(double gamma, double eps, double t);
/// Time derivative of the coefficient vector.
std::array<double, 4> g_rhs(const std::array<double, 4>& g, double gamma, double eps);

/// Closed-form solution of pair_equation(f, gamma, eps) from rho0.
DensityMatrix exact_evolve(const DensityMatrix& rho0, double f, double gamma, double eps, double t);

/// Fidelity of a copy re-initialized at the mixed state, given x in [0,1]:
/// f_s + (1/4 - f_s) x^a.
double reinit_fidelity(double f_s, double a, double x);

/// int_0^1 g(reinit_fidelity(f_s, a, x)) dx by adaptive Gauss-Kronrod with
/// absolute error 1e-10. a = infinity gives g(f_s).
double reinit_average(const std::function<double(double)>& g, double f_s, double a);

using FidelityMap = std::function<double(double)>;

/// A distillation protocol acting on blocks of `block_size` identical Werner pairs.
struct Protocol {
  std::string name;
  int block_size = 1;
  FidelityMap fidelity;  // output fidelity on success
  FidelityMap success;   // success probability
};

Protocol identity_protocol();
Protocol four_to_one_protocol();
Protocol nested_four_to_one_protocol(int levels);

/// int_0^1 f_D(f_s + (1/4 - f_s) x^((gamma+eps)/delta_d)) dx.
double distilled_steady_fidelity(const FidelityMap& f_d, double f_s, double gamma, double eps,
                                 double delta_d);
/// Same integral for the identity map, in closed form: f_s - (f_s - 1/4)/(a + 1).
double identity_distilled_fidelity(double f_s, double a);

struct FourToOne {
  double f_out;
  double p_succ;
};

/// Closed-form output of the bilateral-CNOT / Hadamard / CNOT protocol on
/// three Werner pairs, post-selected on both parity checks.
FourToOne four_to_one(double f_in);
/// The same quantities from a six-qubit density-matrix simulation.
FourToOne simulate_four_to_one(double f_in);

double nested_distill(double f_in, int levels);
/// Probability that every block at every level succeeds: 4^(levels-1)
/// first-level blocks, down to one.
double nested_success(double f_in, int levels);

double effective_rate(double p_succ, double delta_d);

/// (m delta f* + eps/4) / (m delta + eps).
double boost_steady_fidelity(double f_star, int m, double delta, double eps);

}  // namespace disq::werner
