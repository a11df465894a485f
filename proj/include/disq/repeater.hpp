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

// Nested continuous repeater: one doubling level is swap, boosted swap target,
// continuous nested 4-to-1 distillation, and a boosted distillation target.
// Everything stays within the Werner family, so a level is a scalar map on
// the link fidelity.

#pragma once

#include <stdexcept>
#include <vector>

namespace disq::repeater {

/// Scaling exponent quoted for m = 50, n = 16 alongside the computed one.
inline constexpr double kReferenceExponent = 16.4;

struct RepeaterConfig {
  double f_i = 0.96;       // per-link input and target fidelity
  double eps = 0.05;       // local depolarizing rate
  double gamma = 70.0;     // boosted entangling rate
  double delta_d = 1.4;    // per-copy distillation rate
  double delta_sw = 1.4;   // per-copy swap rate
  int m = 50;              // boost multiplicity
  int n = 16;              // distillation block size (a power of 4)
  int k = 1;               // number of doublings
  double l0 = 1.0;         // elementary link length
  bool tied_rates = true;  // delta_d = delta_sw = gamma / m

  /// Config with delta_d = delta_sw = gamma / m.
  static RepeaterConfig tied(double f_i, double eps, double gamma, int m, int n, int k = 1);

  /// Number of nested 4-to-1 rounds, log_4(n).
  int nesting_levels() const;
  double length() const;
  void validate() const;
};

struct LevelReport {
  double f_in;
  double f_after_swap;           // continuous swap output
  double f_after_swap_boost;     // swap target held by m sources, with distillation reset
  double f_after_distill;        // continuous nested 4-to-1 output
  double f_after_distill_boost;  // link fidelity handed to the next level
  double success_probability;    // averaged nested success probability
  double effective_success_rate; // delta_d * success_probability
  double pairs_consumed;         // 2 m^2 n
};

/// Raised when an intermediate fidelity leaves [1/4, 1].
class PipelineError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

LevelReport level_step(double f_l, const RepeaterConfig& cfg);

struct Recursion {
  std::vector<LevelReport> levels;
  double final_fidelity;
  double total_pairs;  // product of pairs_consumed over levels
};

/// Iterates level_step k times from f_i.
Recursion run(const RepeaterConfig& cfg);

/// (2 m^2 n)^k.
double resources(const RepeaterConfig& cfg);
/// log2(2 m^2 n).
double scaling_exponent(int m, int n);
/// k t0.
double convergence_time(int k, double t0);
/// Doublings needed for L / L0 (a power of two).
int levels_for_distance(double l_over_l0);

struct SearchSpace {
  std::vector<int> n_values{4, 16, 64};
  int m_min = 1;
  int m_max = 4096;
  double gamma = 70.0;
};

class InfeasibleTarget : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

/// Smallest-exponent tied config whose level step maps target_f to at least
/// target_f. For each n, bisects on m (feasibility is monotone in m at fixed
/// gamma). Throws InfeasibleTarget when no n in the space closes.
RepeaterConfig plan_search(double target_f, double eps, const SearchSpace& space = {});

/// Whether level_step(target_f) >= target_f for cfg.
bool closes(double target_f, const RepeaterConfig& cfg);

}  // namespace disq::repeater
