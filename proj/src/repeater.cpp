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

#include "disq/repeater.hpp"

#include <cmath>
#include <limits>
#include <sstream>

#include "disq/swap.hpp"
#include "disq/werner.hpp"

namespace disq::repeater {

namespace {

constexpr double kFidelitySlack = 1e-12;

void check_stage(double f, const char* stage) {
  if (!(f >= 0.25 - kFidelitySlack && f <= 1.0 + kFidelitySlack)) {
    std::ostringstream os;
    os << "fidelity " << f << " after " << stage << " left [1/4, 1]";
    throw PipelineError(os.str());
  }
}

// Fixed point of a Werner-preserving generator made of affine fidelity
// relaxations: sum of rate_i (f_i - f) = 0.
double weighted_fixed_point(std::initializer_list<std::pair<double, double>> rate_target) {
  double num = 0.0, den = 0.0;
  for (auto [rate, target] : rate_target) {
    num += rate * target;
    den += rate;
  }
  return num / den;
}

}  // namespace

RepeaterConfig RepeaterConfig::tied(double f_i, double eps, double gamma, int m, int n, int k) {
  RepeaterConfig c;
  c.f_i = f_i;
  c.eps = eps;
  c.gamma = gamma;
  c.m = m;
  c.n = n;
  c.k = k;
  c.tied_rates = true;
  c.delta_d = c.delta_sw = gamma / m;
  c.validate();
  return c;
}

int RepeaterConfig::nesting_levels() const {
  int levels = 0;
  for (int b = n; b > 1; b /= 4) {
    if (b % 4 != 0) throw std::domain_error("block size must be a power of 4");
    ++levels;
  }
  return levels;
}

double RepeaterConfig::length() const { return l0 * std::ldexp(1.0, k); }

void RepeaterConfig::validate() const {
  if (!(f_i > 0.25 && f_i <= 1.0)) throw std::domain_error("f_i must lie in (1/4, 1]");
  for (double v : {eps, gamma, delta_d, delta_sw, l0})
    if (!(v >= 0.0) || !std::isfinite(v)) throw std::domain_error("rates and lengths must be finite and nonnegative");
  if (!(gamma > 0.0)) throw std::domain_error("gamma must be positive");
  if (m < 1 || n < 1 || k < 0) throw std::domain_error("need m >= 1, n >= 1, k >= 0");
  nesting_levels();
  if (tied_rates) {
    const double tied = gamma / m;
    if (std::abs(delta_d - tied) > 1e-12 * tied || std::abs(delta_sw - tied) > 1e-12 * tied)
      throw std::domain_error("tied config requires delta_d = delta_sw = gamma / m");
  }
}

LevelReport level_step(double f_l, const RepeaterConfig& cfg) {
  cfg.validate();
  check_stage(f_l, "input");
  const werner::Protocol proto = werner::nested_four_to_one_protocol(cfg.nesting_levels());
  const double boosted_sw = cfg.m * cfg.delta_sw;
  const double boosted_d = cfg.m * cfg.delta_d;

  LevelReport r{};
  r.f_in = f_l;
  r.f_after_swap = swap::continuous_swap_fidelity({f_l, cfg.gamma, cfg.eps, cfg.delta_sw});
  check_stage(r.f_after_swap, "swap");

  // Swap target: boosted toward f_after_swap, depolarized by eps, reset by distillation.
  r.f_after_swap_boost =
      weighted_fixed_point({{boosted_sw, r.f_after_swap}, {cfg.eps, 0.25}, {cfg.delta_d, 0.25}});
  check_stage(r.f_after_swap_boost, "swap boost");

  // Distillation sources relax toward the reset-free target fidelity and are
  // reset at delta_d; the integral over reset ages accounts for the reset.
  const double f_src = werner::boost_steady_fidelity(r.f_after_swap, cfg.m, cfg.delta_sw, cfg.eps);
  r.f_after_distill = werner::distilled_steady_fidelity(proto.fidelity, f_src, boosted_sw, cfg.eps, cfg.delta_d);
  check_stage(r.f_after_distill, "distillation");
  const double a = cfg.delta_d == 0.0 ? std::numeric_limits<double>::infinity()
                                      : (boosted_sw + cfg.eps) / cfg.delta_d;
  r.success_probability = werner::reinit_average(proto.success, f_src, a);
  r.effective_success_rate = werner::effective_rate(r.success_probability, cfg.delta_d);

  const double boosted = boosted_d * r.success_probability;
  r.f_after_distill_boost = boosted + cfg.eps == 0.0
                                ? r.f_after_distill
                                : weighted_fixed_point({{boosted, r.f_after_distill}, {cfg.eps, 0.25}});
  check_stage(r.f_after_distill_boost, "distillation boost");
  r.pairs_consumed = 2.0 * cfg.m * cfg.m * cfg.n;
  return r;
}

Recursion run(const RepeaterConfig& cfg) {
  cfg.validate();
  Recursion rec{{}, cfg.f_i, 1.0};
  double f = cfg.f_i;
  for (int level = 0; level < cfg.k; ++level) {
    rec.levels.push_back(level_step(f, cfg));
    f = rec.levels.back().f_after_distill_boost;
    rec.total_pairs *= rec.levels.back().pairs_consumed;
  }
  rec.final_fidelity = f;
  return rec;
}

double resources(const RepeaterConfig& cfg) {
  cfg.validate();
  return std::pow(2.0 * cfg.m * cfg.m * cfg.n, cfg.k);
}

double scaling_exponent(int m, int n) {
  if (m < 1 || n < 1) throw std::domain_error("need m >= 1 and n >= 1");
  return std::log2(2.0 * m * m * n);
}

double convergence_time(int k, double t0) {
  if (k < 0 || !(t0 >= 0.0)) throw std::domain_error("need k >= 0 and t0 >= 0");
  return k * t0;
}

int levels_for_distance(double l_over_l0) {
  if (!(l_over_l0 >= 1.0)) throw std::domain_error("distance must be at least one elementary link");
  const double k = std::log2(l_over_l0);
  const double kr = std::round(k);
  if (std::abs(k - kr) > 1e-12) throw std::domain_error("distance must be a power of two");
  return static_cast<int>(kr);
}

bool closes(double target_f, const RepeaterConfig& cfg) {
  return level_step(target_f, cfg).f_after_distill_boost >= target_f;
}

RepeaterConfig plan_search(double target_f, double eps, const SearchSpace& space) {
  if (!(target_f > 0.25 && target_f <= 1.0)) throw std::domain_error("target must lie in (1/4, 1]");
  if (space.m_min < 1 || space.m_max < space.m_min) throw std::domain_error("bad m range");
  bool found = false;
  RepeaterConfig best;
  double best_exponent = std::numeric_limits<double>::infinity();
  for (int n : space.n_values) {
    auto cfg_for = [&](int m) { return RepeaterConfig::tied(target_f, eps, space.gamma, m, n); };
    if (!closes(target_f, cfg_for(space.m_max))) continue;
    int lo = space.m_min, hi = space.m_max;
    if (closes(target_f, cfg_for(lo))) {
      hi = lo;
    } else {
      while (hi - lo > 1) {
        const int mid = lo + (hi - lo) / 2;
        if (closes(target_f, cfg_for(mid))) hi = mid;
        else lo = mid;
      }
    }
    const double e = scaling_exponent(hi, n);
    if (e < best_exponent) {
      best_exponent = e;
      best = cfg_for(hi);
      found = true;
    }
  }
  if (!found) {
    std::ostringstream os;
    os << "no configuration in the search space sustains fidelity " << target_f << " at eps " << eps;
    throw InfeasibleTarget(os.str());
  }
  return best;
}

}  // namespace disq::repeater
