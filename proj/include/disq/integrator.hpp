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

#include <algorithm>
#include <cmath>
#include <functional>
#include <limits>
#include <stdexcept>
#include <string>
#include <vector>

namespace disq {

class IntegrationError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

struct StepControl {
  double rtol = 1e-9;
  double atol = 1e-12;
  double initial_step = 0.0;  // 0 picks one from the derivative norm
  double min_step = 1e-14;    // relative to the integration span
  long max_steps = 10'000'000;
};

/// Dormand-Prince 5(4) with FSAL and local error control on the max norm.
///
/// State is any Eigen dense object (vector or matrix). `rhs(t, y, dydt)` fills
/// dydt. `project(y)` runs after each accepted step. `observe(t, y)` is called
/// at every time in `outputs` (sorted, within [t0, t1]); the step size is
/// clipped to land on them exactly.
template <class State>
class DormandPrince {
 public:
  using Rhs = std::function<void(double, const State&, State&)>;
  using Hook = std::function<void(State&)>;
  using Observer = std::function<void(double, const State&)>;

  DormandPrince(Rhs rhs, StepControl ctl = {}) : rhs_(std::move(rhs)), ctl_(ctl) {}

  void set_projection(Hook project) { project_ = std::move(project); }

  long accepted_steps() const { return accepted_; }
  long rejected_steps() const { return rejected_; }

  State integrate(State y, double t0, double t1, const std::vector<double>& outputs = {},
                  const Observer& observe = {}) {
    if (t1 < t0) throw IntegrationError("integration end precedes start");
    accepted_ = rejected_ = 0;
    std::size_t next_out = 0;
    while (next_out < outputs.size() && outputs[next_out] <= t0) {
      if (observe) observe(t0, y);
      ++next_out;
    }
    if (t1 == t0) return y;

    const double span = t1 - t0;
    State k1, k2, k3, k4, k5, k6, k7, ytmp, ynew, err;
    rhs_(t0, y, k1);
    double h = ctl_.initial_step > 0 ? ctl_.initial_step : initial_step(y, k1, span);
    double t = t0;
    const double hmin = ctl_.min_step * span;

    while (t < t1) {
      if (accepted_ + rejected_ > ctl_.max_steps) throw IntegrationError("too many steps");
      double target = next_out < outputs.size() ? std::min(outputs[next_out], t1) : t1;
      bool clipped = false;
      if (t + h >= target) {
        h = target - t;
        clipped = true;
      }

      ytmp = y + h * (a21 * k1);
      rhs_(t + c2 * h, ytmp, k2);
      ytmp = y + h * (a31 * k1 + a32 * k2);
      rhs_(t + c3 * h, ytmp, k3);
      ytmp = y + h * (a41 * k1 + a42 * k2 + a43 * k3);
      rhs_(t + c4 * h, ytmp, k4);
      ytmp = y + h * (a51 * k1 + a52 * k2 + a53 * k3 + a54 * k4);
      rhs_(t + c5 * h, ytmp, k5);
      ytmp = y + h * (a61 * k1 + a62 * k2 + a63 * k3 + a64 * k4 + a65 * k5);
      rhs_(t + h, ytmp, k6);
      ynew = y + h * (a71 * k1 + a73 * k3 + a74 * k4 + a75 * k5 + a76 * k6);
      rhs_(t + h, ynew, k7);
      err = h * (e1 * k1 + e3 * k3 + e4 * k4 + e5 * k5 + e6 * k6 + e7 * k7);

      double scale_num = 0.0;
      {
        auto sc = (ctl_.atol + ctl_.rtol * y.cwiseAbs().cwiseMax(ynew.cwiseAbs()).array());
        scale_num = (err.cwiseAbs().array() / sc).maxCoeff();
      }
      if (!std::isfinite(scale_num)) scale_num = std::numeric_limits<double>::infinity();

      if (scale_num <= 1.0) {
        t = clipped ? target : t + h;
        y = std::move(ynew);
        if (project_) {
          project_(y);
          rhs_(t, y, k1);
        } else {
          k1 = std::move(k7);
        }
        ++accepted_;
        while (next_out < outputs.size() && outputs[next_out] <= t) {
          if (observe) observe(outputs[next_out], y);
          ++next_out;
        }
        double fac = scale_num == 0.0 ? 5.0 : std::clamp(0.9 * std::pow(scale_num, -0.2), 0.2, 5.0);
        h *= fac;
      } else {
        ++rejected_;
        h *= std::max(0.1, 0.9 * std::pow(scale_num, -0.2));
        if (h < hmin) throw IntegrationError("step size underflow");
      }
    }
    return y;
  }

 private:
  double initial_step(const State& y, const State& f0, double span) const {
    double d0 = y.cwiseAbs().maxCoeff();
    double d1 = f0.cwiseAbs().maxCoeff();
    double h = (d0 < 1e-5 || d1 < 1e-5) ? 1e-6 : 0.01 * d0 / d1;
    return std::min(h, span);
  }

  static constexpr double c2 = 1.0 / 5, c3 = 3.0 / 10, c4 = 4.0 / 5, c5 = 8.0 / 9;
  static constexpr double a21 = 1.0 / 5;
  static constexpr double a31 = 3.0 / 40, a32 = 9.0 / 40;
  static constexpr double a41 = 44.0 / 45, a42 = -56.0 / 15, a43 = 32.0 / 9;
  static constexpr double a51 = 19372.0 / 6561, a52 = -25360.0 / 2187, a53 = 64448.0 / 6561,
                          a54 = -212.0 / 729;
  static constexpr double a61 = 9017.0 / 3168, a62 = -355.0 / 33, a63 = 46732.0 / 5247,
                          a64 = 49.0 / 176, a65 = -5103.0 / 18656;
  static constexpr double a71 = 35.0 / 384, a73 = 500.0 / 1113, a74 = 125.0 / 192,
                          a75 = -2187.0 / 6784, a76 = 11.0 / 84;
  // Difference between the 5th- and 4th-order weights.
  static constexpr double e1 = 71.0 / 57600, e3 = -71.0 / 16695, e4 = 71.0 / 1920,
                          e5 = -17253.0 / 339200, e6 = 22.0 / 525, e7 = -1.0 / 40;

  Rhs rhs_;
  StepControl ctl_;
  Hook project_;
  long accepted_ = 0;
  long rejected_ = 0;
};

}  // namespace disq
