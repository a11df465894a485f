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

#include "disq/swap.hpp"

#include <cmath>
#include <limits>
#include <sstream>

#include "disq/werner.hpp"

namespace disq::swap {

namespace {

constexpr double kAgreementTolerance = 1e-9;

// Bell measurement on the middle qubits of (a b1 b2 c) with outcome k,
// followed by the Pauli correction on c that restores Omega for perfect
// inputs. Maps the 16-dim source space onto (a, c).
std::vector<Matrix> bell_measurement_ops() {
  SystemLayout src = SystemLayout::qubits({"a", "b1", "b2", "c"});
  Matrix perfect = kron(omega(), omega());
  std::vector<Matrix> ops;
  for (int k = 0; k < 4; ++k) {
    Vector beta = bell_state(k);
    Matrix m = Matrix::Zero(4, 16);
    for (int x = 0; x < 16; ++x) {
      auto d = src.digits(x);
      cplx amp = std::conj(beta(2 * d[1] + d[2]));
      if (amp != cplx(0.0)) m(2 * d[0] + d[3], x) += amp;
    }
    Matrix best;
    double best_f = -1.0;
    for (int c = 0; c < 4; ++c) {
      Matrix mk = kron(pauli(0), pauli(c)) * m;
      Matrix out = mk * perfect * mk.adjoint();
      double f = (omega() * out).trace().real() / out.trace().real();
      if (f > best_f + 1e-12) {
        best_f = f;
        best = mk;
      }
    }
    ops.push_back(best);
  }
  return ops;
}

void check_fidelity(double f) {
  if (!(f >= 0.25 - 1e-12 && f <= 1.0 + 1e-12)) throw std::domain_error("fidelity must lie in [1/4, 1]");
}

}  // namespace

void Params::validate() const {
  check_fidelity(f);
  for (double v : {gamma_sw, eps, delta_sw})
    if (!(v >= 0.0) || !std::isfinite(v)) throw std::domain_error("rates must be finite and nonnegative");
}

double swap_output_fidelity(double f) {
  check_fidelity(f);
  return (1.0 - 2.0 * f + 4.0 * f * f) / 3.0;
}

double exponent(const Params& p) {
  if (p.delta_sw == 0.0) return std::numeric_limits<double>::infinity();
  return (p.gamma_sw + p.eps) / p.delta_sw;
}

double closed_form_fidelity(const Params& p) {
  p.validate();
  const double fs = werner::reduced_fidelity(p.f, p.gamma_sw, p.eps);
  const double a = exponent(p);
  const double c = (4.0 * fs - 1.0) * (4.0 * fs - 1.0) / 12.0;
  const double weight = std::isinf(a) ? 1.0 : 2.0 * a * a / ((a + 1.0) * (2.0 * a + 1.0));
  return 0.25 + c * weight;
}

double quadrature_fidelity(const Params& p) {
  p.validate();
  const double fs = werner::reduced_fidelity(p.f, p.gamma_sw, p.eps);
  return werner::reinit_average(swap_output_fidelity, fs, exponent(p));
}

double continuous_swap_fidelity(const Params& p) {
  double q = quadrature_fidelity(p);
  double c = closed_form_fidelity(p);
  if (std::abs(q - c) > kAgreementTolerance) {
    std::ostringstream os;
    os << "swap fidelity quadrature " << q << " disagrees with closed form " << c;
    throw TranscriptionError(os.str());
  }
  return q;
}

SystemLayout layout() { return SystemLayout::qubits({"a", "b1", "b2", "c", "tA", "tC"}); }

std::vector<SparseMatrix> swap_locc_kraus() {
  auto ms = bell_measurement_ops();
  std::vector<SparseMatrix> out;
  // Full index = 4 * source + target.
  for (const auto& m : ms)
    for (int t = 0; t < 4; ++t)
      for (int u = 0; u < 16; ++u) {
        std::vector<Eigen::Triplet<cplx>> trip;
        for (int x = 0; x < 16; ++x)
          for (int s = 0; s < 4; ++s)
            if (m(s, x) != cplx(0.0)) trip.emplace_back(4 * u + s, 4 * x + t, 0.25 * m(s, x));
        SparseMatrix k(64, 64);
        k.setFromTriplets(trip.begin(), trip.end());
        out.push_back(std::move(k));
      }
  return out;
}

double bell_measurement_fidelity(const Matrix& sources) {
  if (sources.rows() != 16 || sources.cols() != 16) throw LayoutError("expected four source qubits");
  Matrix out = Matrix::Zero(4, 4);
  for (const auto& m : bell_measurement_ops()) out += m * sources * m.adjoint();
  return (omega() * out).trace().real() / out.trace().real();
}

MasterEquation build(const Params& p) {
  p.validate();
  SystemLayout lay = layout();
  std::vector<LindbladTerm> terms;
  for (auto [x, y] : {std::pair{"a", "b1"}, std::pair{"b2", "c"}}) {
    auto e = werner::entangler_terms(p.f, p.gamma_sw, lay, x, y);
    auto n = werner::noise_terms(p.eps, lay, x, y);
    terms.insert(terms.end(), e.begin(), e.end());
    terms.insert(terms.end(), n.begin(), n.end());
  }
  terms.push_back(LindbladTerm::channel(swap_locc_kraus(), p.delta_sw));
  return MasterEquation(std::move(lay), std::move(terms));
}

double simulate_continuous_swap(const Params& p) {
  SteadyState ss = steady_state(build(p));
  return fidelity_with_omega(ss.state, "tA", "tC");
}

}  // namespace disq::swap
