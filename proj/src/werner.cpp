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

#include "disq/werner.hpp"

#include <cmath>
#include <limits>
#include <sstream>

#include <boost/math/quadrature/gauss_kronrod.hpp>
#include <boost/math/quadrature/tanh_sinh.hpp>

namespace disq::werner {

namespace {

constexpr double kPieceAbsTol = 1e-12;
constexpr double kQuadratureAbsTol = 1e-10;

void check_fidelity(double f, const char* what) {
  if (!(f >= 0.25 - 1e-12 && f <= 1.0 + 1e-12)) {
    std::ostringstream os;
    os << what << " must lie in [1/4, 1], got " << f;
    throw std::domain_error(os.str());
  }
}

void check_rate(double r, const char* what) {
  if (!(r >= 0.0)) throw std::domain_error(std::string(what) + " must be nonnegative");
}

Matrix cnot() {
  Matrix c = Matrix::Zero(4, 4);
  c(0, 0) = c(1, 1) = c(2, 3) = c(3, 2) = 1.0;
  return c;
}

Matrix basis_projector(int v) {
  Matrix p = Matrix::Zero(2, 2);
  p(v, v) = 1.0;
  return p;
}

}  // namespace

void Params::validate() const {
  check_fidelity(f, "f");
  check_rate(gamma, "gamma");
  check_rate(eps, "eps");
  check_rate(delta_d, "delta_d");
  if (n < 1 || m < 1) throw std::domain_error("n and m must be at least 1");
}

double reduced_fidelity(double f, double gamma, double eps) {
  check_rate(gamma, "gamma");
  check_rate(eps, "eps");
  if (gamma + eps == 0.0) return f;
  return (gamma * f + 0.25 * eps) / (gamma + eps);
}

std::vector<Matrix> q_jumps() {
  std::vector<Matrix> out;
  Vector psi0 = bell_state(0);
  for (int i = 0; i < 4; ++i) out.push_back(psi0 * bell_state(i).adjoint());
  return out;
}

std::vector<Matrix> w_jumps() {
  std::vector<Matrix> out;
  for (int i = 0; i < 4; ++i)
    for (int j = 0; j < 4; ++j) out.push_back(kron(pauli(i), pauli(j)) / 4.0);
  return out;
}

std::vector<Matrix> depolarizing_jumps() {
  std::vector<Matrix> out;
  for (int i = 0; i < 4; ++i) out.push_back(pauli(i) / 2.0);
  return out;
}

std::vector<LindbladTerm> entangler_terms(double f, double gamma, const SystemLayout& layout,
                                          const std::string& a, const std::string& b) {
  check_fidelity(f, "f");
  check_rate(gamma, "gamma");
  std::vector<LindbladTerm> out;
  const double cq = gamma * (4.0 * f - 1.0) / 3.0;
  const double cw = gamma * 4.0 * (1.0 - f) / 3.0;
  if (cq > 0)
    for (const auto& q : q_jumps()) out.push_back(LindbladTerm::jump(embed(q, layout, {a, b}), cq));
  if (cw > 0)
    for (const auto& w : w_jumps()) out.push_back(LindbladTerm::jump(embed(w, layout, {a, b}), cw));
  return out;
}

std::vector<LindbladTerm> noise_terms(double eps, const SystemLayout& layout, const std::string& a,
                                      const std::string& b) {
  check_rate(eps, "eps");
  std::vector<LindbladTerm> out;
  if (eps == 0.0) return out;
  for (const auto* q : {&a, &b})
    for (const auto& s : depolarizing_jumps())
      out.push_back(LindbladTerm::jump(embed(s, layout, {*q}), 0.5 * eps));
  return out;
}

MasterEquation pair_equation(double f, double gamma, double eps) {
  SystemLayout lay = SystemLayout::qubits({"A", "B"});
  auto terms = entangler_terms(f, gamma, lay, "A", "B");
  auto noise = noise_terms(eps, lay, "A", "B");
  terms.insert(terms.end(), noise.begin(), noise.end());
  return MasterEquation(std::move(lay), std::move(terms));
}

namespace {

Matrix dissipator_sum(const std::vector<Matrix>& jumps, const Matrix& rho) {
  Matrix out = Matrix::Zero(rho.rows(), rho.cols());
  for (const auto& a : jumps) {
    Matrix ada = a.adjoint() * a;
    out += a * rho * a.adjoint() - 0.5 * (ada * rho + rho * ada);
  }
  return out;
}

}  // namespace

Matrix q_map(const Matrix& rho) { return dissipator_sum(q_jumps(), rho); }
Matrix w_map(const Matrix& rho) { return dissipator_sum(w_jumps(), rho); }

Matrix ef_map(const Matrix& rho, double f) {
  return (4.0 * f - 1.0) / 3.0 * q_map(rho) + 4.0 * (1.0 - f) / 3.0 * w_map(rho);
}

std::array<double, 4> g_coefficients(double gamma, double eps, double t) {
  check_rate(gamma, "gamma");
  check_rate(eps, "eps");
  if (t < 0) throw std::domain_error("t must be nonnegative");
  const double gp = gamma + eps;
  const double gpp = gamma + 0.5 * eps;
  const double e1 = std::exp(-gp * t);
  const double e2 = std::exp(-gpp * t);
  double g0 = e1;
  double g1 = 2.0 * (e2 - e1);
  double g2 = gp > 0 ? gamma / gp * (1.0 - e1) : 0.0;
  double g3 = 1.0 - g0 - g1 - g2;
  return {g0, g1, g2, g3};
}

std::array<double, 4> g_rhs(const std::array<double, 4>& g, double gamma, double eps) {
  const double gp = gamma + eps;
  const double gpp = gamma + 0.5 * eps;
  return {-gp * g[0], eps * g[0] - gpp * g[1], gamma * (g[0] + g[1] + g[3]) - eps * g[2],
          -gamma * g[3] + 0.5 * eps * g[1] + eps * g[2]};
}

DensityMatrix exact_evolve(const DensityMatrix& rho0, double f, double gamma, double eps, double t) {
  const auto& lay = rho0.layout();
  if (lay.size() != 2 || lay.total_dim() != 4) throw LayoutError("exact_evolve needs a qubit pair");
  check_fidelity(f, "f");
  const auto labels = lay.labels();
  Matrix ra = partial_trace(rho0.data(), lay, {labels[0]});
  Matrix rb = partial_trace(rho0.data(), lay, {labels[1]});
  Matrix half = Matrix::Identity(2, 2) / 2.0;
  Matrix rho1 = 0.5 * (kron(ra, half) + kron(half, rb));
  Matrix rho2 = werner_state(f).data();
  Matrix rho3 = Matrix::Identity(4, 4) / 4.0;
  auto g = g_coefficients(gamma, eps, t);
  Matrix rho = g[0] * rho0.data() + g[1] * rho1 + g[2] * rho2 + g[3] * rho3;
  return DensityMatrix(lay, std::move(rho));
}

double reinit_fidelity(double f_s, double a, double x) {
  if (x < 0.0 || x > 1.0) throw std::domain_error("x must lie in [0, 1]");
  return f_s + (0.25 - f_s) * std::pow(x, a);
}

double reinit_average(const std::function<double(double)>& g, double f_s, double a) {
  if (!(a >= 0.0)) throw std::domain_error("exponent must be nonnegative");
  if (std::isinf(a)) return g(f_s);
  if (a == 0.0) return g(0.25);
  std::function<double(double)> integrand;
  std::vector<double> cuts{0.0};
  if (a < 1.0) {
    // x = u^p keeps the integrand smooth at the origin.
    const double p = 1.0 / a;
    integrand = [&, p](double u) {
      if (u <= 0.0) return 0.0;
      return g(f_s + (0.25 - f_s) * u) * p * std::pow(u, p - 1.0);
    };
  } else {
    // s = 1 - x: for large a the integrand varies only within ~1/a of s = 0.
    integrand = [&](double s) {
      const double xa = s >= 1.0 ? 0.0 : std::exp(a * std::log1p(-s));
      return g(f_s + (0.25 - f_s) * xa);
    };
    for (double c : {1.0, 16.0, 256.0})
      if (c < a) cuts.push_back(c / a);
  }
  cuts.push_back(1.0);
  // The piece holding x = 0 carries a fractional power of the variable
  // unless a is an integer; double-exponential quadrature absorbs it.
  const std::size_t singular_piece = a < 1.0 ? 0 : cuts.size() - 2;
  double v = 0.0, err = 0.0;
  for (std::size_t i = 0; i + 1 < cuts.size(); ++i) {
    double piece_err = 0.0, l1 = 0.0;
    if (i == singular_piece && a != std::floor(a)) {
      boost::math::quadrature::tanh_sinh<double> ts(15);
      v += ts.integrate(integrand, cuts[i], cuts[i + 1], 1e-13, &piece_err, &l1);
      err += piece_err;
      continue;
    }
    using Rule = boost::math::quadrature::gauss_kronrod<double, 31>;
    // Relative tolerance chosen so each piece meets an absolute target.
    Rule::integrate(integrand, cuts[i], cuts[i + 1], 0, 0.0, &piece_err, &l1);
    const double tol = std::clamp(kPieceAbsTol / std::max(l1, 1e-300), 1e-13, 1e-3);
    v += Rule::integrate(integrand, cuts[i], cuts[i + 1], 15, tol, &piece_err);
    err += piece_err;
  }
  if (!std::isfinite(v) || err > kQuadratureAbsTol) {
    std::ostringstream os;
    os << "quadrature did not converge (error estimate " << err << ")";
    throw QuadratureError(os.str());
  }
  return v;
}

Protocol identity_protocol() {
  return {"identity", 1, [](double f) { return f; }, [](double) { return 1.0; }};
}

Protocol four_to_one_protocol() {
  return {"four_to_one", 4, [](double f) { return four_to_one(f).f_out; },
          [](double f) { return four_to_one(f).p_succ; }};
}

Protocol nested_four_to_one_protocol(int levels) {
  if (levels < 0) throw std::domain_error("levels must be nonnegative");
  int block = 1;
  for (int i = 0; i < levels; ++i) block *= 4;
  return {"nested_four_to_one_" + std::to_string(levels), block,
          [levels](double f) { return nested_distill(f, levels); },
          [levels](double f) { return nested_success(f, levels); }};
}

double distilled_steady_fidelity(const FidelityMap& f_d, double f_s, double gamma, double eps,
                                 double delta_d) {
  check_fidelity(f_s, "f_s");
  check_rate(gamma, "gamma");
  check_rate(eps, "eps");
  check_rate(delta_d, "delta_d");
  double a = delta_d == 0.0 ? std::numeric_limits<double>::infinity() : (gamma + eps) / delta_d;
  return reinit_average(f_d, f_s, a);
}

double identity_distilled_fidelity(double f_s, double a) {
  if (std::isinf(a)) return f_s;
  return f_s - (f_s - 0.25) / (a + 1.0);
}

FourToOne four_to_one(double f_in) {
  check_fidelity(f_in, "f_in");
  const double g = (4.0 * f_in - 1.0) / 3.0;
  const double p = (1.0 + g * g + 2.0 * g * g * g) / 4.0;
  return {(1.0 + g) * (1.0 + 7.0 * g * g) / (16.0 * p), p};
}

FourToOne simulate_four_to_one(double f_in) {
  check_fidelity(f_in, "f_in");
  SystemLayout lay = SystemLayout::qubits({"A1", "B1", "A2", "B2", "A3", "B3"});
  Matrix w = werner_state(f_in).data();
  Matrix rho = kron({w, w, w});

  auto op = [&](const Matrix& m, const std::vector<std::string>& t) { return embed(m, lay, t).dense(); };
  Matrix c12 = op(cnot(), {"A1", "A2"}) * op(cnot(), {"B1", "B2"});
  Matrix hh = op(kron(pauli(1) + pauli(3), pauli(1) + pauli(3)) / 2.0, {"A1", "B1"});
  Matrix c13 = op(cnot(), {"A1", "A3"}) * op(cnot(), {"B1", "B3"});

  rho = c12 * rho * c12.adjoint();
  Matrix kept = Matrix::Zero(rho.rows(), rho.cols());
  for (int v2 = 0; v2 < 2; ++v2) {
    Matrix p2 = op(kron(basis_projector(v2), basis_projector(v2)), {"A2", "B2"});
    Matrix r = hh * (p2 * rho * p2) * hh.adjoint();
    r = c13 * r * c13.adjoint();
    for (int v3 = 0; v3 < 2; ++v3) {
      Matrix p3 = op(kron(basis_projector(v3), basis_projector(v3)), {"A3", "B3"});
      kept += p3 * r * p3;
    }
  }
  const double p = kept.trace().real();
  Matrix out = partial_trace(kept, lay, {"A1", "B1"}) / p;
  return {(omega() * out).trace().real(), p};
}

double nested_distill(double f_in, int levels) {
  check_fidelity(f_in, "f_in");
  if (levels < 0) throw std::domain_error("levels must be nonnegative");
  double f = f_in;
  for (int i = 0; i < levels; ++i) f = four_to_one(f).f_out;
  return f;
}

double nested_success(double f_in, int levels) {
  check_fidelity(f_in, "f_in");
  if (levels < 0) throw std::domain_error("levels must be nonnegative");
  double f = f_in, p = 1.0;
  // Level i runs 4^(levels-1-i) blocks in parallel; all must succeed.
  for (int i = 0; i < levels; ++i) {
    auto r = four_to_one(f);
    p *= std::pow(r.p_succ, std::pow(4.0, levels - 1 - i));
    f = r.f_out;
  }
  return p;
}

double effective_rate(double p_succ, double delta_d) {
  if (!(p_succ >= 0.0 && p_succ <= 1.0)) throw std::domain_error("success probability must lie in [0, 1]");
  check_rate(delta_d, "delta_d");
  return delta_d * p_succ;
}

double boost_steady_fidelity(double f_star, int m, double delta, double eps) {
  check_fidelity(f_star, "f*");
  if (m < 1) throw std::domain_error("m must be at least 1");
  check_rate(delta, "delta");
  check_rate(eps, "eps");
  const double md = m * delta;
  if (md + eps == 0.0) return f_star;
  return (md * f_star + 0.25 * eps) / (md + eps);
}

}  // namespace disq::werner
