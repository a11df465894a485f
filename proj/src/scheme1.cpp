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

#include "disq/scheme1.hpp"

#include <cmath>
#include <stdexcept>

namespace disq::scheme1 {

namespace {

// One-excitation projector on two qubits: |01><01| + |10><10|.
Matrix one_excitation_projector() {
  Matrix p = Matrix::Zero(4, 4);
  p(1, 1) = 1.0;
  p(2, 2) = 1.0;
  return p;
}

}  // namespace

void Params::validate() const {
  if (!std::isfinite(r)) throw std::invalid_argument("r must be finite");
  for (double v : {gamma, delta_f, eps_c, eps_h, eps_d})
    if (!(v >= 0.0) || !std::isfinite(v)) throw std::invalid_argument("rates must be finite and nonnegative");
  if (twirled && variant != Variant::kLocc)
    throw std::invalid_argument("the twirled channel exists only for the LOCC variant");
}

SystemLayout layout() {
  return SystemLayout::qubits({kSource1.alice, kSource1.bob, kSource2.alice, kSource2.bob,
                               kTarget.alice, kTarget.bob});
}

Vector dark_state(double r) {
  double lam = std::tanh(r);
  Vector v = Vector::Zero(4);
  v(0) = 1.0;
  v(3) = -lam;
  return v / std::sqrt(1.0 + lam * lam);
}

std::array<Operator, 2> entangling_jumps(double r, const SystemLayout& layout, const Pair& pair) {
  const double c = std::cosh(r), s = std::sinh(r);
  Matrix id = pauli(0);
  Matrix a = c * kron(sigma_minus(), id) + s * kron(id, sigma_plus());
  Matrix b = c * kron(id, sigma_minus()) + s * kron(sigma_plus(), id);
  return {embed(a, layout, {pair.alice, pair.bob}), embed(b, layout, {pair.alice, pair.bob})};
}

std::vector<LindbladTerm> entangling_terms(double r, double gamma, const SystemLayout& layout,
                                           const Pair& pair) {
  auto [a, b] = entangling_jumps(r, layout, pair);
  return {LindbladTerm::jump(std::move(a), gamma), LindbladTerm::jump(std::move(b), gamma)};
}

std::vector<LindbladTerm> noise_terms(double eps_c, double eps_h, double eps_d,
                                      const SystemLayout& layout, const Pair& pair,
                                      bool dephase_alice, bool dephase_bob) {
  for (double v : {eps_c, eps_h, eps_d})
    if (!(v >= 0.0)) throw std::invalid_argument("noise rates must be nonnegative");
  std::vector<LindbladTerm> out;
  for (const auto* q : {&pair.alice, &pair.bob}) {
    if (eps_c > 0) out.push_back(LindbladTerm::jump(embed(sigma_minus(), layout, {*q}), eps_c));
    if (eps_h > 0) out.push_back(LindbladTerm::jump(embed(sigma_plus(), layout, {*q}), eps_h));
    bool dephase = q == &pair.alice ? dephase_alice : dephase_bob;
    if (eps_d > 0 && dephase)
      out.push_back(LindbladTerm::jump(embed(excited_projector(), layout, {*q}), eps_d));
  }
  return out;
}

Matrix flip_local() {
  // Basis index = 4 t + 2 s1 + s2. Encoded source |0> = |01>, |1> = |10>.
  const int enc[2] = {1, 2};
  Matrix f = Matrix::Zero(8, 8);
  for (int i = 0; i < 2; ++i)
    for (int j = 0; j < 2; ++j) f(4 * j + enc[i], 4 * i + enc[j]) = 1.0;
  return f;
}

Operator flip_hamiltonian(const SystemLayout& layout, const std::string& s1, const std::string& s2,
                          const std::string& t) {
  return embed(flip_local(), layout, {t, s1, s2});
}

std::vector<Matrix> twirl_kraus() {
  std::vector<Matrix> k;
  for (int i = 0; i < 4; ++i)
    for (int j = 0; j < 4; ++j) k.push_back(kron(pauli(i), pauli(j)) / 4.0);
  return k;
}

std::vector<Matrix> werner_twirl_kraus() {
  const cplx i1{0.0, 1.0};
  Matrix rot = (pauli(0) - i1 * pauli(1) - i1 * pauli(2) - i1 * pauli(3)) / 2.0;
  std::vector<Matrix> cyc = {pauli(0), rot, rot * rot};
  std::vector<Matrix> k;
  for (int p = 0; p < 4; ++p)
    for (const auto& c : cyc) {
      Matrix u = pauli(p) * c;
      k.push_back(kron(u, u.conjugate()) / std::sqrt(12.0));
    }
  return k;
}

std::vector<Matrix> locc_map_kraus(bool twirled, const SystemLayout& lay) {
  Matrix fa = flip_hamiltonian(lay, kSource1.alice, kSource2.alice, kTarget.alice).dense();
  Matrix fb = flip_hamiltonian(lay, kSource1.bob, kSource2.bob, kTarget.bob).dense();
  Matrix pa = embed(one_excitation_projector(), lay, {kSource1.alice, kSource2.alice}).dense();
  Matrix pb = embed(one_excitation_projector(), lay, {kSource1.bob, kSource2.bob}).dense();
  const int d = lay.total_dim();
  Matrix id = Matrix::Identity(d, d);
  Matrix qa = id - pa, qb = id - pb;

  std::vector<Matrix> k;
  Matrix ff = fa * fb;
  if (twirled) {
    for (int i = 0; i < 4; ++i)
      for (int j = 0; j < 4; ++j) {
        Matrix u = embed(kron(pauli(i), pauli(j)), lay, {kTarget.alice, kTarget.bob}).dense();
        k.push_back(ff * u / 4.0);
      }
  } else {
    k.push_back(ff);
  }
  k.push_back(qa * pb);
  k.push_back(pa * qb);
  k.push_back(qa * qb);
  return k;
}

namespace {

std::vector<LindbladTerm> source_terms(const Params& p, const SystemLayout& lay) {
  std::vector<LindbladTerm> t;
  for (const Pair* pair : {&kSource1, &kSource2}) {
    auto e = entangling_terms(p.r, p.gamma, lay, *pair);
    t.insert(t.end(), e.begin(), e.end());
    bool da = true, db = true;
    if (p.asymmetric_dephasing) {
      da = pair == &kSource1;
      db = pair == &kSource2;
    }
    auto n = noise_terms(p.eps_c, p.eps_h, p.eps_d, lay, *pair, da, db);
    t.insert(t.end(), n.begin(), n.end());
  }
  return t;
}

}  // namespace

MasterEquation build_no_comm(const Params& p) {
  p.validate();
  SystemLayout lay = layout();
  auto terms = source_terms(p, lay);
  Operator fa = flip_hamiltonian(lay, kSource1.alice, kSource2.alice, kTarget.alice);
  Operator fb = flip_hamiltonian(lay, kSource1.bob, kSource2.bob, kTarget.bob);
  Operator h{lay, fa.data - fb.data, {kSource1.alice, kSource2.alice, kTarget.alice, kSource1.bob,
                                      kSource2.bob, kTarget.bob}};
  terms.push_back(LindbladTerm::hamiltonian(std::move(h), p.delta_f));
  return MasterEquation(std::move(lay), std::move(terms));
}

MasterEquation build_locc(const Params& p) {
  p.validate();
  SystemLayout lay = layout();
  auto terms = source_terms(p, lay);
  terms.push_back(LindbladTerm::channel(locc_map_kraus(p.twirled, lay), p.delta_f));
  return MasterEquation(std::move(lay), std::move(terms));
}

MasterEquation build(const Params& p) {
  return p.variant == Variant::kNoComm ? build_no_comm(p) : build_locc(p);
}

Observables observables(const DensityMatrix& rho) {
  Observables o;
  o.eof_target = eof(partial_trace(rho, {kTarget.alice, kTarget.bob}));
  DensityMatrix s1 = partial_trace(rho, {kSource1.alice, kSource1.bob});
  o.eof_s1 = eof(s1);
  o.entropy_s1 = entropy(s1);
  DensityMatrix src = partial_trace(rho, {kSource1.alice, kSource2.alice, kSource1.bob, kSource2.bob});
  o.logneg_source = log_negativity(src, {kSource1.bob, kSource2.bob});
  return o;
}

std::vector<ScanRow> scan(const std::vector<Params>& grid) {
  if (grid.empty()) throw std::invalid_argument("scan grid is empty");
  std::vector<ScanRow> rows;
  rows.reserve(grid.size());
  for (const auto& p : grid) {
    ScanRow row{p, std::nullopt, {}};
    try {
      SteadyState ss = steady_state(build(p));
      Observables o = observables(ss.state);
      o.ss_residual = ss.residual;
      row.obs = o;
    } catch (const NonUniqueSteadyState& e) {
      row.error = e.what();
    }
    rows.push_back(std::move(row));
  }
  return rows;
}

std::vector<Params> sweep(const Params& base, const std::string& name, const std::vector<double>& values) {
  std::vector<Params> out;
  for (double v : values) {
    Params p = base;
    if (name == "r") p.r = v;
    else if (name == "gamma") p.gamma = v;
    else if (name == "delta_f") p.delta_f = v;
    else if (name == "eps_c") p.eps_c = v;
    else if (name == "eps_h") p.eps_h = v;
    else if (name == "eps_d") p.eps_d = v;
    else if (name == "eps_n") p.eps_c = p.eps_h = p.eps_d = v;
    else throw std::invalid_argument("unknown sweep parameter '" + name + "'");
    out.push_back(p);
  }
  return out;
}

}  // namespace disq::scheme1
