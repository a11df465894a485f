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

#include "disq/liouville.hpp"

#include <cmath>
#include <sstream>

#include <Eigen/SparseLU>
#include <unsupported/Eigen/KroneckerProduct>

namespace disq {

namespace {

constexpr cplx kI{0.0, 1.0};
constexpr double kKrausTolerance = 1e-9;

SparseMatrix sparse_identity(int d) {
  SparseMatrix id(d, d);
  id.setIdentity();
  return id;
}

double kraus_error(const std::vector<SparseMatrix>& kraus, int dim) {
  SparseMatrix s(dim, dim);
  for (const auto& k : kraus) s += SparseMatrix(k.adjoint()) * k;
  s -= sparse_identity(dim);
  double e = 0.0;
  for (int j = 0; j < s.outerSize(); ++j)
    for (SparseMatrix::InnerIterator it(s, j); it; ++it) e = std::max(e, std::abs(it.value()));
  return e;
}

Matrix vec_to_matrix(const Vector& v, int d) {
  return Eigen::Map<const Matrix>(v.data(), d, d);
}

}  // namespace

LindbladTerm LindbladTerm::jump(Operator a, double rate) {
  return LindbladTerm{Jump{std::move(a)}, rate};
}

LindbladTerm LindbladTerm::hamiltonian(Operator h, double rate) {
  return LindbladTerm{Hamiltonian{std::move(h)}, rate};
}

LindbladTerm LindbladTerm::channel(std::vector<SparseMatrix> kraus, double rate) {
  return LindbladTerm{Channel{std::move(kraus)}, rate};
}

LindbladTerm LindbladTerm::channel(const std::vector<Matrix>& kraus, double rate) {
  std::vector<SparseMatrix> sp;
  sp.reserve(kraus.size());
  for (const auto& k : kraus) sp.push_back(k.sparseView(1.0, 0.0));
  return channel(std::move(sp), rate);
}

MasterEquation::MasterEquation(SystemLayout layout, std::vector<LindbladTerm> terms)
    : layout_(std::move(layout)), terms_(std::move(terms)) {
  const int d = layout_.total_dim();
  effective_ = SparseMatrix(d, d);
  for (const auto& term : terms_) {
    if (!(term.rate >= 0.0) || !std::isfinite(term.rate))
      throw std::invalid_argument("Lindblad term rate must be finite and nonnegative");
    Compiled c;
    c.rate = term.rate;
    if (const auto* j = std::get_if<Jump>(&term.kind)) {
      if (!(j->op.layout == layout_)) throw LayoutError("jump operator on a different layout");
      c.kind = Compiled::kJump;
      c.ops = {j->op.data};
      c.ops_adj = {SparseMatrix(j->op.data.adjoint())};
      c.ada = c.ops_adj[0] * c.ops[0];
      effective_ -= (0.5 * term.rate) * c.ada;
    } else if (const auto* h = std::get_if<Hamiltonian>(&term.kind)) {
      if (!(h->op.layout == layout_)) throw LayoutError("Hamiltonian on a different layout");
      c.kind = Compiled::kHamiltonian;
      effective_ += (kI * term.rate) * h->op.data;
    } else {
      const auto& ch = std::get<Channel>(term.kind);
      for (const auto& k : ch.kraus)
        if (k.rows() != d || k.cols() != d) throw LayoutError("Kraus operator size does not match layout");
      if (ch.kraus.empty() || kraus_error(ch.kraus, d) > kKrausTolerance)
        throw std::invalid_argument("Kraus set is not trace preserving");
      c.kind = Compiled::kChannel;
      c.ops = ch.kraus;
      for (const auto& k : ch.kraus) c.ops_adj.push_back(SparseMatrix(k.adjoint()));
      effective_ -= (0.5 * term.rate) * sparse_identity(d);
    }
    compiled_.push_back(std::move(c));
  }
  effective_.prune(cplx(0.0));
}

MasterEquation MasterEquation::with_terms(const std::vector<LindbladTerm>& extra) const {
  auto t = terms_;
  t.insert(t.end(), extra.begin(), extra.end());
  return MasterEquation(layout_, std::move(t));
}

Matrix MasterEquation::apply(const Matrix& rho) const {
  if (rho.rows() != dim() || rho.cols() != dim()) throw LayoutError("state size does not match layout");
  Matrix out = effective_ * rho;
  out += rho * SparseMatrix(effective_.adjoint());
  Matrix tmp;
  for (const auto& c : compiled_) {
    if (c.kind == Compiled::kHamiltonian || c.rate == 0.0) continue;
    for (std::size_t k = 0; k < c.ops.size(); ++k) {
      tmp = c.ops[k] * rho;
      out += c.rate * (tmp * c.ops_adj[k]);
    }
  }
  return out;
}

Matrix apply_generator(const MasterEquation& me, const DensityMatrix& rho) {
  if (!(rho.layout() == me.layout())) throw LayoutError("state layout does not match master equation");
  return me.apply(rho.data());
}

SparseMatrix build_liouvillian_matrix(const MasterEquation& me) {
  const int d = me.dim();
  if (d > kLiouvillianMaxDim) throw LayoutError("dimension exceeds the Liouvillian threshold");
  const SparseMatrix id = sparse_identity(d);
  const SparseMatrix& k = me.effective_;
  SparseMatrix l = Eigen::kroneckerProduct(id, k).eval();
  l += Eigen::kroneckerProduct(SparseMatrix(k.conjugate()), id).eval();
  for (const auto& c : me.compiled_) {
    if (c.kind == MasterEquation::Compiled::kHamiltonian || c.rate == 0.0) continue;
    for (const auto& a : c.ops) l += c.rate * Eigen::kroneckerProduct(SparseMatrix(a.conjugate()), a).eval();
  }
  l.prune(cplx(0.0));
  l.makeCompressed();
  return l;
}

Trajectory evolve(const MasterEquation& me, const DensityMatrix& rho0, double t_end,
                  const EvolveOptions& opts) {
  if (!(t_end >= 0.0)) throw std::invalid_argument("t_end must be nonnegative");
  if (!(rho0.layout() == me.layout())) throw LayoutError("state layout does not match master equation");
  const int d = me.dim();

  std::function<void(double, const Matrix&, Matrix&)> rhs;
  SparseMatrix l;
  if (d <= kLiouvillianMaxDim) {
    l = build_liouvillian_matrix(me);
    rhs = [&l, d](double, const Matrix& y, Matrix& dy) {
      dy.resize(d, d);
      Eigen::Map<Vector>(dy.data(), d * d) = l * Eigen::Map<const Vector>(y.data(), d * d);
    };
  } else {
    rhs = [&me](double, const Matrix& y, Matrix& dy) { dy = me.apply(y); };
  }

  DormandPrince<Matrix> dp(rhs, opts.step);
  if (opts.project_hermitian) dp.set_projection([](Matrix& y) { y = 0.5 * (y + y.adjoint()).eval(); });

  std::vector<double> outs = opts.sample_times;
  if (outs.empty()) outs.push_back(t_end);
  for (std::size_t i = 1; i < outs.size(); ++i)
    if (outs[i] < outs[i - 1]) throw std::invalid_argument("sample times must be sorted");
  if (outs.front() < 0.0 || outs.back() > t_end)
    throw std::invalid_argument("sample times must lie in [0, t_end]");

  Trajectory traj;
  dp.integrate(rho0.data(), 0.0, t_end, outs, [&](double t, const Matrix& y) {
    traj.times.push_back(t);
    traj.states.emplace_back(me.layout(), y);  // validates
  });
  return traj;
}

namespace {

double generator_residual(const MasterEquation& me, const Matrix& rho) {
  return trace_norm(me.apply(rho));
}

Matrix normalize_kernel_vector(const Vector& v, int d) {
  Matrix m = vec_to_matrix(v, d);
  cplx tr = m.trace();
  if (std::abs(tr) > 1e-12) m /= tr;
  return m;
}

// Solver round-off can leave eigenvalues slightly below zero on (nearly) pure
// steady states; those are clipped, larger violations are left to the state check.
constexpr double kClipNegativity = 1e-6;

SteadyState finish(const MasterEquation& me, Matrix rho) {
  rho = 0.5 * (rho + rho.adjoint()).eval();
  rho /= rho.trace().real();
  Eigen::SelfAdjointEigenSolver<Matrix> es(rho);
  double min_ev = es.eigenvalues().minCoeff();
  if (min_ev < 0.0 && min_ev > -kClipNegativity) {
    Eigen::VectorXd ev = es.eigenvalues().cwiseMax(0.0);
    rho = es.eigenvectors() * ev.asDiagonal() * es.eigenvectors().adjoint();
    rho = 0.5 * (rho + rho.adjoint()).eval();
    rho /= rho.trace().real();
  }
  double res = generator_residual(me, rho);
  return SteadyState{DensityMatrix(me.layout(), std::move(rho)), res};
}

SteadyState dense_kernel(const MasterEquation& me, const SparseMatrix& l, const SteadyStateOptions& opts) {
  const int d = me.dim();
  Matrix ld(l);
  Eigen::BDCSVD<Matrix> svd(ld, Eigen::ComputeFullV);
  const auto& s = svd.singularValues();
  const double cut = opts.kernel_tol * std::max(1.0, s(0));
  std::vector<Matrix> basis;
  for (Eigen::Index i = s.size() - 1; i >= 0 && s(i) <= cut; --i)
    basis.push_back(normalize_kernel_vector(svd.matrixV().col(i), d));
  if (basis.empty()) {
    // Fall back to the smallest singular vector; the residual check decides.
    basis.push_back(normalize_kernel_vector(svd.matrixV().col(s.size() - 1), d));
  }
  if (basis.size() > 1) {
    std::ostringstream os;
    os << "steady state is not unique (kernel dimension " << basis.size() << ")";
    throw NonUniqueSteadyState(os.str(), std::move(basis));
  }
  return finish(me, std::move(basis[0]));
}

// Solves L x = 0 with the equation for one diagonal element replaced by a
// normalization w . x = 1.
Vector bordered_solve(const SparseMatrix& l, int d, int diag_row, const Vector& weights, bool* ok) {
  SparseMatrix a = l;
  const int row = diag_row * (d + 1);
  // Zero the row, then write the normalization functional.
  SparseMatrix at = SparseMatrix(a.transpose());
  for (SparseMatrix::InnerIterator it(at, row); it; ++it) it.valueRef() = 0.0;
  a = SparseMatrix(at.transpose());
  a.prune(cplx(0.0));
  std::vector<Eigen::Triplet<cplx>> trip;
  for (int i = 0; i < d; ++i) trip.emplace_back(row, i * (d + 1), weights(i));
  SparseMatrix border(d * d, d * d);
  border.setFromTriplets(trip.begin(), trip.end());
  a += border;
  a.makeCompressed();

  Eigen::SparseLU<SparseMatrix, Eigen::COLAMDOrdering<int>> lu;
  lu.compute(a);
  Vector b = Vector::Zero(d * d);
  b(row) = 1.0;
  if (lu.info() != Eigen::Success) {
    *ok = false;
    return b;
  }
  Vector x = lu.solve(b);
  for (int it = 0; it < 2 && x.allFinite(); ++it) x += lu.solve(b - a * x);
  *ok = lu.info() == Eigen::Success && x.allFinite();
  return x;
}

SteadyState sparse_kernel(const MasterEquation& me, const SparseMatrix& l, const SteadyStateOptions& opts) {
  const int d = me.dim();
  bool ok1 = false, ok2 = false;
  Vector trace_w = Vector::Ones(d);
  Vector x1 = bordered_solve(l, d, 0, trace_w, &ok1);
  // A second normalization functional; both agree iff the kernel is one-dimensional.
  Vector alt_w(d);
  for (int i = 0; i < d; ++i) alt_w(i) = 1.0 + 0.5 * std::sin(1.0 + i);
  Vector x2 = bordered_solve(l, d, d - 1, alt_w, &ok2);
  if (ok1 && ok2) {
    Matrix m1 = normalize_kernel_vector(x1, d);
    Matrix m2 = normalize_kernel_vector(x2, d);
    double diff = (m1 - m2).cwiseAbs().maxCoeff();
    double res = (l * Eigen::Map<const Vector>(m1.data(), d * d)).cwiseAbs().maxCoeff();
    if (diff <= 1e-7 && res <= opts.residual_tol) return finish(me, std::move(m1));
  }
  // Either solve failed or the two normalizations disagree: resolve with the SVD.
  return dense_kernel(me, l, opts);
}

SteadyState long_time(const MasterEquation& me, const SteadyStateOptions& opts) {
  Matrix rho = DensityMatrix::maximally_mixed(me.layout()).data();
  std::function<void(double, const Matrix&, Matrix&)> rhs = [&me](double, const Matrix& y, Matrix& dy) {
    dy = me.apply(y);
  };
  DormandPrince<Matrix> dp(rhs);
  dp.set_projection([](Matrix& y) { y = 0.5 * (y + y.adjoint()).eval(); });
  double t = 0.0, span = 1.0;
  while (t < opts.max_time) {
    rho = dp.integrate(rho, t, t + span);
    t += span;
    span *= 2.0;
    if (generator_residual(me, rho) <= opts.residual_tol) return finish(me, std::move(rho));
  }
  throw IntegrationError("long-time integration did not reach the steady-state residual");
}

}  // namespace

SteadyState steady_state(const MasterEquation& me, const SteadyStateOptions& opts) {
  const int d = me.dim();
  if (d > kLiouvillianMaxDim) return long_time(me, opts);
  SparseMatrix l = build_liouvillian_matrix(me);
  SteadyState ss = d <= kDenseKernelMaxDim ? dense_kernel(me, l, opts) : sparse_kernel(me, l, opts);
  if (ss.residual > opts.residual_tol) {
    std::ostringstream os;
    os << "steady-state residual " << ss.residual << " exceeds tolerance";
    throw IntegrationError(os.str());
  }
  return ss;
}

}  // namespace disq
