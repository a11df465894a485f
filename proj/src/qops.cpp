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

#include "disq/qops.hpp"

#include <algorithm>
#include <cmath>
#include <set>
#include <sstream>

namespace disq {

namespace {

constexpr cplx kI{0.0, 1.0};

// Per-factor strides (first factor most significant).
std::vector<int> strides_of(const SystemLayout& layout) {
  const auto& f = layout.factors();
  std::vector<int> s(f.size(), 1);
  for (int i = static_cast<int>(f.size()) - 2; i >= 0; --i) s[i] = s[i + 1] * f[i + 1].dim;
  return s;
}

std::vector<std::size_t> indices_of(const SystemLayout& layout,
                                    const std::vector<std::string>& labels) {
  std::vector<std::size_t> out;
  std::set<std::string> seen;
  for (const auto& l : labels) {
    if (!seen.insert(l).second) throw LayoutError("duplicate label '" + l + "'");
    out.push_back(layout.index_of(l));
  }
  return out;
}

Eigen::VectorXd hermitian_eigenvalues(const Matrix& m) {
  Eigen::SelfAdjointEigenSolver<Matrix> es(m, Eigen::EigenvaluesOnly);
  return es.eigenvalues();
}

void require_state(const DensityMatrix& rho) {
  auto v = state_violation(rho.data());
  if (!v.empty()) throw InvariantViolation(v);
}

}  // namespace

// ---------------------------------------------------------------------------
// SystemLayout

SystemLayout::SystemLayout(std::vector<Factor> factors) : factors_(std::move(factors)) {
  std::set<std::string> seen;
  long long total = 1;
  for (const auto& f : factors_) {
    if (f.dim < 1) throw LayoutError("factor '" + f.label + "' has non-positive dimension");
    if (!seen.insert(f.label).second) throw LayoutError("duplicate label '" + f.label + "'");
    total *= f.dim;
    if (total > (1LL << 30)) throw LayoutError("layout dimension overflow");
  }
  total_dim_ = static_cast<int>(total);
}

SystemLayout SystemLayout::qubits(const std::vector<std::string>& labels) {
  std::vector<Factor> f;
  f.reserve(labels.size());
  for (const auto& l : labels) f.push_back({l, 2});
  return SystemLayout(std::move(f));
}

bool SystemLayout::contains(std::string_view label) const {
  return std::any_of(factors_.begin(), factors_.end(),
                     [&](const Factor& f) { return f.label == label; });
}

std::size_t SystemLayout::index_of(std::string_view label) const {
  for (std::size_t i = 0; i < factors_.size(); ++i)
    if (factors_[i].label == label) return i;
  throw LayoutError("unknown label '" + std::string(label) + "'");
}

std::vector<std::string> SystemLayout::labels() const {
  std::vector<std::string> out;
  for (const auto& f : factors_) out.push_back(f.label);
  return out;
}

SystemLayout SystemLayout::select(const std::vector<std::string>& labels) const {
  std::vector<Factor> f;
  for (auto i : indices_of(*this, labels)) f.push_back(factors_[i]);
  return SystemLayout(std::move(f));
}

std::vector<int> SystemLayout::digits(int index) const {
  std::vector<int> d(factors_.size());
  for (int i = static_cast<int>(factors_.size()) - 1; i >= 0; --i) {
    d[i] = index % factors_[i].dim;
    index /= factors_[i].dim;
  }
  return d;
}

int SystemLayout::flat_index(std::span<const int> digits) const {
  int idx = 0;
  for (std::size_t i = 0; i < factors_.size(); ++i) idx = idx * factors_[i].dim + digits[i];
  return idx;
}

// ---------------------------------------------------------------------------
// DensityMatrix

std::string state_violation(const Matrix& rho, double tol) {
  if (rho.rows() != rho.cols()) return "matrix is not square";
  if (!rho.allFinite()) return "matrix has non-finite entries";
  double herm = (rho - rho.adjoint()).cwiseAbs().maxCoeff();
  if (herm > tol) {
    std::ostringstream os;
    os << "not Hermitian (max deviation " << herm << ")";
    return os.str();
  }
  double tr_err = std::abs(rho.trace() - cplx(1.0));
  if (tr_err > tol) {
    std::ostringstream os;
    os << "trace differs from 1 by " << tr_err;
    return os.str();
  }
  Matrix h = 0.5 * (rho + rho.adjoint());
  double min_ev = hermitian_eigenvalues(h).minCoeff();
  if (min_ev < -tol) {
    std::ostringstream os;
    os << "negative eigenvalue " << min_ev;
    return os.str();
  }
  return {};
}

DensityMatrix::DensityMatrix(SystemLayout layout, Matrix data)
    : layout_(std::move(layout)), data_(std::move(data)) {
  if (data_.rows() != layout_.total_dim() || data_.cols() != layout_.total_dim())
    throw LayoutError("density matrix size does not match layout");
  auto v = state_violation(data_);
  if (!v.empty()) throw InvariantViolation(v);
}

DensityMatrix::DensityMatrix(SystemLayout layout, Matrix data, NoCheck)
    : layout_(std::move(layout)), data_(std::move(data)) {
  if (data_.rows() != layout_.total_dim() || data_.cols() != layout_.total_dim())
    throw LayoutError("density matrix size does not match layout");
}

DensityMatrix DensityMatrix::unchecked(SystemLayout layout, Matrix data) {
  return DensityMatrix(std::move(layout), std::move(data), NoCheck{});
}

DensityMatrix DensityMatrix::maximally_mixed(SystemLayout layout) {
  int d = layout.total_dim();
  return DensityMatrix(std::move(layout), Matrix::Identity(d, d) / double(d), NoCheck{});
}

DensityMatrix DensityMatrix::pure(SystemLayout layout, const Vector& psi) {
  if (psi.size() != layout.total_dim()) throw LayoutError("state vector size does not match layout");
  double n = psi.norm();
  if (n == 0.0) throw InvariantViolation("zero state vector");
  Vector v = psi / n;
  return DensityMatrix(std::move(layout), v * v.adjoint(), NoCheck{});
}

// ---------------------------------------------------------------------------
// Building blocks

Matrix pauli(int i) {
  Matrix m(2, 2);
  switch (i) {
    case 0: m << 1, 0, 0, 1; break;
    case 1: m << 0, 1, 1, 0; break;
    case 2: m << 0, -kI, kI, 0; break;
    case 3: m << 1, 0, 0, -1; break;
    default: throw std::invalid_argument("pauli index must be 0..3");
  }
  return m;
}

Matrix sigma_minus() {
  Matrix m = Matrix::Zero(2, 2);
  m(0, 1) = 1.0;
  return m;
}

Matrix sigma_plus() {
  Matrix m = Matrix::Zero(2, 2);
  m(1, 0) = 1.0;
  return m;
}

Matrix excited_projector() {
  Matrix m = Matrix::Zero(2, 2);
  m(1, 1) = 1.0;
  return m;
}

Vector bell_state(int i) {
  const double s = 1.0 / std::sqrt(2.0);
  Vector v = Vector::Zero(4);
  switch (i) {
    case 0: v(0) = s; v(3) = s; break;
    case 1: v(1) = s; v(2) = s; break;
    case 2: v(1) = s; v(2) = -s; break;
    case 3: v(0) = s; v(3) = -s; break;
    default: throw std::invalid_argument("bell index must be 0..3");
  }
  return v;
}

Matrix omega() {
  Vector v = bell_state(0);
  return v * v.adjoint();
}

Matrix kron(const Matrix& a, const Matrix& b) {
  Matrix out(a.rows() * b.rows(), a.cols() * b.cols());
  for (Eigen::Index i = 0; i < a.rows(); ++i)
    for (Eigen::Index j = 0; j < a.cols(); ++j)
      out.block(i * b.rows(), j * b.cols(), b.rows(), b.cols()) = a(i, j) * b;
  return out;
}

Matrix kron(std::initializer_list<Matrix> factors) {
  Matrix out = Matrix::Identity(1, 1);
  for (const auto& f : factors) out = kron(out, f);
  return out;
}

// ---------------------------------------------------------------------------
// Embedding and partial operations

Operator embed(const Matrix& local, const SystemLayout& layout,
               const std::vector<std::string>& targets) {
  auto tidx = indices_of(layout, targets);
  const auto& fac = layout.factors();
  int dloc = 1;
  for (auto i : tidx) dloc *= fac[i].dim;
  if (local.rows() != dloc || local.cols() != dloc)
    throw LayoutError("local operator dimension does not match targets");

  auto strides = strides_of(layout);
  // Local index -> offset in the full index (target digits only).
  std::vector<int> local_offset(dloc, 0);
  for (int l = 0; l < dloc; ++l) {
    int rem = l, off = 0;
    for (int t = static_cast<int>(tidx.size()) - 1; t >= 0; --t) {
      int d = fac[tidx[t]].dim;
      off += (rem % d) * strides[tidx[t]];
      rem /= d;
    }
    local_offset[l] = off;
  }

  const int dim = layout.total_dim();
  std::vector<Eigen::Triplet<cplx>> trip;
  std::size_t nnz_local = 0;
  for (Eigen::Index j = 0; j < local.cols(); ++j)
    for (Eigen::Index i = 0; i < local.rows(); ++i) nnz_local += local(i, j) != cplx(0.0);
  trip.reserve(static_cast<std::size_t>(dim / dloc) * nnz_local);
  std::vector<bool> is_target(fac.size(), false);
  for (auto i : tidx) is_target[i] = true;

  std::vector<int> digits(fac.size(), 0);
  for (int col = 0; col < dim; ++col) {
    // Split col into its non-target base and its local (target) index.
    int rem = col, base = 0, lcol = 0;
    for (int f = static_cast<int>(fac.size()) - 1; f >= 0; --f) {
      digits[f] = rem % fac[f].dim;
      rem /= fac[f].dim;
    }
    for (std::size_t f = 0; f < fac.size(); ++f)
      if (!is_target[f]) base += digits[f] * strides[f];
    for (auto t : tidx) lcol = lcol * fac[t].dim + digits[t];
    for (int lrow = 0; lrow < dloc; ++lrow) {
      cplx v = local(lrow, lcol);
      if (v != cplx(0.0)) trip.emplace_back(base + local_offset[lrow], col, v);
    }
  }
  SparseMatrix m(dim, dim);
  m.setFromTriplets(trip.begin(), trip.end());
  return Operator{layout, std::move(m), targets};
}

Matrix partial_trace(const Matrix& m, const SystemLayout& layout,
                     const std::vector<std::string>& keep) {
  if (m.rows() != layout.total_dim() || m.cols() != layout.total_dim())
    throw LayoutError("matrix size does not match layout");
  auto kidx = indices_of(layout, keep);
  const auto& fac = layout.factors();
  std::vector<bool> kept(fac.size(), false);
  for (auto i : kidx) kept[i] = true;

  int dk = 1;
  for (auto i : kidx) dk *= fac[i].dim;
  const int dim = layout.total_dim();
  // For each full index: reduced (kept) index and traced-out index.
  std::vector<int> red(dim), env(dim);
  for (int i = 0; i < dim; ++i) {
    auto d = layout.digits(i);
    int r = 0, e = 0;
    for (auto k : kidx) r = r * fac[k].dim + d[k];
    for (std::size_t f = 0; f < fac.size(); ++f)
      if (!kept[f]) e = e * fac[f].dim + d[f];
    red[i] = r;
    env[i] = e;
  }
  Matrix out = Matrix::Zero(dk, dk);
  for (int j = 0; j < dim; ++j)
    for (int i = 0; i < dim; ++i)
      if (env[i] == env[j]) out(red[i], red[j]) += m(i, j);
  return out;
}

DensityMatrix partial_trace(const DensityMatrix& rho, const std::vector<std::string>& keep) {
  SystemLayout sub = rho.layout().select(keep);
  return DensityMatrix(std::move(sub), partial_trace(rho.data(), rho.layout(), keep));
}

Matrix partial_transpose(const Matrix& m, const SystemLayout& layout,
                         const std::vector<std::string>& transposed) {
  if (m.rows() != layout.total_dim() || m.cols() != layout.total_dim())
    throw LayoutError("matrix size does not match layout");
  auto tidx = indices_of(layout, transposed);
  const int dim = layout.total_dim();
  Matrix out(dim, dim);
  std::vector<std::vector<int>> dig(dim);
  for (int i = 0; i < dim; ++i) dig[i] = layout.digits(i);
  std::vector<int> di, dj;
  for (int j = 0; j < dim; ++j) {
    for (int i = 0; i < dim; ++i) {
      di = dig[i];
      dj = dig[j];
      for (auto t : tidx) std::swap(di[t], dj[t]);
      out(layout.flat_index(di), layout.flat_index(dj)) = m(i, j);
    }
  }
  return out;
}

// ---------------------------------------------------------------------------
// Werner states and measures

DensityMatrix werner_state(double f, const std::string& a, const std::string& b) {
  if (!(f >= 0.0 && f <= 1.0)) throw std::domain_error("Werner fidelity must lie in [0,1]");
  Matrix w = omega();
  Matrix rho = f * w + (1.0 - f) / 3.0 * (Matrix::Identity(4, 4) - w);
  return DensityMatrix::unchecked(SystemLayout::qubits({a, b}), rho);
}

double fidelity_with_omega(const DensityMatrix& rho) {
  const auto& f = rho.layout().factors();
  if (f.size() != 2 || f[0].dim != 2 || f[1].dim != 2)
    throw LayoutError("fidelity_with_omega needs a two-qubit state");
  return (omega() * rho.data()).trace().real();
}

double fidelity_with_omega(const DensityMatrix& rho, const std::string& a, const std::string& b) {
  if (rho.layout().dim_of(a) != 2 || rho.layout().dim_of(b) != 2)
    throw LayoutError("fidelity_with_omega needs a qubit pair");
  Matrix red = partial_trace(rho.data(), rho.layout(), {a, b});
  return (omega() * red).trace().real();
}

double concurrence(const DensityMatrix& rho) {
  if (rho.dim() != 4 || rho.layout().size() != 2)
    throw LayoutError("concurrence needs a two-qubit state");
  require_state(rho);
  Matrix yy = kron(pauli(2), pauli(2));
  Matrix tilde = yy * rho.data().conjugate() * yy;
  Eigen::SelfAdjointEigenSolver<Matrix> es(0.5 * (rho.data() + rho.data().adjoint()));
  Eigen::VectorXd ev = es.eigenvalues().cwiseMax(0.0).cwiseSqrt();
  Matrix sq = es.eigenvectors() * ev.asDiagonal() * es.eigenvectors().adjoint();
  Matrix r = sq * tilde * sq;
  Eigen::VectorXd lam = hermitian_eigenvalues(0.5 * (r + r.adjoint())).cwiseMax(0.0).cwiseSqrt();
  std::sort(lam.data(), lam.data() + lam.size(), std::greater<>());
  return std::max(0.0, lam(0) - lam(1) - lam(2) - lam(3));
}

double eof(const DensityMatrix& rho) {
  double c = std::min(1.0, concurrence(rho));
  double x = 0.5 * (1.0 + std::sqrt(std::max(0.0, 1.0 - c * c)));
  auto h = [](double p) { return p <= 0.0 || p >= 1.0 ? 0.0 : -p * std::log2(p) - (1 - p) * std::log2(1 - p); };
  return h(x);
}

double negativity(const DensityMatrix& rho, const std::vector<std::string>& party_b) {
  require_state(rho);
  return 0.5 * (trace_norm(partial_transpose(rho.data(), rho.layout(), party_b)) - 1.0);
}

double log_negativity(const DensityMatrix& rho, const std::vector<std::string>& party_b) {
  require_state(rho);
  double n = trace_norm(partial_transpose(rho.data(), rho.layout(), party_b));
  return std::max(0.0, std::log2(n));
}

double entropy(const DensityMatrix& rho) {
  require_state(rho);
  auto ev = hermitian_eigenvalues(0.5 * (rho.data() + rho.data().adjoint()));
  double s = 0.0;
  for (Eigen::Index i = 0; i < ev.size(); ++i)
    if (ev(i) > 1e-15) s -= ev(i) * std::log2(ev(i));
  return s;
}

double trace_norm(const Matrix& m) {
  if ((m - m.adjoint()).cwiseAbs().maxCoeff() <= 1e-14 * std::max(1.0, m.cwiseAbs().maxCoeff()))
    return hermitian_eigenvalues(0.5 * (m + m.adjoint())).cwiseAbs().sum();
  Eigen::BDCSVD<Matrix> svd(m);
  return svd.singularValues().sum();
}

double trace_distance(const Matrix& a, const Matrix& b) { return 0.5 * trace_norm(a - b); }

double trace_distance(const DensityMatrix& a, const DensityMatrix& b) {
  if (!(a.layout() == b.layout())) throw LayoutError("trace_distance on different layouts");
  return trace_distance(a.data(), b.data());
}

DensityMatrix random_state(const SystemLayout& layout, std::mt19937_64& rng) {
  std::normal_distribution<double> g;
  int d = layout.total_dim();
  Matrix z(d, d);
  for (int j = 0; j < d; ++j)
    for (int i = 0; i < d; ++i) z(i, j) = cplx(g(rng), g(rng));
  Matrix rho = z * z.adjoint();
  rho /= rho.trace().real();
  rho = 0.5 * (rho + rho.adjoint());
  return DensityMatrix::unchecked(layout, rho);
}

DensityMatrix random_pure_state(const SystemLayout& layout, std::mt19937_64& rng) {
  std::normal_distribution<double> g;
  Vector v(layout.total_dim());
  for (Eigen::Index i = 0; i < v.size(); ++i) v(i) = cplx(g(rng), g(rng));
  return DensityMatrix::pure(layout, v);
}

Matrix apply_kraus(std::span<const Matrix> kraus, const Matrix& rho) {
  Matrix out = Matrix::Zero(rho.rows(), rho.cols());
  for (const auto& k : kraus) out.noalias() += k * rho * k.adjoint();
  return out;
}

double kraus_completeness_error(std::span<const Matrix> kraus) {
  if (kraus.empty()) return 1.0;
  Matrix s = Matrix::Zero(kraus[0].cols(), kraus[0].cols());
  for (const auto& k : kraus) s.noalias() += k.adjoint() * k;
  return (s - Matrix::Identity(s.rows(), s.cols())).cwiseAbs().maxCoeff();
}

}  // namespace disq
