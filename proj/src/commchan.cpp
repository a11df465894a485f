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

#include "disq/commchan.hpp"

#include <algorithm>
#include <cmath>
#include <stdexcept>

#include <Eigen/SparseLU>

namespace disq::commchan {

namespace {

constexpr double kCompletenessTolerance = 1e-9;

Matrix ket_bra(int dim, int row, int col) {
  Matrix m = Matrix::Zero(dim, dim);
  m(row, col) = 1.0;
  return m;
}

void check_completeness(const std::vector<Matrix>& ops, const std::string& what) {
  if (ops.empty()) throw std::invalid_argument(what + " has no operators");
  if (kraus_completeness_error(ops) > kCompletenessTolerance)
    throw std::invalid_argument(what + " is not trace preserving");
}

// Index of Bob's forwarded record (Bob outcome j, Alice outcome i), both from 0.
int record_index(int i, int j, int n) { return 1 + i * n + j; }

// A jump whose register part sends configuration `from` to `to` for each pair,
// with main-system operator `op`.
struct BlockJump {
  Matrix op;
  double rate;
  std::vector<std::pair<int, int>> moves;
};

}  // namespace

void ChannelConfig::validate() const {
  for (double v : {Gamma, delta, gamma})
    if (!(v >= 0.0) || !std::isfinite(v)) throw std::domain_error("rates must be finite and nonnegative");
  if (!(Gamma > 0.0)) throw std::domain_error("communication rate must be positive");
  if (n_outcomes < 1) throw std::domain_error("need at least one outcome");
}

std::vector<SparseMatrix> channel_kraus(const SystemLayout& layout, const std::string& src,
                                        const std::string& dst) {
  const int ds = layout.dim_of(src);
  const int dd = layout.dim_of(dst);
  if (dd < ds) throw LayoutError("destination register smaller than source register " + src);
  std::vector<SparseMatrix> out;
  out.push_back(embed(kron(ket_bra(ds, 0, 0), Matrix::Identity(dd, dd)), layout, {src, dst}).data);
  for (int i = 1; i < ds; ++i)
    for (int x = 0; x < dd; ++x)
      out.push_back(embed(kron(ket_bra(ds, 0, i), ket_bra(dd, i, x)), layout, {src, dst}).data);
  return out;
}

LindbladTerm channel_generator(double Gamma, const SystemLayout& layout, const std::string& src,
                               const std::string& dst) {
  return LindbladTerm::channel(channel_kraus(layout, src, dst), Gamma);
}

OccupationVector occupation_rhs(const OccupationVector& p, double delta, double Gamma) {
  OccupationVector d;
  d.p0000 = -delta * p.p0000 + Gamma * p.p000X;
  d.p000X = -(delta + Gamma) * p.p000X + Gamma * p.p00XA;
  d.p00XA = -(delta + Gamma) * p.p00XA + Gamma * p.p0XAA;
  d.p0XAA = -(delta + Gamma) * p.p0XAA + Gamma * p.pXAAA;
  d.pXAAA = -Gamma * p.pXAAA + delta * (p.p0000 + p.p000X + p.p00XA + p.p0XAA);
  return d;
}

OccupationVector occupation_steady(double delta, double Gamma) {
  const double s = Gamma + delta;
  return {std::pow(Gamma / s, 4), delta * std::pow(Gamma, 3) / std::pow(s, 4),
          delta * Gamma * Gamma / std::pow(s, 3), delta * Gamma / (s * s), delta / s};
}

OccupationVector evolve_occupation(const OccupationVector& p0, double delta, double Gamma, double t) {
  using V = Eigen::VectorXd;
  auto to_vec = [](const OccupationVector& p) {
    auto a = p.as_array();
    return V(Eigen::Map<const V>(a.data(), 5));
  };
  DormandPrince<V> dp(
      [&](double, const V& y, V& dy) {
        std::array<double, 5> a{y(0), y(1), y(2), y(3), y(4)};
        dy = to_vec(occupation_rhs(OccupationVector::from_array(a), delta, Gamma));
      },
      StepControl{1e-12, 1e-15});
  V y = dp.integrate(to_vec(p0), 0.0, t);
  return OccupationVector::from_array({y(0), y(1), y(2), y(3), y(4)});
}

void OneRoundLocc::validate() const {
  const int nn = n();
  if (nn < 1) throw std::invalid_argument("LOCC map needs at least one outcome");
  if (static_cast<int>(b.size()) != nn || static_cast<int>(c.size()) != nn)
    throw std::invalid_argument("LOCC map: outcome counts disagree");
  check_completeness(a, "Alice's measurement");
  for (int i = 0; i < nn; ++i) {
    if (static_cast<int>(b[i].size()) != nn || static_cast<int>(c[i].size()) != nn)
      throw std::invalid_argument("LOCC map: outcome counts disagree");
    check_completeness(b[i], "Bob's measurement");
    for (int j = 0; j < nn; ++j) check_completeness(c[i][j], "Alice's correction");
  }
}

Matrix OneRoundLocc::apply(const Matrix& rho) const {
  const Matrix id = Matrix::Identity(2, 2);
  Matrix out = Matrix::Zero(4, 4);
  for (int i = 0; i < n(); ++i)
    for (int j = 0; j < n(); ++j) {
      Matrix ba = kron(id, b[i][j]) * kron(a[i], id);
      Matrix mid = ba * rho * ba.adjoint();
      for (const auto& ck : c[i][j]) {
        Matrix cc = kron(ck, id);
        out += cc * mid * cc.adjoint();
      }
    }
  return out;
}

OneRoundLocc local_unitary_pair(const Matrix& u, const Matrix& v, int n) {
  if (n < 1) throw std::invalid_argument("need at least one outcome");
  const double s = 1.0 / std::sqrt(static_cast<double>(n));
  OneRoundLocc t;
  t.name = "local-unitary-pair";
  t.a.assign(n, s * u);
  t.b.assign(n, std::vector<Matrix>(n, s * v));
  t.c.assign(n, std::vector<std::vector<Matrix>>(n, {Matrix::Identity(2, 2)}));
  t.validate();
  return t;
}

OneRoundLocc conditional_pauli() {
  std::array<Matrix, 2> proj{ket_bra(2, 0, 0), ket_bra(2, 1, 1)};
  OneRoundLocc t;
  t.name = "conditional-pauli";
  t.a = {proj[0], proj[1]};
  t.b.resize(2);
  t.c.resize(2);
  for (int i = 0; i < 2; ++i) {
    Matrix flip = i == 0 ? pauli(0) : pauli(1);
    for (int j = 0; j < 2; ++j) {
      t.b[i].push_back(flip * proj[j]);
      t.c[i].push_back({j == 0 ? pauli(0) : pauli(3)});
    }
  }
  t.validate();
  return t;
}

std::vector<Matrix> default_main_jumps() {
  const Matrix id = Matrix::Identity(2, 2);
  return {0.5 * kron(sigma_minus(), id), 0.5 * kron(id, sigma_minus())};
}

SystemLayout register_layout(int n) {
  if (n < 1) throw std::invalid_argument("need at least one outcome");
  const int small = n + 1;
  const int big = n * n + 1;
  return SystemLayout({{"A", 2}, {"B", 2}, {"Ia", small}, {"Ob", small}, {"Ib", big}, {"Oa", big}});
}

MasterEquation build_full(const ChannelConfig& cfg, const OneRoundLocc& t,
                          const std::vector<Matrix>& main_jumps) {
  cfg.validate();
  t.validate();
  const int n = t.n();
  if (n != cfg.n_outcomes) throw std::invalid_argument("LOCC map outcome count differs from config");
  SystemLayout lay = register_layout(n);
  const int small = n + 1;
  const int big = n * n + 1;
  std::vector<LindbladTerm> terms;
  for (const auto& l : main_jumps) terms.push_back(LindbladTerm::jump(embed(l, lay, {"A", "B"}), cfg.gamma));
  // Alice measures and writes her outcome, whatever the register held.
  for (int i = 0; i < n; ++i)
    for (int k = 0; k < small; ++k)
      terms.push_back(LindbladTerm::jump(
          embed(kron(t.a[i], ket_bra(small, i + 1, k)), lay, {"A", "Ia"}), cfg.delta));
  // Bob reads Alice's outcome, measures, and writes both outcomes.
  for (int i = 0; i < n; ++i)
    for (int j = 0; j < n; ++j)
      for (int x = 0; x < big; ++x)
        terms.push_back(LindbladTerm::jump(
            embed(kron({t.b[i][j], ket_bra(small, 0, i + 1), ket_bra(big, record_index(i, j, n), x)}),
                  lay, {"B", "Ob", "Ib"}),
            cfg.Gamma));
  // Alice reads Bob's record and applies her channel.
  for (int i = 0; i < n; ++i)
    for (int j = 0; j < n; ++j)
      for (const auto& ck : t.c[i][j])
        terms.push_back(LindbladTerm::jump(
            embed(kron(ck, ket_bra(big, 0, record_index(i, j, n))), lay, {"A", "Oa"}), cfg.Gamma));
  terms.push_back(channel_generator(cfg.Gamma, lay, "Ia", "Ob"));
  terms.push_back(channel_generator(cfg.Gamma, lay, "Ib", "Oa"));
  return MasterEquation(std::move(lay), std::move(terms));
}

BlockModel::BlockModel(const ChannelConfig& cfg, const OneRoundLocc& t,
                       const std::vector<Matrix>& main_jumps)
    : cfg_(cfg), n_(t.n()) {
  cfg_.validate();
  t.validate();
  if (n_ != cfg_.n_outcomes) throw std::invalid_argument("LOCC map outcome count differs from config");
  const int small = n_ + 1;
  const int big = n_ * n_ + 1;
  dims_[0] = dims_[1] = small;
  dims_[2] = dims_[3] = big;
  num_blocks_ = small * small * big * big;

  const Matrix id = Matrix::Identity(2, 2);
  std::vector<BlockJump> jumps;
  std::vector<std::pair<int, int>> all;
  for (int c = 0; c < num_blocks_; ++c) all.emplace_back(c, c);
  for (const auto& l : main_jumps) {
    if (l.rows() != 4 || l.cols() != 4) throw LayoutError("main-system jumps must be 4x4");
    jumps.push_back({l, cfg_.gamma, all});
  }

  auto moves_where = [&](auto pred, auto image) {
    std::vector<std::pair<int, int>> mv;
    for (int c = 0; c < num_blocks_; ++c) {
      auto d = config_digits(c);
      if (pred(d)) {
        auto e = image(d);
        mv.emplace_back(c, config_index(e[0], e[1], e[2], e[3]));
      }
    }
    return mv;
  };

  for (int i = 0; i < n_; ++i)
    for (int k = 0; k < small; ++k)
      jumps.push_back({kron(t.a[i], id), cfg_.delta,
                       moves_where([&](const auto& d) { return d[0] == k; },
                                   [&](auto d) { d[0] = i + 1; return d; })});
  for (int i = 0; i < n_; ++i)
    for (int j = 0; j < n_; ++j)
      for (int x = 0; x < big; ++x)
        jumps.push_back({kron(id, t.b[i][j]), cfg_.Gamma,
                         moves_where([&](const auto& d) { return d[1] == i + 1 && d[2] == x; },
                                     [&](auto d) {
                                       d[1] = 0;
                                       d[2] = record_index(i, j, n_);
                                       return d;
                                     })});
  for (int i = 0; i < n_; ++i)
    for (int j = 0; j < n_; ++j)
      for (const auto& ck : t.c[i][j])
        jumps.push_back({kron(ck, id), cfg_.Gamma,
                         moves_where([&](const auto& d) { return d[3] == record_index(i, j, n_); },
                                     [&](auto d) { d[3] = 0; return d; })});
  // Channels. The Kraus operator acting on an empty source is the identity and
  // contributes nothing to T(rho) - rho.
  const Matrix id4 = Matrix::Identity(4, 4);
  for (int i = 1; i < small; ++i)
    for (int x = 0; x < small; ++x)
      jumps.push_back({id4, cfg_.Gamma,
                       moves_where([&](const auto& d) { return d[0] == i && d[1] == x; },
                                   [&](auto d) { d[0] = 0; d[1] = i; return d; })});
  for (int i = 1; i < big; ++i)
    for (int x = 0; x < big; ++x)
      jumps.push_back({id4, cfg_.Gamma,
                       moves_where([&](const auto& d) { return d[2] == i && d[3] == x; },
                                   [&](auto d) { d[2] = 0; d[3] = i; return d; })});

  // Column-stacking vec within each block.
  std::vector<Eigen::Triplet<cplx>> trip;
  const Matrix id4v = Matrix::Identity(4, 4);
  for (const auto& jp : jumps) {
    if (jp.rate == 0.0) continue;
    Matrix gain = jp.rate * kron(jp.op.conjugate(), jp.op);
    Matrix ada = jp.op.adjoint() * jp.op;
    Matrix loss = -0.5 * jp.rate * (kron(id4v, ada) + kron(ada.transpose(), id4v));
    for (auto [from, to] : jp.moves)
      for (int r = 0; r < 16; ++r)
        for (int s = 0; s < 16; ++s) {
          if (gain(r, s) != cplx(0.0)) trip.emplace_back(16 * to + r, 16 * from + s, gain(r, s));
          if (loss(r, s) != cplx(0.0)) trip.emplace_back(16 * from + r, 16 * from + s, loss(r, s));
        }
  }
  generator_ = SparseMatrix(16 * num_blocks_, 16 * num_blocks_);
  generator_.setFromTriplets(trip.begin(), trip.end());
  generator_.makeCompressed();
}

int BlockModel::config_index(int ia, int ob, int ib, int oa) const {
  return ((ia * dims_[1] + ob) * dims_[2] + ib) * dims_[3] + oa;
}

std::array<int, 4> BlockModel::config_digits(int c) const {
  std::array<int, 4> d{};
  for (int k = 3; k >= 0; --k) {
    d[k] = c % dims_[k];
    c /= dims_[k];
  }
  return d;
}

Vector BlockModel::empty_registers(const Matrix& main_state) const {
  if (main_state.rows() != 4 || main_state.cols() != 4) throw LayoutError("main state must be 4x4");
  Vector v = Vector::Zero(16 * num_blocks_);
  v.head(16) = Eigen::Map<const Vector>(main_state.data(), 16);
  return v;
}

Matrix BlockModel::block(const Vector& state, int c) const {
  return Eigen::Map<const Matrix>(state.data() + 16 * c, 4, 4);
}

Vector BlockModel::from_full(const Matrix& rho) const {
  const int d = 4 * num_blocks_;
  if (rho.rows() != d || rho.cols() != d) throw LayoutError("full state has the wrong dimension");
  Vector v(16 * num_blocks_);
  for (int c = 0; c < num_blocks_; ++c)
    for (int col = 0; col < 4; ++col)
      for (int row = 0; row < 4; ++row) v(16 * c + 4 * col + row) = rho(row * num_blocks_ + c, col * num_blocks_ + c);
  return v;
}

Matrix BlockModel::to_full(const Vector& state) const {
  const int d = 4 * num_blocks_;
  Matrix rho = Matrix::Zero(d, d);
  for (int c = 0; c < num_blocks_; ++c)
    for (int col = 0; col < 4; ++col)
      for (int row = 0; row < 4; ++row) rho(row * num_blocks_ + c, col * num_blocks_ + c) = state(16 * c + 4 * col + row);
  return rho;
}

BlockModel::Occupations BlockModel::occupations(const Vector& state) const {
  Occupations o{};
  o.grouped = OccupationVector{0, 0, 0, 0, 0};
  for (int c = 0; c < num_blocks_; ++c) {
    const double p = block(state, c).trace().real();
    auto d = config_digits(c);
    const int occupied = (d[0] > 0) + (d[1] > 0) + (d[2] > 0) + (d[3] > 0);
    if (occupied == 0) o.p0000 += p;
    if (occupied == 1) {
      if (d[0] > 0) o.pX000 += p;
      if (d[1] > 0) o.p0X00 += p;
      if (d[2] > 0) o.p00X0 += p;
      if (d[3] > 0) o.p000X += p;
    }
    if (d[0] > 0) o.grouped.pXAAA += p;
    else if (d[1] > 0) o.grouped.p0XAA += p;
    else if (d[2] > 0) o.grouped.p00XA += p;
    else if (d[3] > 0) o.grouped.p000X += p;
    else o.grouped.p0000 += p;
  }
  return o;
}

Vector BlockModel::evolve(const Vector& state, double t, double h, double relax) const {
  if (!(t >= 0.0) || !(h > 0.0) || !(relax >= 0.0)) throw std::domain_error("bad evolution times");
  relax = std::min(relax, t);
  Vector y = state;
  const double stiff = t - relax;
  if (stiff > 0.0) {
    const long steps = static_cast<long>(std::ceil(stiff / h));
    const double hs = stiff / static_cast<double>(steps);
    SparseMatrix sys(generator_.rows(), generator_.cols());
    sys.setIdentity();
    sys -= hs * generator_;
    Eigen::SparseLU<SparseMatrix> lu;
    lu.compute(sys);
    if (lu.info() != Eigen::Success) throw IntegrationError("implicit step factorization failed");
    for (long k = 0; k < steps; ++k) y = lu.solve(y);
  }
  if (relax > 0.0) {
    DormandPrince<Vector> dp([this](double, const Vector& x, Vector& dx) { dx = generator_ * x; },
                             StepControl{1e-11, 1e-15});
    y = dp.integrate(y, 0.0, relax);
  }
  return y;
}

BoundsReport verify_bounds(double delta, double Gamma, double t_wait) {
  ChannelConfig cfg{Gamma, delta, 0.0, 2};
  BlockModel model(cfg, conditional_pauli(), {});
  Vector y = model.empty_registers(omega());
  y = model.evolve(y, t_wait, 0.02 / delta, std::min(t_wait, 50.0 / Gamma));
  auto o = model.occupations(y);
  BoundsReport r{};
  r.delta = delta;
  r.Gamma = Gamma;
  r.t_wait = t_wait;
  r.pX000 = o.pX000;
  r.p0X00 = o.p0X00;
  r.p00X0 = o.p00X0;
  r.p000X = o.p000X;
  r.p0000 = o.p0000;
  const double q = delta / Gamma;
  r.lower = q - 7.0 * q * q;
  r.upper = q;
  r.all_hold = true;
  for (double p : {r.pX000, r.p0X00, r.p00X0, r.p000X})
    if (p < r.lower || p > r.upper) r.all_hold = false;
  return r;
}

double loglog_slope(const std::vector<double>& x, const std::vector<double>& y) {
  if (x.size() != y.size() || x.size() < 2) throw std::invalid_argument("slope needs two or more points");
  double sx = 0, sy = 0, sxx = 0, sxy = 0;
  const double n = static_cast<double>(x.size());
  for (std::size_t i = 0; i < x.size(); ++i) {
    if (!(x[i] > 0.0) || !(y[i] > 0.0)) throw std::domain_error("slope needs positive values");
    const double lx = std::log(x[i]), ly = std::log(y[i]);
    sx += lx;
    sy += ly;
    sxx += lx * lx;
    sxy += lx * ly;
  }
  const double den = n * sxx - sx * sx;
  if (den == 0.0) throw std::domain_error("slope needs distinct abscissae");
  return (n * sxy - sx * sy) / den;
}

ErrorReport effective_locc_error(const OneRoundLocc& t, double gamma, double delta,
                                 const std::vector<double>& Gammas, GeneratorExtraction mode) {
  if (Gammas.empty()) throw std::invalid_argument("no communication rates given");
  if (!(delta > 0.0)) throw std::domain_error("LOCC rate must be positive");
  const auto main_jumps = default_main_jumps();
  ErrorReport rep{t.name, gamma, delta, {}, 0.0, true};

  // Initial main state: a pure state with no special symmetry.
  Vector psi(4);
  psi << 0.6, cplx(0.0, 0.48), 0.0, cplx(0.64, 0.0);
  psi.normalize();
  const Matrix rho_init = psi * psi.adjoint();

  for (double Gamma : Gammas) {
    ChannelConfig cfg{Gamma, delta, gamma, t.n()};
    BlockModel model(cfg, t, main_jumps);
    const double t_wait = 10.0 / delta;
    const double relax = std::min(t_wait / 2, 60.0 / Gamma);
    Vector y = model.evolve(model.empty_registers(rho_init), t_wait, 0.1 / delta, relax);

    Matrix rho0 = model.block(y, 0);
    Matrix drho0;
    if (mode == GeneratorExtraction::kExact) {
      drho0 = model.block(model.apply(y), 0);
    } else {
      // Central differences at steps h and 2h combined to fourth order.
      const double h = 1e-2 / (gamma + delta);
      std::vector<double> times{0.0, h, 2 * h, 3 * h, 4 * h};
      std::vector<Matrix> samples;
      DormandPrince<Vector> dp([&](double, const Vector& x, Vector& dx) { dx = model.generator() * x; },
                               StepControl{1e-13, 1e-16});
      dp.integrate(y, 0.0, 4 * h, times, [&](double, const Vector& x) { samples.push_back(model.block(x, 0)); });
      rho0 = samples[2];
      Matrix d1 = (samples[3] - samples[1]) / (2 * h);
      Matrix d2 = (samples[4] - samples[0]) / (4 * h);
      drho0 = (4.0 * d1 - d2) / 3.0;
    }

    Matrix predicted = delta * (t.apply(rho0) - rho0);
    for (const auto& l : main_jumps) {
      Matrix ada = l.adjoint() * l;
      predicted += gamma * (l * rho0 * l.adjoint() - 0.5 * (ada * rho0 + rho0 * ada));
    }
    rep.points.push_back({Gamma, cfg.alpha(), trace_norm(drho0 - predicted) / delta});
  }

  std::vector<ErrorPoint> sorted = rep.points;
  std::sort(sorted.begin(), sorted.end(), [](const auto& a, const auto& b) { return a.Gamma < b.Gamma; });
  for (std::size_t i = 1; i < sorted.size(); ++i)
    if (sorted[i].error_trace_norm > sorted[i - 1].error_trace_norm) rep.monotone = false;
  if (sorted.size() >= 2) {
    std::vector<double> xs, ys;
    for (const auto& p : sorted) {
      xs.push_back(p.alpha);
      ys.push_back(p.error_trace_norm);
    }
    rep.slope = loglog_slope(xs, ys);
  }
  return rep;
}

}  // namespace disq::commchan
