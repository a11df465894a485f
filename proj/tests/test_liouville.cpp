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

#include <gtest/gtest.h>

#include "disq/liouville.hpp"
#include "support.hpp"

namespace disq {
namespace {

using testing::Gen;
using testing::max_abs;

// A random master equation on `lay` together with its written-out action.
struct RandomEquation {
  MasterEquation me;
  std::function<Matrix(const Matrix&)> oracle;
};

RandomEquation random_equation(Gen& gen, const SystemLayout& lay) {
  auto labels = lay.labels();
  std::vector<LindbladTerm> terms;
  std::vector<std::pair<double, Matrix>> jumps, hams;
  std::vector<std::pair<double, std::vector<Matrix>>> chans;
  for (int k = 0; k < 3; ++k) {
    const std::string& a = labels[gen.integer(0, static_cast<int>(labels.size()) - 1)];
    const std::string& b = labels[(lay.index_of(a) + 1) % labels.size()];
    Matrix local = gen.complex_matrix(lay.dim_of(a) * lay.dim_of(b), lay.dim_of(a) * lay.dim_of(b)) * 0.5;
    Operator op = embed(local, lay, {a, b});
    double rate = gen.uniform(0.1, 2.0);
    terms.push_back(LindbladTerm::jump(op, rate));
    jumps.emplace_back(rate, op.dense());
  }
  {
    const std::string& a = labels[0];
    Operator h = embed(gen.hermitian(lay.dim_of(a)), lay, {a});
    double rate = gen.uniform(0.1, 2.0);
    terms.push_back(LindbladTerm::hamiltonian(h, rate));
    hams.emplace_back(rate, h.dense());
  }
  {
    auto ks = gen.kraus_set(lay.total_dim(), 2);
    double rate = gen.uniform(0.1, 2.0);
    terms.push_back(LindbladTerm::channel(ks, rate));
    chans.emplace_back(rate, ks);
  }
  auto oracle = [jumps, hams, chans](const Matrix& rho) {
    Matrix out = Matrix::Zero(rho.rows(), rho.cols());
    for (const auto& [r, a] : jumps) out += r * testing::dissipator(a, rho);
    for (const auto& [r, h] : hams) out += cplx(0, r) * (h * rho - rho * h);
    for (const auto& [r, ks] : chans) {
      Matrix t = Matrix::Zero(rho.rows(), rho.cols());
      for (const auto& k : ks) t += k * rho * k.adjoint();
      out += r * (t - rho);
    }
    return out;
  };
  return {MasterEquation(lay, std::move(terms)), oracle};
}

TEST(MasterEquation, ApplyMatchesWrittenOutGenerator) {
  Gen gen(21);
  SystemLayout lay({{"a", 2}, {"b", 3}, {"c", 2}});
  for (int trial = 0; trial < 5; ++trial) {
    auto eq = random_equation(gen, lay);
    Matrix rho = gen.complex_matrix(12, 12);
    EXPECT_LT(max_abs(eq.me.apply(rho) - eq.oracle(rho)), 1e-12);
  }
}

TEST(MasterEquation, LiouvillianMatrixMatchesSuperoperatorOracle) {
  Gen gen(22);
  SystemLayout lay = SystemLayout::qubits({"a", "b", "c"});
  for (int trial = 0; trial < 3; ++trial) {
    auto eq = random_equation(gen, lay);
    Matrix want = testing::superoperator(8, eq.oracle);
    Matrix got = Matrix(build_liouvillian_matrix(eq.me));
    EXPECT_LT(max_abs(got - want), 1e-12);
  }
}

TEST(MasterEquation, GeneratorIsTracelessAndHermiticityPreserving) {
  Gen gen(23);
  SystemLayout lay = SystemLayout::qubits({"a", "b"});
  for (int trial = 0; trial < 10; ++trial) {
    auto eq = random_equation(gen, lay);
    DensityMatrix rho(lay, gen.state(4));
    Matrix d = apply_generator(eq.me, rho);
    EXPECT_LT(std::abs(d.trace()), 1e-12);
    EXPECT_LT(max_abs(d - d.adjoint()), 1e-12);
  }
}

TEST(MasterEquation, RejectsInvalidTerms) {
  SystemLayout lay = SystemLayout::qubits({"a"});
  SystemLayout other = SystemLayout::qubits({"b"});
  EXPECT_THROW(MasterEquation(lay, {LindbladTerm::jump(embed(sigma_minus(), lay, {"a"}), -1.0)}),
               std::invalid_argument);
  EXPECT_THROW(MasterEquation(lay, {LindbladTerm::jump(embed(sigma_minus(), other, {"b"}), 1.0)}), LayoutError);
  std::vector<Matrix> incomplete{sigma_minus()};
  EXPECT_THROW(MasterEquation(lay, {LindbladTerm::channel(incomplete, 1.0)}), std::invalid_argument);
}

TEST(MasterEquation, LiouvillianBeyondLimitIsRejected) {
  SystemLayout lay = SystemLayout::qubits({"a", "b", "c", "d", "e", "f", "g"});
  MasterEquation me(lay, {LindbladTerm::jump(embed(sigma_minus(), lay, {"a"}), 1.0)});
  EXPECT_THROW(build_liouvillian_matrix(me), LayoutError);
}

TEST(Evolve, PreservesStateInvariantsOnRandomEquations) {
  Gen gen(24);
  SystemLayout lay = SystemLayout::qubits({"a", "b"});
  for (int trial = 0; trial < 5; ++trial) {
    auto eq = random_equation(gen, lay);
    DensityMatrix rho0(lay, gen.state(4));
    EvolveOptions opts;
    opts.sample_times = {0.1, 0.5, 1.0, 2.0};
    opts.project_hermitian = false;
    auto traj = evolve(eq.me, rho0, 2.0, opts);
    ASSERT_EQ(traj.states.size(), 4u);
    for (const auto& s : traj.states) {
      EXPECT_LT(std::abs(s.data().trace() - 1.0), 1e-8);
      EXPECT_LT(max_abs(s.data() - s.data().adjoint()), 1e-8);
    }
  }
}

TEST(Evolve, AmplitudeDampingMatchesClosedForm) {
  SystemLayout lay = SystemLayout::qubits({"q"});
  MasterEquation me(lay, {LindbladTerm::jump(embed(sigma_minus(), lay, {"q"}), 0.7)});
  Matrix rho = Matrix::Zero(2, 2);
  rho(0, 0) = 0.25;
  rho(1, 1) = 0.75;
  rho(0, 1) = 0.3;
  rho(1, 0) = 0.3;
  EvolveOptions opts;
  opts.step.rtol = 1e-12;
  opts.step.atol = 1e-14;
  auto traj = evolve(me, DensityMatrix(lay, rho), 3.0, opts);
  const Matrix& out = traj.states.back().data();
  EXPECT_NEAR(out(1, 1).real(), 0.75 * std::exp(-0.7 * 3.0), 1e-11);
  EXPECT_NEAR(std::abs(out(0, 1)), 0.3 * std::exp(-0.35 * 3.0), 1e-11);
}

TEST(SteadyState, DenseSparseAndIntegrationPathsFindGroundState) {
  // 2 qubits (dense kernel), 5 qubits (sparse LU), 7 qubits (integration).
  for (int n : {2, 5, 7}) {
    std::vector<std::string> labels;
    for (int i = 0; i < n; ++i) labels.push_back("q" + std::to_string(i));
    SystemLayout lay = SystemLayout::qubits(labels);
    std::vector<LindbladTerm> terms;
    for (const auto& l : labels) {
      terms.push_back(LindbladTerm::jump(embed(sigma_minus(), lay, {l}), 1.0));
      terms.push_back(LindbladTerm::hamiltonian(embed(pauli(1), lay, {l}), 0.2));
    }
    MasterEquation me(lay, terms);
    auto ss = steady_state(me);
    EXPECT_LT(ss.residual, 1e-8) << n;
    // Each qubit relaxes to the driven-damped single-qubit steady state.
    MasterEquation one(SystemLayout::qubits({"q"}),
                       {LindbladTerm::jump(embed(sigma_minus(), SystemLayout::qubits({"q"}), {"q"}), 1.0),
                        LindbladTerm::hamiltonian(embed(pauli(1), SystemLayout::qubits({"q"}), {"q"}), 0.2)});
    Matrix single = steady_state(one).state.data();
    Matrix r0 = partial_trace(ss.state, {"q0"}).data();
    EXPECT_LT(max_abs(r0 - single), 1e-7) << n;
  }
}

TEST(SteadyState, DegenerateKernelThrowsWithBasis) {
  SystemLayout lay = SystemLayout::qubits({"a", "b"});
  // Dephasing only: every diagonal state is stationary.
  MasterEquation me(lay, {LindbladTerm::jump(embed(pauli(3), lay, {"a"}), 1.0)});
  try {
    steady_state(me);
    FAIL() << "expected NonUniqueSteadyState";
  } catch (const NonUniqueSteadyState& e) {
    EXPECT_GE(e.kernel_basis.size(), 2u);
  }
}

TEST(Integrator, ExponentialToTolerance) {
  DormandPrince<Eigen::VectorXd> dp([](double, const Eigen::VectorXd& y, Eigen::VectorXd& dy) { dy = -y; },
                                    StepControl{1e-12, 1e-15});
  Eigen::VectorXd y0(2);
  y0 << 1.0, 2.0;
  std::vector<double> seen;
  auto y = dp.integrate(y0, 0.0, 5.0, {1.0, 2.5}, [&](double t, const Eigen::VectorXd&) { seen.push_back(t); });
  EXPECT_NEAR(y(0), std::exp(-5.0), 1e-12);
  EXPECT_NEAR(y(1), 2 * std::exp(-5.0), 1e-12);
  EXPECT_EQ(seen, (std::vector<double>{1.0, 2.5}));
  EXPECT_THROW(dp.integrate(y0, 1.0, 0.0), IntegrationError);
}

}  // namespace
}  // namespace disq
