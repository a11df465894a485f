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

#include "disq/werner.hpp"
#include "support.hpp"

namespace disq::werner {
namespace {

using testing::Gen;
using testing::max_abs;

Matrix werner_oracle(double f) {
  Matrix om = omega();
  return f * om + (1 - f) * (Matrix::Identity(4, 4) - om) / 3.0;
}

// Replace qubit `which` (0 or 1) of a pair by the maximally mixed state.
Matrix replace_oracle(const Matrix& rho, int which) {
  Matrix red = testing::partial_trace_oracle(rho, {2, 2}, {1 - which});
  Matrix half = Matrix::Identity(2, 2) / 2.0;
  return which == 0 ? kron(half, red) : kron(red, half);
}

TEST(Maps, QAndWMatchTheirDefinitions) {
  Gen gen(41);
  for (int trial = 0; trial < 8; ++trial) {
    Matrix rho = gen.complex_matrix(4, 4);
    const cplx tr = rho.trace();
    EXPECT_LT(max_abs(q_map(rho) - (tr * omega() - rho)), 1e-14);
    EXPECT_LT(max_abs(w_map(rho) - (tr * Matrix::Identity(4, 4) / 4.0 - rho)), 1e-14);
    for (double f : {0.25, 0.6, 1.0})
      EXPECT_LT(max_abs(ef_map(rho, f) - (tr * werner_oracle(f) - rho)), 1e-14);
  }
}

TEST(Maps, DepolarizingJumpsReplaceOneQubit) {
  Gen gen(42);
  Matrix rho = gen.state(2);
  Matrix sum = Matrix::Zero(2, 2);
  for (const auto& s : depolarizing_jumps()) sum += testing::dissipator(s, rho);
  EXPECT_LT(max_abs(sum - (Matrix::Identity(2, 2) / 2.0 - rho)), 1e-15);
}

TEST(Maps, PairEquationIsEntanglerPlusNoise) {
  Gen gen(43);
  for (int trial = 0; trial < 5; ++trial) {
    const double f = gen.uniform(0.25, 1.0), g = gen.uniform(0.1, 3.0), e = gen.uniform(0.0, 1.0);
    Matrix rho = gen.state(4);
    Matrix want = g * (werner_oracle(f) - rho) +
                  0.5 * e * (replace_oracle(rho, 0) - rho + replace_oracle(rho, 1) - rho);
    EXPECT_LT(max_abs(pair_equation(f, g, e).apply(rho) - want), 1e-13);
  }
}

TEST(Coefficients, StartAtIdentitySumToOneAndSolveTheirOde) {
  auto g0 = g_coefficients(1.3, 0.4, 0.0);
  EXPECT_NEAR(g0[0], 1.0, 1e-15);
  EXPECT_NEAR(g0[1] + g0[2] + g0[3], 0.0, 1e-15);
  Gen gen(44);
  for (int trial = 0; trial < 10; ++trial) {
    const double gamma = gen.uniform(0.1, 3.0), eps = gen.uniform(0.0, 2.0), t = gen.uniform(0.0, 4.0);
    auto g = g_coefficients(gamma, eps, t);
    EXPECT_NEAR(g[0] + g[1] + g[2] + g[3], 1.0, 1e-14);
    const double h = 1e-5;
    auto gp = g_coefficients(gamma, eps, t + h);
    auto gmm = g_coefficients(gamma, eps, std::max(0.0, t - h));
    auto rhs = g_rhs(g, gamma, eps);
    for (int i = 0; i < 4; ++i) {
      const double fd = t > h ? (gp[i] - gmm[i]) / (2 * h) : (gp[i] - g[i]) / h;
      EXPECT_NEAR(rhs[i], fd, 1e-6) << i;
    }
  }
}

TEST(ExactEvolve, MatchesNumericalIntegration) {
  Gen gen(45);
  SystemLayout lay = SystemLayout::qubits({"A", "B"});
  for (int trial = 0; trial < 6; ++trial) {
    const double f = gen.uniform(0.25, 1.0), g = gen.uniform(0.1, 2.0), e = gen.uniform(0.0, 1.0);
    const double t = gen.uniform(0.1, 3.0);
    DensityMatrix rho0(lay, trial % 2 ? gen.state(4) : kron(gen.state(2), gen.state(2)));
    EvolveOptions opts;
    opts.step.rtol = 1e-11;
    opts.step.atol = 1e-13;
    auto num = evolve(pair_equation(f, g, e), rho0, t, opts).states.back();
    EXPECT_LT(max_abs(exact_evolve(rho0, f, g, e, t).data() - num.data()), 1e-8);
  }
}

TEST(ExactEvolve, LongTimeReachesReducedFidelity) {
  DensityMatrix rho = exact_evolve(werner_state(0.3), 0.96, 1.0, 0.05, 60.0);
  EXPECT_NEAR(fidelity_with_omega(rho), reduced_fidelity(0.96, 1.0, 0.05), 1e-12);
}

TEST(Reinit, AverageMatchesClosedForms) {
  for (double fs : {0.5, 0.9, 0.99}) {
    for (double a : {0.01, 0.3, 0.5587, 0.8, 0.9997, 1.0, 1.5, 2.5, 7.0, 16.5, 1e3, 1e5, 1e7}) {
      EXPECT_NEAR(reinit_average([](double f) { return f; }, fs, a), identity_distilled_fidelity(fs, a), 1e-10)
          << fs << " " << a;
      // int (fs + c x^a)^2 dx written out.
      const double c = 0.25 - fs;
      const double want = fs * fs + 2 * fs * c / (a + 1) + c * c / (2 * a + 1);
      EXPECT_NEAR(reinit_average([](double f) { return f * f; }, fs, a), want, 1e-10) << fs << " " << a;
    }
  }
  EXPECT_EQ(reinit_average([](double f) { return f; }, 0.9, std::numeric_limits<double>::infinity()), 0.9);
  EXPECT_NEAR(reinit_average([](double f) { return f; }, 0.9, 0.0), 0.25, 1e-15);
  EXPECT_THROW(reinit_average([](double f) { return f; }, 0.9, -1.0), std::domain_error);
  EXPECT_THROW(reinit_fidelity(0.9, 1.0, 1.5), std::domain_error);
}

TEST(Reinit, IdentityProtocolDistilsNothing) {
  // With no distillation the fidelity approaches f_s as delta_d -> 0.
  auto id = identity_protocol();
  EXPECT_EQ(id.block_size, 1);
  EXPECT_NEAR(distilled_steady_fidelity(id.fidelity, 0.9, 1.0, 0.0, 0.0), 0.9, 1e-15);
  EXPECT_NEAR(distilled_steady_fidelity(id.fidelity, 0.9, 1.0, 0.0, 1.0), 0.9 - 0.65 / 2.0, 1e-10);
}

TEST(FourToOne, ClosedFormMatchesSimulation) {
  for (double f : {0.25, 0.4, 0.6, 0.8, 0.96, 1.0}) {
    auto a = four_to_one(f);
    auto b = simulate_four_to_one(f);
    EXPECT_NEAR(a.f_out, b.f_out, 1e-10) << f;
    EXPECT_NEAR(a.p_succ, b.p_succ, 1e-10) << f;
  }
}

TEST(FourToOne, FixedPointsAndImprovement) {
  EXPECT_NEAR(four_to_one(1.0).f_out, 1.0, 1e-15);
  EXPECT_NEAR(four_to_one(1.0).p_succ, 1.0, 1e-15);
  EXPECT_NEAR(four_to_one(0.25).f_out, 0.25, 1e-15);
  EXPECT_NEAR(four_to_one(0.25).p_succ, 0.25, 1e-15);
  for (double f : {0.7, 0.9, 0.96, 0.99}) EXPECT_GT(four_to_one(f).f_out, f);
  EXPECT_THROW(four_to_one(1.1), std::domain_error);
}

TEST(Nested, ComposesLevels) {
  const double f = 0.9;
  auto l1 = four_to_one(f);
  auto l2 = four_to_one(l1.f_out);
  EXPECT_NEAR(nested_distill(f, 0), f, 0.0);
  EXPECT_NEAR(nested_distill(f, 2), l2.f_out, 1e-15);
  EXPECT_NEAR(nested_success(f, 0), 1.0, 0.0);
  EXPECT_NEAR(nested_success(f, 2), std::pow(l1.p_succ, 4) * l2.p_succ, 1e-15);
  auto p = nested_four_to_one_protocol(2);
  EXPECT_EQ(p.block_size, 16);
  EXPECT_NEAR(p.fidelity(f), l2.f_out, 1e-15);
  EXPECT_THROW(nested_distill(f, -1), std::domain_error);
}

TEST(Rates, BoostAndEffectiveRate) {
  EXPECT_NEAR(boost_steady_fidelity(0.9, 1, 1.0, 0.0), 0.9, 1e-15);
  EXPECT_NEAR(boost_steady_fidelity(0.9, 3, 2.0, 1.0), (6 * 0.9 + 0.25) / 7.0, 1e-15);
  EXPECT_NEAR(reduced_fidelity(0.96, 70.0, 0.05), (70 * 0.96 + 0.0125) / 70.05, 1e-15);
  EXPECT_NEAR(effective_rate(0.5, 2.0), 1.0, 1e-15);
  EXPECT_THROW(effective_rate(1.5, 1.0), std::domain_error);
  EXPECT_THROW(boost_steady_fidelity(0.9, 0, 1.0, 0.0), std::domain_error);
}

TEST(Rates, BoostMatchesSteadyStateOfBoostedPair) {
  // m copies pumping toward rho_W(f*) at rate delta each, plus noise.
  const double fstar = 0.93, delta = 0.7, eps = 0.2;
  const int m = 3;
  SystemLayout lay = SystemLayout::qubits({"A", "B"});
  auto terms = entangler_terms(fstar, m * delta, lay, "A", "B");
  auto noise = noise_terms(eps, lay, "A", "B");
  terms.insert(terms.end(), noise.begin(), noise.end());
  auto ss = steady_state(MasterEquation(lay, terms));
  // Per-qubit depolarizing at eps/2 on both sides shrinks overlap at rate eps.
  EXPECT_NEAR(fidelity_with_omega(ss.state), boost_steady_fidelity(fstar, m, delta, eps), 1e-10);
}

}  // namespace
}  // namespace disq::werner
