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

#include "disq/qops.hpp"
#include "support.hpp"

namespace disq {
namespace {

using testing::Gen;
using testing::max_abs;

TEST(Layout, DigitsRoundTrip) {
  SystemLayout lay({{"a", 2}, {"b", 3}, {"c", 5}});
  EXPECT_EQ(lay.total_dim(), 30);
  for (int i = 0; i < 30; ++i) {
    auto d = lay.digits(i);
    EXPECT_EQ(d, testing::digits_of(i, {2, 3, 5}));
    EXPECT_EQ(lay.flat_index(d), i);
  }
}

TEST(Layout, RejectsDuplicatesAndUnknownLabels) {
  EXPECT_THROW(SystemLayout({{"a", 2}, {"a", 2}}), LayoutError);
  EXPECT_THROW(SystemLayout({{"a", 0}}), LayoutError);
  SystemLayout lay = SystemLayout::qubits({"a", "b"});
  EXPECT_THROW(lay.index_of("z"), LayoutError);
  EXPECT_THROW(embed(pauli(1), lay, {"z"}), LayoutError);
  EXPECT_THROW(embed(pauli(1), lay, {"a", "b"}), LayoutError);  // 2x2 on a 4-dim support
}

TEST(Embed, MatchesElementwiseOracle) {
  Gen gen(11);
  SystemLayout lay({{"a", 2}, {"b", 3}, {"c", 2}, {"d", 3}});
  const std::vector<int> dims{2, 3, 2, 3};
  for (int trial = 0; trial < 6; ++trial) {
    std::vector<std::string> labels{"a", "b", "c", "d"};
    const int i = gen.integer(0, 3);
    int j = gen.integer(0, 3);
    if (j == i) j = (i + 1) % 4;
    Matrix local = gen.complex_matrix(dims[i] * dims[j], dims[i] * dims[j]);
    Matrix got = embed(local, lay, {labels[i], labels[j]}).dense();
    EXPECT_LT(max_abs(got - testing::embed_oracle(local, dims, {i, j})), 1e-14);
  }
}

TEST(PartialTrace, MatchesOracleAndKeepsOrder) {
  Gen gen(12);
  SystemLayout lay({{"a", 2}, {"b", 3}, {"c", 2}});
  Matrix rho = gen.state(12);
  DensityMatrix dm(lay, rho);
  for (std::vector<int> keep : {std::vector<int>{0}, {2, 0}, {1, 2}, {2, 1, 0}}) {
    std::vector<std::string> names;
    for (int k : keep) names.push_back(lay.factors()[k].label);
    Matrix got = partial_trace(dm, names).data();
    EXPECT_LT(max_abs(got - testing::partial_trace_oracle(rho, {2, 3, 2}, keep)), 1e-14);
  }
}

TEST(PartialTranspose, IsAnInvolutionAndPreservesTrace) {
  Gen gen(13);
  SystemLayout lay = SystemLayout::qubits({"a", "b", "c"});
  Matrix rho = gen.state(8);
  Matrix pt = partial_transpose(rho, lay, {"b"});
  EXPECT_NEAR(std::abs(pt.trace() - rho.trace()), 0.0, 1e-14);
  EXPECT_LT(max_abs(partial_transpose(pt, lay, {"b"}) - rho), 1e-15);
}

TEST(DensityMatrix, ValidatesInvariants) {
  SystemLayout lay = SystemLayout::qubits({"a"});
  Matrix bad_trace = Matrix::Identity(2, 2);
  EXPECT_THROW(DensityMatrix(lay, bad_trace), InvariantViolation);
  Matrix not_herm = Matrix::Identity(2, 2) / 2.0;
  not_herm(0, 1) = 0.1;
  EXPECT_THROW(DensityMatrix(lay, not_herm), InvariantViolation);
  Matrix negative = Matrix::Zero(2, 2);
  negative(0, 0) = 1.5;
  negative(1, 1) = -0.5;
  EXPECT_THROW(DensityMatrix(lay, negative), InvariantViolation);
  EXPECT_THROW(DensityMatrix(lay, Matrix::Identity(4, 4) / 4.0), LayoutError);
  EXPECT_NO_THROW(DensityMatrix::maximally_mixed(lay));
}

TEST(Bell, StatesAreOrthonormalAndOmegaIsFirst) {
  for (int i = 0; i < 4; ++i)
    for (int j = 0; j < 4; ++j)
      EXPECT_NEAR(std::abs(bell_state(i).dot(bell_state(j))), i == j ? 1.0 : 0.0, 1e-15);
  EXPECT_LT(max_abs(omega() - bell_state(0) * bell_state(0).adjoint()), 1e-15);
}

TEST(Werner, FidelityAndTwirlInvariance) {
  for (double f : {0.25, 0.5, 0.96, 1.0}) {
    DensityMatrix w = werner_state(f);
    EXPECT_NEAR(fidelity_with_omega(w), f, 1e-15);
    // U (x) conj(U) invariance for a few unitaries.
    Gen gen(14);
    Matrix u = gen.unitary(2);
    Matrix uu = kron(u, u.conjugate());
    EXPECT_LT(max_abs(uu * w.data() * uu.adjoint() - w.data()), 1e-14);
  }
  EXPECT_THROW(werner_state(1.2), std::domain_error);
}

TEST(Entanglement, ConcurrenceMatchesWoottersOracle) {
  Gen gen(15);
  SystemLayout lay = SystemLayout::qubits({"A", "B"});
  for (int trial = 0; trial < 40; ++trial) {
    Matrix rho = gen.state(4, trial % 4 + 1);
    DensityMatrix dm(lay, rho);
    const double c = testing::concurrence_oracle(rho);
    EXPECT_NEAR(concurrence(dm), c, 1e-7);
    const double x = (1.0 + std::sqrt(1.0 - c * c)) / 2.0;
    EXPECT_NEAR(eof(dm), testing::binary_entropy(x), 1e-6);
  }
}

TEST(Entanglement, ReferenceValues) {
  SystemLayout lay = SystemLayout::qubits({"A", "B"});
  DensityMatrix bell(lay, omega());
  EXPECT_NEAR(eof(bell), 1.0, 1e-12);
  EXPECT_NEAR(negativity(bell, {"B"}), 0.5, 1e-12);
  EXPECT_NEAR(log_negativity(bell, {"B"}), 1.0, 1e-12);
  DensityMatrix mixed = DensityMatrix::maximally_mixed(lay);
  EXPECT_NEAR(eof(mixed), 0.0, 1e-12);
  EXPECT_NEAR(entropy(mixed), 2.0, 1e-12);
  EXPECT_NEAR(entropy(bell), 0.0, 1e-10);
  // Werner states are entangled iff f > 1/2; concurrence = 2f - 1 there.
  for (double f : {0.3, 0.5, 0.7, 0.9})
    EXPECT_NEAR(concurrence(werner_state(f)), std::max(0.0, 2 * f - 1), 1e-10);
}

TEST(Norms, TraceNormAndDistance) {
  Matrix d = Matrix::Zero(2, 2);
  d(0, 0) = 0.5;
  d(1, 1) = -0.25;
  EXPECT_NEAR(trace_norm(d), 0.75, 1e-15);
  Gen gen(16);
  Matrix a = gen.state(3), b = gen.state(3);
  EXPECT_NEAR(trace_distance(a, b), trace_distance(b, a), 1e-15);
  EXPECT_NEAR(trace_distance(a, a), 0.0, 1e-15);
}

TEST(Random, StatesAreValidAndSeeded) {
  SystemLayout lay({{"a", 3}, {"b", 2}});
  std::mt19937_64 r1(5), r2(5);
  auto s1 = random_state(lay, r1);
  auto s2 = random_state(lay, r2);
  EXPECT_EQ(s1.data(), s2.data());
  EXPECT_EQ(state_violation(s1.data()), "");
  auto p = random_pure_state(lay, r1);
  EXPECT_NEAR((p.data() * p.data()).trace().real(), 1.0, 1e-12);
}

TEST(Kraus, CompletenessOfRandomIsometryBlocks) {
  Gen gen(17);
  for (int trial = 0; trial < 10; ++trial) {
    auto ks = gen.kraus_set(gen.integer(2, 4), gen.integer(1, 4));
    EXPECT_LT(kraus_completeness_error(ks), 1e-12);
    Matrix rho = gen.state(static_cast<int>(ks[0].rows()));
    Matrix out = apply_kraus(ks, rho);
    EXPECT_NEAR(std::abs(out.trace() - 1.0), 0.0, 1e-12);
    EXPECT_EQ(state_violation(out, 1e-10), "");
  }
}

}  // namespace
}  // namespace disq
