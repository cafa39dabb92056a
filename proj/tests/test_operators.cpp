// Copyright 2026 The cstomo Authors
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

#include <bit>
#include <cmath>
#include <iostream>
#include <numbers>
#include <thread>
#include <vector>

#include <boost/random/uniform_real_distribution.hpp>

#include "cstomo/error.hpp"
#include "cstomo/operators.hpp"
#include "cstomo/states.hpp"
#include "support.hpp"

namespace cstomo {
namespace {

constexpr double kPi = std::numbers::pi;

// Amplitudes of the theta-pattern vector written out entry by entry.
Vector pattern_vector_oracle(double theta, unsigned sign_mask, int n) {
  const Eigen::Index d = Eigen::Index{1} << n;
  Vector z(d);
  for (Eigen::Index idx = 0; idx < d; ++idx) {
    Complex amp = 1.0;
    for (int j = 0; j < n; ++j) {
      const bool bit = (idx >> (n - 1 - j)) & 1;
      const bool minus = (sign_mask >> (n - 1 - j)) & 1;
      if (bit) amp *= (minus ? -1.0 : 1.0) * std::polar(1.0, theta);
    }
    z(idx) = amp / std::sqrt(static_cast<double>(d));
  }
  return z;
}

std::vector<Sign> signs_from_mask(unsigned mask, int n) {
  std::vector<Sign> s;
  for (int j = 0; j < n; ++j) s.push_back(((mask >> (n - 1 - j)) & 1) ? Sign::kMinus : Sign::kPlus);
  return s;
}

Eigen::Index rank_oracle(const OperatorSet& set) {
  const Eigen::Index d = set.dim();
  Eigen::MatrixXd rows(static_cast<Eigen::Index>(set.size()), 2 * d * d);
  for (std::size_t i = 0; i < set.size(); ++i) {
    Matrix m = realize(set.descriptors[i]);
    Eigen::Map<const Eigen::VectorXcd> flat(m.data(), d * d);
    rows.row(static_cast<Eigen::Index>(i)) << flat.real().transpose(), flat.imag().transpose();
  }
  Eigen::JacobiSVD<Eigen::MatrixXd> svd(rows);
  svd.setThreshold(1e-10);
  return svd.rank();
}

TEST(LocalBasis, Examples) {
  Vector plus = local_basis_vector(0.0, Sign::kPlus);
  EXPECT_NEAR(std::abs(plus(0) - 1.0 / std::numbers::sqrt2), 0.0, 1e-15);
  EXPECT_NEAR(std::abs(plus(1) - 1.0 / std::numbers::sqrt2), 0.0, 1e-15);
  Vector v = local_basis_vector(kPi / 2, Sign::kMinus);
  EXPECT_NEAR(std::abs(v(1) - Complex(0.0, -1.0 / std::numbers::sqrt2)), 0.0, 1e-15);
}

TEST(LocalBasis, OrthonormalForRandomTheta) {
  Rng rng(1);
  boost::random::uniform_real_distribution<double> u(-10.0, 10.0);
  for (int t = 0; t < 50; ++t) {
    const double theta = u(rng);
    Vector p = local_basis_vector(theta, Sign::kPlus);
    Vector m = local_basis_vector(theta, Sign::kMinus);
    EXPECT_NEAR(std::abs(p.dot(m)), 0.0, 1e-15);
    EXPECT_NEAR(p.norm(), 1.0, 1e-15);
  }
}

TEST(Realize, ComputationalAllZero) {
  Matrix m = realize(Computational{{0, 0, 0}});
  Matrix expect = Matrix::Zero(8, 8);
  expect(0, 0) = 1.0;
  EXPECT_EQ(m, expect);
}

TEST(Realize, ComputationalIndexIsMostSignificantFirst) {
  Matrix m = realize(Computational{{1, 0, 0}});
  EXPECT_EQ(m(4, 4), Complex(1.0, 0.0));
  EXPECT_NEAR(m.trace().real(), 1.0, 0.0);
}

TEST(Realize, ThetaPatternAllPlusAtZero) {
  Matrix m = realize(ThetaPattern{0.0, {Sign::kPlus, Sign::kPlus}});
  EXPECT_LE((m - Matrix::Constant(4, 4, 0.25)).norm(), 1e-15);
  EXPECT_NEAR(m.trace().real(), 1.0, 1e-15);
}

TEST(Realize, FactorMatchesOuterProductOracle) {
  Rng rng(2);
  boost::random::uniform_real_distribution<double> u(0.0, 2 * kPi);
  for (int n = 1; n <= 4; ++n) {
    for (unsigned mask = 0; mask < (1u << n); ++mask) {
      const double theta = u(rng);
      ThetaPattern tp{theta, signs_from_mask(mask, n)};
      auto z = factor(tp);
      ASSERT_TRUE(z.has_value());
      Vector oracle = pattern_vector_oracle(theta, mask, n);
      EXPECT_LE(((*z) - oracle).norm(), 1e-12);
      EXPECT_LE((outer(*z) - realize(tp)).norm(), 1e-12);
    }
  }
  EXPECT_FALSE(factor(MThetaPower{0.3, 2}).has_value());
  EXPECT_FALSE(factor(DenseOperator{Matrix::Identity(2, 2)}).has_value());
}

TEST(Realize, ProjectorProperties) {
  OperatorSet set = standard_set("full", 3);
  for (std::size_t i = 0; i < set.size(); ++i) {
    Matrix p = realize(set.descriptors[i]);
    EXPECT_NEAR(p.trace().real(), 1.0, 1e-12);
    EXPECT_LE((p * p - p).norm(), 1e-10) << "id " << i;
  }
}

TEST(Realize, RejectsWrongQubitCountAndBadInput) {
  EXPECT_THROW(realize(Computational{{0, 1}}, 3), DimensionError);
  EXPECT_THROW(realize(DenseOperator{Matrix::Identity(3, 3)}), InvalidArgument);
  Matrix nonherm = Matrix::Zero(2, 2);
  nonherm(0, 1) = 1.0;
  EXPECT_THROW(validate(DenseOperator{nonherm}), InvalidArgument);
  EXPECT_THROW(validate(Computational{{0, 2}}), InvalidArgument);
  EXPECT_THROW(validate(ThetaPattern{std::nan(""), {Sign::kPlus}}), InvalidArgument);
  EXPECT_THROW(validate(MThetaPower{0.0, 0}), InvalidArgument);
}

TEST(MTheta, ZeroIsPauliX) {
  EXPECT_LE((m_theta(0.0) - testing::pauli_x()).norm(), 1e-15);
  Matrix expect = std::cos(0.7) * testing::pauli_x() + std::sin(0.7) * testing::pauli_y();
  EXPECT_LE((m_theta(0.7) - expect).norm(), 1e-15);
}

TEST(MTheta, PowerIsInvolution) {
  Rng rng(3);
  boost::random::uniform_real_distribution<double> u(0.0, 2 * kPi);
  for (int n = 1; n <= 6; ++n) {
    Matrix m = m_theta_power(u(rng), n);
    EXPECT_LE((m * m - Matrix::Identity(m.rows(), m.cols())).norm(), 1e-9);
  }
}

TEST(MTheta, PowerEqualsSignedPatternSum) {
  Rng rng(4);
  boost::random::uniform_real_distribution<double> u(0.0, 2 * kPi);
  for (int n = 1; n <= 6; ++n) {
    const double theta = u(rng);
    const Eigen::Index d = Eigen::Index{1} << n;
    Matrix sum = Matrix::Zero(d, d);
    for (unsigned mask = 0; mask < (1u << n); ++mask) {
      const double sign = (std::popcount(mask) % 2 == 0) ? 1.0 : -1.0;
      sum += sign * outer(pattern_vector_oracle(theta, mask, n));
    }
    EXPECT_LE((m_theta_power(theta, n) - sum).norm(), 1e-10) << "n=" << n;
  }
}

TEST(MTheta, IdealExpectationIsCosine) {
  Matrix rho = ideal_density(6).matrix();
  for (int k = 0; k < 48; ++k) {
    const double theta = k * kPi / 24.0;
    EXPECT_NEAR((m_theta_power(theta, 6) * rho).trace().real(), std::cos(6 * theta), 1e-12);
  }
}

TEST(StandardSet, Counts) {
  EXPECT_EQ(standard_set("full", 6).size(), 3136u);
  EXPECT_EQ(standard_set("full", 2).size(), 196u);
  EXPECT_EQ(standard_set("fid14", 6).size(), 14u);
  EXPECT_EQ(standard_set("fid3", 6).size(), 3u);
  EXPECT_EQ(standard_set("photon8", 8).size(), 264u);
}

TEST(StandardSet, Errors) {
  EXPECT_THROW(standard_set("bogus", 4), InvalidArgument);
  EXPECT_THROW(standard_set("photon8", 6), InvalidArgument);
  EXPECT_THROW(standard_set("full", 0), InvalidArgument);
}

TEST(StandardSet, FullSettingsGroupByTheta) {
  OperatorSet set = standard_set("full", 3);
  set.check();
  for (std::size_t i = 0; i < set.size(); ++i) {
    ASSERT_TRUE(set.settings[i].has_value());
    EXPECT_EQ(*set.settings[i], static_cast<int>(i / 8));
    EXPECT_EQ(set.source_ids[i], i);
  }
  const auto& tp = std::get<ThetaPattern>(set.descriptors[8 * 5 + 3]);
  EXPECT_NEAR(tp.theta, 4 * kPi / 24.0, 1e-15);
  EXPECT_EQ(tp.signs, (std::vector<Sign>{Sign::kPlus, Sign::kMinus, Sign::kMinus}));
}

TEST(StandardSet, Fid14Angles) {
  OperatorSet set = standard_set("fid14", 4);
  for (int j = 0; j < 12; ++j) {
    const auto& m = std::get<MThetaPower>(set.descriptors[2 + static_cast<std::size_t>(j)]);
    EXPECT_NEAR(m.theta, 2 * kPi * j / 12.0, 1e-15);
    EXPECT_EQ(m.n, 4);
  }
  EXPECT_FALSE(set.settings[0].has_value());
}

TEST(StandardSet, Photon8Layout) {
  OperatorSet set = standard_set("photon8", 8);
  for (std::size_t i = 0; i < 256; ++i) EXPECT_TRUE(std::holds_alternative<Computational>(set.descriptors[i]));
  for (int k = 0; k < 8; ++k)
    EXPECT_NEAR(std::get<MThetaPower>(set.descriptors[256 + static_cast<std::size_t>(k)]).theta, k * kPi / 8, 1e-15);
}

// The theta settings only reach products of I and M_theta on each qubit, so the
// span is (n/2 + 2) 2^n - 1 rather than min(count, 4^n).
TEST(StandardSet, FullSetRankReport) {
  for (int n = 1; n <= 3; ++n) {
    OperatorSet set = standard_set("full", n);
    const Eigen::Index rank = rank_oracle(set);
    const Eigen::Index full_rank = std::min<Eigen::Index>(static_cast<Eigen::Index>(set.size()), Eigen::Index{1} << (2 * n));
    std::cout << "full n=" << n << ": rank " << rank << " of " << full_rank << "\n";
    EXPECT_EQ(2 * rank, (n + 4) * (Eigen::Index{1} << n) - 2);
    if (n == 1) EXPECT_EQ(rank, full_rank);
  }
}

TEST(Witness, ReconstructsIdealProjector) {
  for (int n : {2, 4, 6, 8}) {
    const Eigen::Index d = Eigen::Index{1} << n;
    Matrix sum = Matrix::Zero(d, d);
    for (const auto& term : witness_decomposition(n)) sum += term.coefficient * realize(term.op);
    EXPECT_LE((sum - ideal_density(n).matrix()).norm(), 1e-10) << "n=" << n;
  }
}

TEST(Witness, TwoQubitBellForm) {
  using testing::pauli_x;
  using testing::pauli_y;
  Matrix p00 = realize(Computational{{0, 0}});
  Matrix p11 = realize(Computational{{1, 1}});
  Matrix expect = 0.5 * (p00 + p11 + 0.5 * (kron(pauli_x(), pauli_x()) - kron(pauli_y(), pauli_y())));
  Matrix sum = Matrix::Zero(4, 4);
  for (const auto& term : witness_decomposition(2)) sum += term.coefficient * realize(term.op);
  EXPECT_LE((sum - expect).norm(), 1e-14);
  Vector bell = Vector::Zero(4);
  bell(0) = bell(3) = 1.0 / std::numbers::sqrt2;
  EXPECT_LE((expect - outer(bell)).norm(), 1e-14);
}

TEST(Witness, SixQubitCoefficients) {
  auto terms = witness_decomposition(6);
  ASSERT_EQ(terms.size(), 8u);
  EXPECT_DOUBLE_EQ(terms[0].coefficient, 0.5);
  EXPECT_DOUBLE_EQ(terms[1].coefficient, 0.5);
  EXPECT_DOUBLE_EQ(terms[7].coefficient, 1.0 / 12.0);
  EXPECT_NEAR(std::get<MThetaPower>(terms[7].op).theta, kPi, 1e-15);
  EXPECT_DOUBLE_EQ(terms[2].coefficient, -1.0 / 12.0);
}

TEST(Witness, OddQubitCountRejected) {
  EXPECT_THROW(witness_decomposition(3), InvalidArgument);
  EXPECT_THROW(witness_decomposition(0), InvalidArgument);
}

TEST(OperatorSetType, CheckCatchesMixedQubitCounts) {
  OperatorSet set;
  set.n = 2;
  set.push_back(Computational{{0, 0}}, std::nullopt);
  set.push_back(Computational{{0, 0, 1}}, std::nullopt);
  EXPECT_THROW(set.check(), DimensionError);
}

TEST(RealizationCacheType, ConcurrentReadersSeeOneValue) {
  OperatorSet set = standard_set("full", 4);
  RealizationCache cache(set);
  std::vector<std::shared_ptr<const Matrix>> seen(8);
  {
    std::vector<std::jthread> pool;
    for (std::size_t t = 0; t < seen.size(); ++t)
      pool.emplace_back([&, t] {
        for (std::size_t i = 0; i < set.size(); ++i) cache.get(i);
        seen[t] = cache.get(100);
      });
  }
  for (const auto& p : seen) EXPECT_EQ(p.get(), seen[0].get());
  EXPECT_EQ(*seen[0], realize(set.descriptors[100]));
  EXPECT_THROW(cache.get(set.size()), InvalidArgument);
}

}  // namespace
}  // namespace cstomo
