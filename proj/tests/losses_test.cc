// Copyright 2026 The Typotrace Authors
//
// Licensed under the Apache License, Version 2.0 (the "License");
// you may not use this file except in compliance with the License.
// You may obtain a copy of the License at
//
//     https://www.apache.org/licenses/LICENSE-2.0
//
// Unless required by applicable law or agreed to in writing, software
// distributed under the License is distributed on an "AS IS" BASIS,
// WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
// See the License for the specific language governing permissions and
// limitations under the License.


#include "typotrace/losses.h"

#include <gtest/gtest.h>

#include <cmath>
#include <vector>

#include "test_support.h"
#include "typotrace/error.h"
#include "typotrace/util.h"

namespace typotrace {
namespace {

using S = std::span<const double>;

TEST(CosineTest, KnownValues) {
  const std::vector<double> u = {0.6, 0.8, 0.0};
  const std::vector<double> neg = {-0.6, -0.8, 0.0};
  const std::vector<double> perp = {0.0, 0.0, 1.0};
  EXPECT_NEAR(CosineSimilarity<double>(u, u), 1.0, 1e-15);
  EXPECT_NEAR(CosineSimilarity<double>(u, neg), -1.0, 1e-15);
  EXPECT_NEAR(CosineSimilarity<double>(u, perp), 0.0, 1e-15);
}

TEST(CosineTest, ZeroVectorIsDegenerate) {
  const std::vector<double> u = {1.0, 0.0};
  const std::vector<double> z = {0.0, 0.0};
  try {
    CosineSimilarity<double>(u, z);
    FAIL();
  } catch (const Error& e) {
    EXPECT_EQ(e.code(), ErrorCode::kDegenerateNorm);
  }
}

TEST(CosineTest, SquaredDistanceLinkOnUnitVectors) {
  Rng rng(4);
  for (int i = 0; i < 200; ++i) {
    const auto u = testing::RandomUnit(rng, 32);
    const auto v = testing::RandomUnit(rng, 32);
    double sq = 0;
    for (int j = 0; j < 32; ++j) sq += (u[j] - v[j]) * (u[j] - v[j]);
    EXPECT_NEAR(sq, 2.0 - 2.0 * CosineSimilarity<double>(u, v), 1e-6);
  }
}

TEST(TripletTest, KnownValues) {
  const LossConfig config;
  const std::vector<double> a = {1.0, 0.0};
  const std::vector<double> minus_a = {-1.0, 0.0};
  EXPECT_DOUBLE_EQ(TripletLoss<double>(a, a, minus_a, config), 0.0);
  EXPECT_DOUBLE_EQ(TripletLoss<double>(a, a, a, config), 0.2);

  // |a-p|^2 = 1.0, |a-n|^2 = 0.5.
  const std::vector<double> origin = {0.0, 0.0};
  const std::vector<double> p = {1.0, 0.0};
  const std::vector<double> n = {0.5, 0.5};
  EXPECT_NEAR(TripletLoss<double>(origin, p, n, config), 0.7, 1e-15);
}

TEST(TripletTest, InactiveHingeHasZeroGradient) {
  const std::vector<double> a = {1.0, 0.0};
  const std::vector<double> minus_a = {-1.0, 0.0};
  LossGradients<double> g;
  TripletLoss<double>(a, a, minus_a, LossConfig{}, &g);
  for (double v : g.anchor) EXPECT_EQ(v, 0.0);
  for (double v : g.positive) EXPECT_EQ(v, 0.0);
  for (double v : g.negatives[0]) EXPECT_EQ(v, 0.0);
}

TEST(NtXentTest, EqualSimilaritiesWithoutPositiveGiveLogBn) {
  LossConfig config;
  config.denominator_includes_positive = false;
  const std::vector<double> a = {1.0, 0.0, 0.0};
  const std::vector<double> p = {0.6, 0.8, 0.0};
  const std::vector<double> n1 = {0.6, 0.0, 0.8};
  const std::vector<double> n2 = {0.6, -0.8, 0.0};
  EXPECT_NEAR(NtXentLoss<double>(a, p, {S(n1)}, config), 0.0, 1e-12);
  EXPECT_NEAR(NtXentLoss<double>(a, p, {S(n1), S(n2)}, config), std::log(2.0), 1e-12);
}

TEST(NtXentTest, NegativesOnlyDenominatorCanGoNegative) {
  LossConfig config;
  config.temperature = 1.0;
  config.denominator_includes_positive = false;
  const std::vector<double> a = {1.0, 0.0};
  const std::vector<double> n = {-1.0, 0.0};
  EXPECT_NEAR(NtXentLoss<double>(a, a, {S(n)}, config), -2.0, 1e-12);
}

TEST(NtXentTest, SoftmaxFormClosedValue) {
  LossConfig config;
  config.temperature = 1.0;
  const std::vector<double> a = {1.0, 0.0};
  const std::vector<double> n = {-1.0, 0.0};
  EXPECT_NEAR(NtXentLoss<double>(a, a, {S(n)}, config), std::log1p(std::exp(-2.0)),
              1e-12);
  EXPECT_NEAR(NtXentLoss<double>(a, a, {S(n)}, config), 0.12693, 1e-5);
}

TEST(NtXentTest, LargeLogitsStayFinite) {
  LossConfig config;
  config.temperature = 1e-4;
  const std::vector<double> a = {1.0, 0.0};
  const std::vector<double> n = {-1.0, 0.0};
  const double loss = NtXentLoss<double>(a, a, {S(n)}, config);
  EXPECT_TRUE(std::isfinite(loss));
  EXPECT_GE(loss, 0.0);
}

TEST(NtXentTest, EmptyNegativesRejected) {
  const std::vector<double> a = {1.0, 0.0};
  try {
    NtXentLoss<double>(a, a, {}, LossConfig{});
    FAIL();
  } catch (const Error& e) {
    EXPECT_EQ(e.code(), ErrorCode::kEmptyNegatives);
  }
}

TEST(LossConfigTest, Validate) {
  LossConfig config;
  EXPECT_NO_THROW(config.Validate());
  config.temperature = 0.0;
  EXPECT_THROW(config.Validate(), Error);
}

TEST(LossGradientTest, FiniteDifferences) {
  Rng rng(77);
  for (int i = 0; i < 100; ++i) {
    const auto with = testing::CheckLossGradients(rng, 16, 8, true);
    EXPECT_LT(with.triplet, 1e-5) << i;
    EXPECT_LT(with.ntxent, 1e-5) << i;
    const auto without = testing::CheckLossGradients(rng, 16, 3, false);
    EXPECT_LT(without.ntxent, 1e-5) << i;
  }
}

TEST(LossGradientTest, FloatAgreesWithDouble) {
  Rng rng(5);
  const auto a = testing::RandomUnit(rng, 64);
  const auto p = testing::RandomUnit(rng, 64);
  const auto n = testing::RandomUnit(rng, 64);
  const std::vector<float> af(a.begin(), a.end()), pf(p.begin(), p.end()),
      nf(n.begin(), n.end());
  const LossConfig config;
  EXPECT_NEAR(NtXentLoss<float>(af, pf, {std::span<const float>(nf)}, config),
              NtXentLoss<double>(a, p, {S(n)}, config), 1e-4);
  EXPECT_NEAR(TripletLoss<float>(af, pf, nf, config),
              TripletLoss<double>(a, p, n, config), 1e-5);
}

}  // namespace
}  // namespace typotrace
