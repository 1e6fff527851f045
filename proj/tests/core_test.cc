//
// Copyright 2026 The dppo Authors.
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
//

#include <cmath>
#include <limits>
#include <random>
#include <stdexcept>

#include <Eigen/Dense>

#include "dppo/core/bandit.h"
#include "dppo/core/bandit_io.h"
#include "dppo/core/exact.h"
#include "dppo/core/policy.h"
#include "gmock/gmock.h"
#include "gtest/gtest.h"
#include "test_util.h"

namespace dppo {
namespace {

using ::dppo::testing::FiniteDifference;
using ::dppo::testing::MakeBandit;
using ::dppo::testing::RandomBandit;
using ::dppo::testing::RandomLogLinear;
using ::dppo::testing::RandomTabular;
using ::dppo::testing::RandomVector;
using ::dppo::testing::ReferenceSoftmax;
using ::dppo::testing::ReferenceValue;
using ::dppo::testing::RelativeError;
using ::testing::DoubleNear;
using ::testing::ElementsAre;
using ::testing::HasSubstr;

TEST(ContextualBanditTest, RejectsRhoThatDoesNotSumToOne) {
  Eigen::VectorXd rho(2);
  rho << 0.5, 0.5 + 1e-9;
  auto bandit = ContextualBandit::Create(rho, Eigen::MatrixXd::Zero(2, 2), 1.0);
  EXPECT_EQ(bandit.status().code(), absl::StatusCode::kInvalidArgument);
}

TEST(ContextualBanditTest, RejectsRewardOutsideBound) {
  Eigen::MatrixXd rewards(1, 2);
  rewards << 1.5, 0.0;
  auto bandit =
      ContextualBandit::Create(Eigen::VectorXd::Ones(1), rewards, 1.0);
  EXPECT_THAT(bandit.status().message(), HasSubstr("r_max"));
}

TEST(ContextualBanditTest, RejectsNegativeProbabilityAndShapeMismatch) {
  Eigen::VectorXd rho(2);
  rho << 1.5, -0.5;
  EXPECT_FALSE(
      ContextualBandit::Create(rho, Eigen::MatrixXd::Zero(2, 2), 1.0).ok());
  EXPECT_FALSE(ContextualBandit::Create(Eigen::VectorXd::Ones(1),
                                        Eigen::MatrixXd::Zero(2, 2), 1.0)
                   .ok());
  EXPECT_FALSE(ContextualBandit::Create(Eigen::VectorXd::Ones(1),
                                        Eigen::MatrixXd::Zero(1, 2), 0.0)
                   .ok());
}

TEST(ContextualBanditTest, RewardIndexOutOfRangeThrows) {
  const ContextualBandit b = MakeBandit({1.0}, {{0.2, 0.3}});
  EXPECT_THROW(b.reward(0, 2), std::out_of_range);
  EXPECT_THROW(b.reward(-1, 0), std::out_of_range);
}

TEST(ContextualBanditTest, OptimalValueUsesPerStateMaximum) {
  const ContextualBandit b =
      MakeBandit({0.25, 0.75}, {{0.1, 0.9, -0.2}, {0.4, 0.4, -1.0}});
  EXPECT_DOUBLE_EQ(b.OptimalValue(), 0.25 * 0.9 + 0.75 * 0.4);
  EXPECT_EQ(b.BestAction(0), 1);
  EXPECT_EQ(b.BestAction(1), 0);  // lowest index on ties
}

TEST(PolicyTest, UniformAtZeroParameters) {
  const Policy p = Policy::TabularSoftmax(1, 2);
  EXPECT_THAT(p.ActionProbabilities(0), ElementsAre(0.5, 0.5));
}

TEST(PolicyTest, TwoActionsWithLogThreeLogit) {
  auto p = Policy::TabularSoftmax(1, 2).WithTheta(
      Eigen::Vector2d(std::log(3.0), 0.0));
  ASSERT_TRUE(p.ok());
  const Eigen::VectorXd probs = p->ActionProbabilities(0);
  EXPECT_THAT(probs(0), DoubleNear(0.75, 1e-15));
  EXPECT_THAT(probs(1), DoubleNear(0.25, 1e-15));
}

TEST(PolicyTest, LogLinearAtZeroIsUniform) {
  std::mt19937_64 gen(3);
  const Policy p = Policy::LogLinear(testing::RandomFeatures(gen, 3, 5, 4));
  for (int x = 0; x < 3; ++x) {
    for (int y = 0; y < 5; ++y) {
      EXPECT_DOUBLE_EQ(p.ActionProbabilities(x)(y), 0.2);
    }
  }
}

TEST(PolicyTest, ProbabilitiesMatchReferenceSoftmaxAndNormalize) {
  std::mt19937_64 gen(11);
  for (int trial = 0; trial < 40; ++trial) {
    const int nx = 1 + trial % 4;
    const int ny = 2 + trial % 6;
    const Policy p = trial % 2 ? RandomTabular(gen, nx, ny)
                               : RandomLogLinear(gen, nx, ny, 3);
    for (int x = 0; x < nx; ++x) {
      Eigen::VectorXd logits(ny);
      for (int y = 0; y < ny; ++y) {
        logits(y) = p.features().Feature(x, y).dot(p.theta());
      }
      const Eigen::VectorXd got = p.ActionProbabilities(x);
      EXPECT_LE((got - ReferenceSoftmax(logits)).cwiseAbs().maxCoeff(), 1e-14);
      EXPECT_LE(std::abs(got.sum() - 1.0), 1e-12);
      EXPECT_GE(got.minCoeff(), 0.0);
    }
  }
}

TEST(PolicyTest, HugeLogitsDoNotOverflow) {
  auto p = Policy::TabularSoftmax(1, 3).WithTheta(
      Eigen::Vector3d(1000.0, 999.0, -1000.0));
  ASSERT_TRUE(p.ok());
  const Eigen::VectorXd probs = p->ActionProbabilities(0);
  EXPECT_TRUE(probs.allFinite());
  EXPECT_NEAR(probs(0), 1.0 / (1.0 + std::exp(-1.0)), 1e-12);
  EXPECT_LE(std::abs(probs.sum() - 1.0), 1e-12);
  EXPECT_TRUE(std::isfinite(p->LogProbability(0, 2)));
}

TEST(PolicyTest, TranslationInvariancePerState) {
  std::mt19937_64 gen(5);
  for (int trial = 0; trial < 20; ++trial) {
    const Policy p = RandomTabular(gen, 3, 4);
    const int x = trial % 3;
    Eigen::VectorXd shift = Eigen::VectorXd::Zero(p.dim());
    shift.segment(x * 4, 4).setConstant(-7.25 + trial);
    const Policy q = p.Shifted(shift);
    for (int s = 0; s < 3; ++s) {
      EXPECT_LE((q.ActionProbabilities(s) - p.ActionProbabilities(s))
                    .cwiseAbs()
                    .maxCoeff(),
                1e-12);
    }
  }
}

TEST(PolicyTest, InvalidIndicesThrow) {
  const Policy p = Policy::TabularSoftmax(2, 3);
  EXPECT_THROW(p.ActionProbabilities(2), std::out_of_range);
  EXPECT_THROW(p.Score(0, 3), std::out_of_range);
  EXPECT_THROW(p.LogProbability(-1, 0), std::out_of_range);
  EXPECT_THROW(p.Shifted(Eigen::VectorXd::Zero(5)), std::invalid_argument);
  EXPECT_FALSE(p.WithTheta(Eigen::VectorXd::Zero(5)).ok());
}

TEST(PolicyTest, TabularScoreAtUniform) {
  const Policy p = Policy::TabularSoftmax(2, 4);
  const Eigen::VectorXd s = p.Score(1, 2);
  EXPECT_THAT(s, ElementsAre(0.0, 0.0, 0.0, 0.0, -0.25, -0.25, 0.75, -0.25));
}

TEST(PolicyTest, TabularScoreBlockIsIndicatorMinusPolicy) {
  std::mt19937_64 gen(9);
  const Policy p = RandomTabular(gen, 3, 4);
  for (int x = 0; x < 3; ++x) {
    const Eigen::VectorXd pi = p.ActionProbabilities(x);
    for (int y = 0; y < 4; ++y) {
      Eigen::VectorXd want = Eigen::VectorXd::Zero(12);
      want.segment(x * 4, 4) = -pi;
      want(x * 4 + y) += 1.0;
      EXPECT_LE((p.Score(x, y) - want).cwiseAbs().maxCoeff(), 1e-15);
    }
  }
}

TEST(PolicyTest, ScoreIsMeanZeroUnderPolicy) {
  std::mt19937_64 gen(17);
  for (int trial = 0; trial < 30; ++trial) {
    const int nx = 1 + trial % 3;
    const int ny = 2 + trial % 5;
    const Policy p = trial % 2 ? RandomTabular(gen, nx, ny, 3.0)
                               : RandomLogLinear(gen, nx, ny, 4);
    for (int x = 0; x < nx; ++x) {
      const Eigen::VectorXd pi = p.ActionProbabilities(x);
      Eigen::VectorXd mean = Eigen::VectorXd::Zero(p.dim());
      for (int y = 0; y < ny; ++y) mean += pi(y) * p.Score(x, y);
      EXPECT_LE(mean.cwiseAbs().maxCoeff(), 1e-12);
    }
  }
}

TEST(PolicyTest, LogLinearScoreMatchesFiniteDifferencesOfLogProbability) {
  std::mt19937_64 gen(23);
  for (int trial = 0; trial < 10; ++trial) {
    const Policy p = RandomLogLinear(gen, 2, 4, 3);
    for (int x = 0; x < 2; ++x) {
      for (int y = 0; y < 4; ++y) {
        const Eigen::VectorXd fd = FiniteDifference(
            [&](const Eigen::VectorXd& t) {
              return p.WithTheta(t)->LogProbability(x, y);
            },
            p.theta());
        EXPECT_LE(RelativeError(p.Score(x, y), fd), 1e-6);
      }
    }
  }
}

// E_{y ~ pi}||score||^2 = 1 - ||pi_x||^2 <= 1 - 1/|Y| for the tabular family;
// this is the form in which G bounds the estimator's second moment.
TEST(PolicyTest, TabularScoreSecondMomentBoundedByG) {
  std::mt19937_64 gen(29);
  for (int trial = 0; trial < 30; ++trial) {
    const int ny = 2 + trial % 5;
    const Policy p = RandomTabular(gen, 2, ny, 3.0);
    const double g = p.Constants(1.0).g_bound;
    for (int x = 0; x < 2; ++x) {
      const Eigen::VectorXd pi = p.ActionProbabilities(x);
      double second = 0.0;
      for (int y = 0; y < ny; ++y) second += pi(y) * p.Score(x, y).squaredNorm();
      EXPECT_NEAR(second, 1.0 - pi.squaredNorm(), 1e-12);
      EXPECT_LE(second, g * g + 1e-12);
    }
  }
}

TEST(PolicyTest, TabularScoreNormEqualsGAtUniform) {
  for (int ny = 2; ny <= 6; ++ny) {
    const Policy p = Policy::TabularSoftmax(1, ny);
    for (int y = 0; y < ny; ++y) {
      EXPECT_NEAR(p.Score(0, y).norm(), std::sqrt(1.0 - 1.0 / ny), 1e-15);
    }
  }
}

// The pointwise tabular bound sqrt(1 - 1/|Y|) holds only at the uniform
// policy: a rarely chosen action has ||score|| close to sqrt(2).
TEST(PolicyTest, TabularScoreNormExceedsGAwayFromUniform) {
  Eigen::VectorXd theta(2);
  theta << 0.0, 20.0;
  const Policy p = *Policy::TabularSoftmax(1, 2).WithTheta(theta);
  const double g = p.Constants(1.0).g_bound;
  EXPECT_GT(p.Score(0, 0).norm(), g);
  EXPECT_NEAR(p.Score(0, 0).norm(), std::sqrt(2.0), 1e-8);
}

TEST(PolicyTest, LogLinearScoreBoundedByTwiceFeatureBound) {
  std::mt19937_64 gen(31);
  for (int trial = 0; trial < 20; ++trial) {
    const Policy p = RandomLogLinear(gen, 3, 4, 3);
    const double g = p.Constants(1.0).g_bound;
    EXPECT_DOUBLE_EQ(g, 2.0 * p.features().bound());
    for (int x = 0; x < 3; ++x) {
      for (int y = 0; y < 4; ++y) EXPECT_LE(p.Score(x, y).norm(), g);
    }
  }
}

TEST(PolicyTest, TabularConstants) {
  const PolicyConstants c = Policy::TabularSoftmax(3, 4).Constants(1.0);
  EXPECT_DOUBLE_EQ(c.g_bound, std::sqrt(0.75));
  EXPECT_DOUBLE_EQ(c.f_bound, 1.0);
  EXPECT_DOUBLE_EQ(c.beta, 1.0);
  EXPECT_NEAR(c.smoothness, 3.5, 1e-15);
}

TEST(PolicyTest, LogLinearConstantsFollowFeatureBound) {
  auto features = FeatureMap::Dense(1, 2, 2, {0.6, 0.8, 0.0, 0.5}, 1.0);
  ASSERT_TRUE(features.ok());
  const Policy p =
      Policy::LogLinear(std::make_shared<const FeatureMap>(*features));
  const PolicyConstants c = p.Constants(2.0);
  EXPECT_DOUBLE_EQ(c.g_bound, 2.0);
  EXPECT_DOUBLE_EQ(c.beta, 1.0);
  EXPECT_DOUBLE_EQ(c.smoothness, 2.0 * 2.0 * (4.0 + 1.0));
}

TEST(FeatureMapTest, RejectsFeaturesAboveDeclaredBound) {
  auto features = FeatureMap::Dense(1, 2, 2, {0.6, 0.8, 1.0, 0.5}, 1.0);
  EXPECT_EQ(features.status().code(), absl::StatusCode::kInvalidArgument);
  EXPECT_FALSE(FeatureMap::Dense(1, 2, 2, {0.0, 0.0, 0.0}).ok());
}

TEST(ExactValueTest, SingleStateHandComputed) {
  const ContextualBandit b = MakeBandit({1.0}, {{1.0, -1.0}});
  auto p = Policy::TabularSoftmax(1, 2).WithTheta(
      Eigen::Vector2d(std::log(3.0), 0.0));
  EXPECT_NEAR(ExactValue(*p, b), 0.5, 1e-15);
}

TEST(ExactValueTest, ConstantRewardGivesConstant) {
  const ContextualBandit b =
      MakeBandit({0.4, 0.6}, {{0.3, 0.3, 0.3}, {0.3, 0.3, 0.3}});
  std::mt19937_64 gen(1);
  EXPECT_NEAR(ExactValue(RandomTabular(gen, 2, 3), b), 0.3, 1e-15);
}

TEST(ExactValueTest, GreedyTableAttainsOptimum) {
  const ContextualBandit b = testing::Bandit5x4();
  EXPECT_NEAR(ExactValue(GreedyTable(b), b), b.OptimalValue(), 1e-15);
}

TEST(ExactValueTest, MatchesReferenceEnumeration) {
  std::mt19937_64 gen(41);
  for (int trial = 0; trial < 20; ++trial) {
    const ContextualBandit b = RandomBandit(gen, 3, 4);
    const Policy p = trial % 2 ? RandomTabular(gen, 3, 4)
                               : RandomLogLinear(gen, 3, 4, 2);
    EXPECT_NEAR(ExactValue(p, b), ReferenceValue(p, b), 1e-14);
  }
}

TEST(ExactGradientTest, MatchesFiniteDifferences) {
  std::mt19937_64 gen(43);
  for (int trial = 0; trial < 20; ++trial) {
    const int nx = 1 + trial % 5;
    const int ny = 2 + trial % 5;
    const ContextualBandit b = RandomBandit(gen, nx, ny);
    const Policy p = trial % 2 ? RandomTabular(gen, nx, ny)
                               : RandomLogLinear(gen, nx, ny, 3);
    const Eigen::VectorXd fd = FiniteDifference(
        [&](const Eigen::VectorXd& t) {
          return ReferenceValue(*p.WithTheta(t), b);
        },
        p.theta());
    EXPECT_LE(RelativeError(ExactGradient(p, b), fd), 1e-6);
  }
}

TEST(ExactGradientTest, VanishesForUniformRewards) {
  const ContextualBandit b = MakeBandit({0.5, 0.5}, {{0.2, 0.2}, {-0.4, -0.4}});
  std::mt19937_64 gen(2);
  EXPECT_LE(ExactGradient(RandomTabular(gen, 2, 2), b).norm(), 1e-15);
}

TEST(ExactGradientTest, NormDecreasesAlongSaturatingPath) {
  const ContextualBandit b = testing::Bandit5x4();
  const PolicyTable greedy = GreedyTable(b);
  Eigen::VectorXd direction(20);
  for (int x = 0; x < 5; ++x) {
    for (int y = 0; y < 4; ++y) direction(x * 4 + y) = greedy(x, y);
  }
  double previous = std::numeric_limits<double>::infinity();
  for (double scale = 1.0; scale <= 40.0; scale += 1.0) {
    const double norm =
        ExactGradient(*Policy::TabularSoftmax(5, 4).WithTheta(scale * direction),
                      b)
            .norm();
    EXPECT_LT(norm, previous);
    previous = norm;
  }
  EXPECT_LT(previous, 1e-12);
}

TEST(ExactAdvantageTest, UniformPolicyHandComputed) {
  const ContextualBandit b = MakeBandit({1.0}, {{1.0, -1.0}});
  EXPECT_DOUBLE_EQ(ExactAdvantage(Policy::TabularSoftmax(1, 2), b, 0, 0), 1.0);
}

TEST(ExactAdvantageTest, NearlyDeterministicSelfAdvantageVanishes) {
  const ContextualBandit b = MakeBandit({1.0}, {{0.3, -0.2, 0.9}});
  auto p = Policy::TabularSoftmax(1, 3).WithTheta(
      Eigen::Vector3d(0.0, 800.0, 0.0));
  EXPECT_NEAR(ExactAdvantage(*p, b, 0, 1), 0.0, 1e-15);
}

TEST(ExactAdvantageTest, CenteredUnderPolicy) {
  std::mt19937_64 gen(47);
  const ContextualBandit b = RandomBandit(gen, 3, 5);
  const Policy p = RandomTabular(gen, 3, 5);
  for (int x = 0; x < 3; ++x) {
    const Eigen::VectorXd pi = p.ActionProbabilities(x);
    double mean = 0.0;
    for (int y = 0; y < 5; ++y) mean += pi(y) * ExactAdvantage(p, b, x, y);
    EXPECT_NEAR(mean, 0.0, 1e-15);
  }
}

TEST(PerformanceDifferenceTest, IdenticalPoliciesGiveZero) {
  std::mt19937_64 gen(53);
  const ContextualBandit b = RandomBandit(gen, 2, 3);
  const PolicyTable t = RandomTabular(gen, 2, 3).Table();
  EXPECT_NEAR(PerformanceDifference(t, t, b), 0.0, 1e-15);
}

TEST(PerformanceDifferenceTest, EqualsValueDifference) {
  std::mt19937_64 gen(59);
  for (int trial = 0; trial < 50; ++trial) {
    const ContextualBandit b = RandomBandit(gen, 2 + trial % 3, 2 + trial % 4);
    const PolicyTable a =
        RandomTabular(gen, b.num_states(), b.num_actions()).Table();
    const PolicyTable c =
        RandomTabular(gen, b.num_states(), b.num_actions()).Table();
    EXPECT_NEAR(PerformanceDifference(a, c, b),
                ExactValue(a, b) - ExactValue(c, b), 1e-12);
  }
}

TEST(PerformanceDifferenceTest, OptimalVersusUniformIsTheGap) {
  const ContextualBandit b = testing::Bandit5x4();
  const PolicyTable uniform = UniformTable(5, 4);
  EXPECT_NEAR(PerformanceDifference(GreedyTable(b), uniform, b),
              b.OptimalValue() - ExactValue(uniform, b), 1e-12);
}

TEST(CoverageTest, DeterministicTargetUniformBase) {
  const ContextualBandit b = testing::Bandit5x4();
  EXPECT_DOUBLE_EQ(CoverageCoefficient(GreedyTable(b), UniformTable(5, 4)),
                   4.0);
}

TEST(CoverageTest, IdenticalDistributionsGiveOne) {
  std::mt19937_64 gen(61);
  const PolicyTable t = RandomTabular(gen, 3, 3).Table();
  EXPECT_DOUBLE_EQ(CoverageCoefficient(t, t), 1.0);
}

TEST(CoverageTest, MissingSupportIsInfinite) {
  PolicyTable target(1, 2);
  target << 0.5, 0.5;
  PolicyTable base(1, 2);
  base << 1.0, 0.0;
  EXPECT_EQ(CoverageCoefficient(target, base),
            std::numeric_limits<double>::infinity());
}

TEST(BanditIoTest, ParsesTabularInstance) {
  auto instance = ParseBanditInstance(R"({
    "num_states": 2, "num_actions": 2, "rho": [0.25, 0.75],
    "rewards": [1, 0, -0.5, 0.5], "r_max": 1})");
  ASSERT_TRUE(instance.ok()) << instance.status();
  EXPECT_DOUBLE_EQ(instance->bandit.reward(1, 0), -0.5);
  EXPECT_EQ(instance->features, nullptr);
}

TEST(BanditIoTest, ParsesFeatures) {
  auto instance = ParseBanditInstance(R"({
    "num_states": 1, "num_actions": 2, "rho": [1],
    "rewards": [0.5, -0.5], "r_max": 1,
    "features": {"dim": 2, "values": [1, 0, 0, 1]}})");
  ASSERT_TRUE(instance.ok()) << instance.status();
  ASSERT_NE(instance->features, nullptr);
  EXPECT_EQ(instance->features->dim(), 2);
  EXPECT_DOUBLE_EQ(instance->features->bound(), 1.0);
}

TEST(BanditIoTest, RejectsMalformedInput) {
  EXPECT_FALSE(ParseBanditInstance("{").ok());
  EXPECT_FALSE(ParseBanditInstance(R"({"num_states": 1, "num_actions": 2,
      "rho": [1], "rewards": [0.5], "r_max": 1})")
                   .ok());
  EXPECT_FALSE(ParseBanditInstance(R"({"num_states": 1, "num_actions": 1,
      "rho": [1], "rewards": [0.5], "r_max": 1,
      "features": {"dim": 2, "values": [1]}})")
                   .ok());
  EXPECT_EQ(LoadBanditInstance("/nonexistent/instance.json").status().code(),
            absl::StatusCode::kNotFound);
}

}  // namespace
}  // namespace dppo
