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
#include <set>
#include <sstream>
#include <string>

#include <Eigen/Dense>

#include "dppo/core/exact.h"
#include "dppo/trainer/batch.h"
#include "dppo/trainer/records_io.h"
#include "dppo/trainer/schedule.h"
#include "dppo/trainer/trainer.h"
#include "gmock/gmock.h"
#include "gtest/gtest.h"
#include "test_util.h"

namespace dppo {
namespace {

using ::dppo::testing::Bandit5x4;
using ::dppo::testing::MakeBandit;
using ::dppo::testing::RandomBandit;
using ::dppo::testing::RandomTabular;
using ::testing::HasSubstr;

constexpr double kInf = std::numeric_limits<double>::infinity();

// Takes a fixed step along the batch-mean of score * advantage, so the test
// only exercises the loop around the update.
class MeanScoreStep : public PrivUpdate {
 public:
  explicit MeanScoreStep(double eta) : eta_(eta) {}
  std::string_view name() const override { return "mean-score"; }
  absl::StatusOr<UpdateOutcome> Update(const TrajectoryBatch& batch,
                                       const Policy& current,
                                       Rng& /*rng*/) const override {
    Eigen::VectorXd g = Eigen::VectorXd::Zero(current.dim());
    for (const TrajectoryRecord& r : batch.records) {
      g += r.advantage * current.Score(r.state, r.action);
    }
    g /= static_cast<double>(batch.size());
    return UpdateOutcome{current.theta() + eta_ * g, g, std::nullopt};
  }

 private:
  double eta_;
};

Schedule Fixed(long long m, long long t, double eta = 0.1) {
  return Schedule{m, t, m * t, eta, 0.0};
}

TEST(BasePolicyTest, FixedRequiresDistributions) {
  EXPECT_FALSE(BasePolicy::Fixed(PolicyTable::Constant(2, 2, 0.4)).ok());
  EXPECT_TRUE(BasePolicy::Fixed(PolicyTable::Constant(2, 2, 0.5)).ok());
  auto fixed = *BasePolicy::Fixed(PolicyTable::Constant(2, 2, 0.5));
  EXPECT_FALSE(fixed.Validate(3, 2).ok());
}

TEST(BasePolicyTest, ResolvesAgainstCurrentPolicy) {
  std::mt19937_64 gen(1);
  const Policy pi = RandomTabular(gen, 3, 4);
  EXPECT_TRUE(BasePolicy::OnPolicy().Resolve(pi).isApprox(pi.Table()));
  EXPECT_TRUE(BasePolicy::Uniform().Resolve(pi).isApprox(
      PolicyTable::Constant(3, 4, 0.25)));
}

TEST(SampleBatchTest, DegeneratePolicyGivesDeterministicRecords) {
  const ContextualBandit bandit =
      MakeBandit({1.0}, {{0.3, -0.2, 0.6}});
  Eigen::VectorXd theta(3);
  theta << 0.0, 800.0, 0.0;  // pi puts all mass on action 1
  const Policy pi = *Policy::TabularSoftmax(1, 3).WithTheta(theta);
  Rng rng(4);
  BudgetLedger ledger(PrivacyParams::NonPrivate());
  UserPool users;
  auto batch = SampleBatch(bandit, pi, BasePolicy::OnPolicy(), 50, rng,
                           ledger, users);
  ASSERT_TRUE(batch.ok());
  ASSERT_EQ(batch->size(), 50u);
  for (const TrajectoryRecord& r : batch->records) {
    EXPECT_EQ(r.state, 0);
    EXPECT_EQ(r.action, 1);
    EXPECT_EQ(r.compare_action, 1);
    EXPECT_EQ(r.advantage, 0.0);
  }
}

TEST(SampleBatchTest, AdvantageIsRewardDifferenceAndUsersAreFresh) {
  const ContextualBandit bandit = Bandit5x4();
  const Policy pi = Policy::TabularSoftmax(5, 4);
  Rng rng(8);
  BudgetLedger ledger(PrivacyParams{1.0, 1e-5});
  UserPool users;
  std::set<UserId> ids;
  for (int b = 0; b < 3; ++b) {
    auto batch = SampleBatch(bandit, pi, BasePolicy::Uniform(), 40, rng,
                             ledger, users);
    ASSERT_TRUE(batch.ok());
    for (const TrajectoryRecord& r : batch->records) {
      EXPECT_DOUBLE_EQ(r.advantage,
                       bandit.reward(r.state, r.action) -
                           bandit.reward(r.state, r.compare_action));
      EXPECT_TRUE(ids.insert(r.user_id).second);
    }
  }
  EXPECT_EQ(ledger.batches_seen(), 3);
  EXPECT_EQ(users.next(), 120);
}

TEST(SampleBatchTest, MeanAdvantageMatchesExactAdvantage) {
  // With mu = delta at a fixed action, E[A_hat | x] = A^pi(x, y).
  const ContextualBandit bandit = Bandit5x4();
  std::mt19937_64 gen(2);
  const Policy pi = RandomTabular(gen, 5, 4, 1.0);
  PolicyTable mu = PolicyTable::Zero(5, 4);
  mu.col(2).setOnes();
  const BasePolicy base = *BasePolicy::Fixed(mu);
  Rng rng(3);
  BudgetLedger ledger(PrivacyParams::NonPrivate());
  UserPool users;
  auto batch = SampleBatch(bandit, pi, base, 200000, rng, ledger, users);
  ASSERT_TRUE(batch.ok());
  Eigen::VectorXd sum = Eigen::VectorXd::Zero(5);
  Eigen::VectorXd sum_sq = Eigen::VectorXd::Zero(5);
  Eigen::VectorXd count = Eigen::VectorXd::Zero(5);
  for (const TrajectoryRecord& r : batch->records) {
    sum(r.state) += r.advantage;
    sum_sq(r.state) += r.advantage * r.advantage;
    count(r.state) += 1;
  }
  for (int x = 0; x < 5; ++x) {
    const double mean = sum(x) / count(x);
    const double var = sum_sq(x) / count(x) - mean * mean;
    const double se = std::sqrt(var / count(x));
    EXPECT_NEAR(mean, ExactAdvantage(pi, bandit, x, 2), 4.0 * se + 1e-12);
  }
}

TEST(SampleBatchTest, AdvantageEstimatesStayWithinTwiceRMax) {
  std::mt19937_64 gen(12);
  for (int trial = 0; trial < 10; ++trial) {
    const ContextualBandit bandit = RandomBandit(gen, 3, 4);
    const Policy pi = RandomTabular(gen, 3, 4);
    Rng rng(trial);
    BudgetLedger ledger(PrivacyParams::NonPrivate());
    UserPool users;
    auto batch = SampleBatch(bandit, pi, BasePolicy::Uniform(), 500, rng,
                             ledger, users);
    ASSERT_TRUE(batch.ok());
    for (const TrajectoryRecord& r : batch->records) {
      EXPECT_LE(std::abs(r.advantage), 2.0 * bandit.r_max());
    }
  }
}

TEST(SampleBatchTest, RejectsEmptyBatch) {
  Rng rng(1);
  BudgetLedger ledger(PrivacyParams::NonPrivate());
  UserPool users;
  EXPECT_FALSE(SampleBatch(Bandit5x4(), Policy::TabularSoftmax(5, 4),
                           BasePolicy::OnPolicy(), 0, rng, ledger, users)
                   .ok());
}

TEST(ParseNamesTest, RoundTrip) {
  for (Algorithm a : {Algorithm::kPg, Algorithm::kPgLogBarrier,
                      Algorithm::kNpg, Algorithm::kRebel}) {
    EXPECT_EQ(*ParseAlgorithm(AlgorithmName(a)), a);
  }
  for (OracleKind k :
       {OracleKind::kExact, OracleKind::kExpMech, OracleKind::kRidge}) {
    EXPECT_EQ(*ParseOracle(OracleName(k)), k);
  }
  EXPECT_FALSE(ParseAlgorithm("ppo").ok());
  EXPECT_FALSE(ParseOracle("laplace").ok());
}

TEST(AutoScheduleTest, BatchSizeFromBudget) {
  const ContextualBandit bandit = Bandit5x4();
  const PolicyConstants c = Policy::TabularSoftmax(5, 4).Constants(1.0);
  EXPECT_DOUBLE_EQ(c.smoothness, 3.5);
  RunConfig config;
  config.total_samples = 1000000;
  config.privacy = PrivacyParams{1.0, 1e-5};
  auto s = AutoSchedule(config, c, bandit, 10);
  ASSERT_TRUE(s.ok());
  // floor((1e6 * 10)^(1/3)) = 215.
  EXPECT_EQ(s->batch_size, 215);
  EXPECT_EQ(s->iterations, 1000000 / 215);
  EXPECT_EQ(s->total_samples, 215 * (1000000 / 215));
}

TEST(AutoScheduleTest, NonPrivateUsesSingletonBatches) {
  RunConfig config;
  config.total_samples = 500;
  auto s = AutoSchedule(config, Policy::TabularSoftmax(5, 4).Constants(1.0),
                        Bandit5x4(), 20);
  ASSERT_TRUE(s.ok());
  EXPECT_EQ(s->batch_size, 1);
  EXPECT_EQ(s->iterations, 500);
  EXPECT_EQ(s->noise_variance, 0.0);
}

TEST(AutoScheduleTest, PolicyGradientStepMatchesFormula) {
  const ContextualBandit bandit = Bandit5x4();
  const PolicyConstants c = Policy::TabularSoftmax(5, 4).Constants(1.0);
  RunConfig config;
  config.batch_size = 100;
  config.iterations = 2000;
  auto s = AutoSchedule(config, c, bandit, 20);
  ASSERT_TRUE(s.ok());
  const double l = 3.5;
  const double cc = 4.0 * 0.75 / 100.0;
  const double want =
      std::min(1.0 / (l * 0.99), std::sqrt(2.0 * 2.0 / (2000 * l * cc)));
  EXPECT_NEAR(s->learning_rate, want, 1e-15);

  config.privacy = PrivacyParams{2.0, 1e-6};
  s = AutoSchedule(config, c, bandit, 20);
  ASSERT_TRUE(s.ok());
  const double sigma_sq =
      16.0 * std::log(1.25e6) * 0.75 / (100.0 * 100.0 * 4.0);
  EXPECT_NEAR(s->noise_variance, sigma_sq, 1e-15);
  const double cp = cc + 20.0 * sigma_sq;
  EXPECT_NEAR(s->learning_rate,
              std::min(1.0 / (l * 0.99), std::sqrt(4.0 / (2000 * l * cp))),
              1e-15);
}

TEST(AutoScheduleTest, RegressionStepSizes) {
  const ContextualBandit bandit = Bandit5x4();
  const PolicyConstants c = Policy::TabularSoftmax(5, 4).Constants(1.0);
  RunConfig config;
  config.batch_size = 10;
  config.iterations = 100;
  config.algorithm = Algorithm::kRebel;
  EXPECT_NEAR(AutoSchedule(config, c, bandit, 20)->learning_rate,
              std::sqrt(std::log(4.0) / (4.0 * 100.0)), 1e-15);
  EXPECT_NEAR(AutoSchedule(config, c, bandit, 20)->learning_rate, 0.05887,
              1e-5);
  config.algorithm = Algorithm::kNpg;
  config.oracle.radius = 3.0;
  EXPECT_NEAR(AutoSchedule(config, c, bandit, 20)->learning_rate,
              std::sqrt(2.0 * std::log(4.0) / (100.0 * 9.0)), 1e-15);
}

TEST(AutoScheduleTest, ExplicitValuesWinAndInconsistencyFails) {
  const ContextualBandit bandit = Bandit5x4();
  const PolicyConstants c = Policy::TabularSoftmax(5, 4).Constants(1.0);
  RunConfig config;
  config.total_samples = 1000;
  config.iterations = 50;
  config.learning_rate = 0.25;
  auto s = AutoSchedule(config, c, bandit, 20);
  ASSERT_TRUE(s.ok());
  EXPECT_EQ(s->batch_size, 20);
  EXPECT_EQ(s->learning_rate, 0.25);

  config.batch_size = 30;
  EXPECT_EQ(AutoSchedule(config, c, bandit, 20).status().code(),
            absl::StatusCode::kInvalidArgument);
  config.batch_size.reset();
  config.iterations = 300;
  EXPECT_FALSE(AutoSchedule(config, c, bandit, 20).ok());
}

TEST(RunTest, ZeroIterationsReturnsInitialPolicy) {
  const ContextualBandit bandit = Bandit5x4();
  auto result = dppo::Run(RunConfig{}, Fixed(10, 0), bandit,
                    Policy::TabularSoftmax(5, 4), MeanScoreStep(0.1));
  ASSERT_TRUE(result.ok());
  EXPECT_TRUE(result->records.empty());
  EXPECT_TRUE(result->final_policy.theta().isZero());
  EXPECT_EQ(result->users_consumed, 0);
  EXPECT_DOUBLE_EQ(result->final_value, bandit.rewards().rowwise().mean().dot(
                                            bandit.rho()));
}

TEST(RunTest, SameSeedIsBitIdenticalAndSeedsDiffer) {
  const ContextualBandit bandit = Bandit5x4();
  RunConfig config;
  config.seed = 42;
  const MeanScoreStep step(0.5);
  auto a = dppo::Run(config, Fixed(16, 30), bandit, Policy::TabularSoftmax(5, 4),
               step);
  auto b = dppo::Run(config, Fixed(16, 30), bandit, Policy::TabularSoftmax(5, 4),
               step);
  config.seed = 43;
  auto c = dppo::Run(config, Fixed(16, 30), bandit, Policy::TabularSoftmax(5, 4),
               step);
  ASSERT_TRUE(a.ok() && b.ok() && c.ok());
  EXPECT_EQ(a->final_policy.theta(), b->final_policy.theta());
  EXPECT_NE(a->final_policy.theta(), c->final_policy.theta());
}

TEST(RunTest, ConsumesExactlyNUsersInTBatches) {
  const ContextualBandit bandit = Bandit5x4();
  RunConfig config;
  config.privacy = PrivacyParams{3.0, 1e-6};
  auto result = dppo::Run(config, Fixed(7, 13), bandit,
                    Policy::TabularSoftmax(5, 4), MeanScoreStep(0.1));
  ASSERT_TRUE(result.ok());
  EXPECT_EQ(result->users_consumed, 91);
  EXPECT_EQ(result->batches, 13);
  ASSERT_EQ(result->records.size(), 13u);
  for (size_t t = 0; t < 13; ++t) {
    EXPECT_EQ(result->records[t].iteration, static_cast<long long>(t + 1));
    EXPECT_EQ(result->records[t].batches_seen, static_cast<long long>(t + 1));
    // Parallel composition: the total never exceeds one batch's budget.
    EXPECT_EQ(result->records[t].budget, config.privacy);
  }
  EXPECT_EQ(result->total_budget, config.privacy);
}

TEST(RunTest, RecordsExactQuantitiesOfEachIterate) {
  const ContextualBandit bandit = Bandit5x4();
  auto result = dppo::Run(RunConfig{}, Fixed(32, 5), bandit,
                    Policy::TabularSoftmax(5, 4), MeanScoreStep(1.0));
  ASSERT_TRUE(result.ok());
  const RunRecord& first = result->records.front();
  const Policy uniform = Policy::TabularSoftmax(5, 4);
  EXPECT_DOUBLE_EQ(first.value, ExactValue(uniform, bandit));
  EXPECT_DOUBLE_EQ(first.grad_norm, ExactGradient(uniform, bandit).norm());
  EXPECT_DOUBLE_EQ(first.gap, bandit.OptimalValue() - first.value);
  // Uniform base under on-policy sampling covers the greedy policy with 4.
  EXPECT_DOUBLE_EQ(first.coverage, 4.0);
}

TEST(RunTest, ReplayedUsersAreRejected) {
  RunHooks hooks;
  hooks.replay_users = true;
  auto result = dppo::Run(RunConfig{}, Fixed(5, 3), Bandit5x4(),
                    Policy::TabularSoftmax(5, 4), MeanScoreStep(0.1), hooks);
  ASSERT_FALSE(result.ok());
  EXPECT_EQ(result.status().code(), absl::StatusCode::kFailedPrecondition);
}

TEST(RunTest, RejectsMismatchedShapesAndSchedules) {
  EXPECT_FALSE(dppo::Run(RunConfig{}, Fixed(5, 3), Bandit5x4(),
                   Policy::TabularSoftmax(4, 4), MeanScoreStep(0.1))
                   .ok());
  Schedule bad = Fixed(5, 3);
  bad.total_samples = 16;
  EXPECT_FALSE(dppo::Run(RunConfig{}, bad, Bandit5x4(),
                   Policy::TabularSoftmax(5, 4), MeanScoreStep(0.1))
                   .ok());
}

TEST(RunTest, MeanScoreStepIsUnbiasedForTheGradient) {
  // One iteration from a random iterate; the step direction averaged over
  // independent seeds approaches the exact gradient.
  std::mt19937_64 gen(11);
  const ContextualBandit bandit = RandomBandit(gen, 3, 3);
  const Policy pi = RandomTabular(gen, 3, 3, 1.0);
  const Eigen::VectorXd want = ExactGradient(pi, bandit);
  const MeanScoreStep step(1.0);
  Eigen::VectorXd mean = Eigen::VectorXd::Zero(9);
  Eigen::VectorXd sq = Eigen::VectorXd::Zero(9);
  const int reps = 20000;
  Rng rng(5);
  BudgetLedger ledger(PrivacyParams::NonPrivate());
  UserPool users;
  for (int i = 0; i < reps; ++i) {
    auto batch = SampleBatch(bandit, pi, BasePolicy::OnPolicy(), 4, rng,
                             ledger, users);
    const Eigen::VectorXd g = step.Update(*batch, pi, rng)->direction;
    mean += g;
    sq += g.cwiseProduct(g);
  }
  mean /= reps;
  const Eigen::VectorXd se =
      ((sq / reps - mean.cwiseProduct(mean)) / reps).cwiseSqrt();
  for (int k = 0; k < 9; ++k) {
    EXPECT_NEAR(mean(k), want(k), 4.0 * se(k) + 1e-12) << "coordinate " << k;
  }
}

TEST(AverageValueTest, MeansRecordValues) {
  std::vector<RunRecord> records(3);
  records[0].value = 1.0;
  records[1].value = 2.0;
  records[2].value = 6.0;
  EXPECT_DOUBLE_EQ(AverageValue(records), 3.0);
  EXPECT_EQ(AverageValue({}), 0.0);
}

TEST(RecordsIoTest, FormatsKeysInOrder) {
  RunRecord record;
  record.iteration = 3;
  record.value = 0.5;
  record.grad_norm = 0.25;
  record.gap = 0.125;
  EXPECT_EQ(FormatRecordLine(record, PrivacyParams{2.0, 1e-5}),
            "{\"iter\":3,\"J\":0.5,\"grad_norm\":0.25,\"gap\":0.125,"
            "\"est_err\":null,\"epsilon\":2,\"delta\":1e-05}");
  record.est_err = 0.1;
  EXPECT_THAT(FormatRecordLine(record, PrivacyParams::NonPrivate()),
              HasSubstr("\"est_err\":0.1,\"epsilon\":\"inf\",\"delta\":0}"));
}

TEST(RecordsIoTest, WritesOneLinePerRecord) {
  std::vector<RunRecord> records(4);
  std::ostringstream out;
  WriteRecords(records, PrivacyParams::NonPrivate(), out);
  const std::string text = out.str();
  EXPECT_EQ(std::count(text.begin(), text.end(), '\n'), 4);
  EXPECT_EQ(FormatReal(kInf), "inf");
  EXPECT_EQ(FormatReal(-kInf), "-inf");
  EXPECT_EQ(FormatReal(std::nan("")), "nan");
  EXPECT_EQ(FormatReal(1.0 / 3.0), "0.333333333");
}

}  // namespace
}  // namespace dppo
