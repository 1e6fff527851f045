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

#include "dppo/cli/verify.h"

#include <algorithm>
#include <cmath>
#include <functional>
#include <limits>

#include <Eigen/Dense>

#include "absl/strings/str_cat.h"
#include "absl/strings/str_format.h"
#include "dppo/cli/experiment.h"
#include "dppo/core/bandit.h"
#include "dppo/core/exact.h"
#include "dppo/core/policy.h"
#include "dppo/dppg/pg_update.h"
#include "dppo/dprebel/rebel_update.h"
#include "dppo/mechanisms/budget_ledger.h"
#include "dppo/mechanisms/exponential.h"
#include "dppo/mechanisms/gaussian.h"
#include "dppo/mechanisms/rng.h"
#include "dppo/trainer/batch.h"

namespace dppo {
namespace {

ContextualBandit RandomBandit(Rng& rng, int nx, int ny) {
  Eigen::VectorXd rho(nx);
  for (int x = 0; x < nx; ++x) rho(x) = 0.1 + rng.Uniform();
  rho /= rho.sum();
  Eigen::MatrixXd rewards(nx, ny);
  for (int x = 0; x < nx; ++x) {
    for (int y = 0; y < ny; ++y) rewards(x, y) = 2.0 * rng.Uniform() - 1.0;
  }
  return *ContextualBandit::Create(rho, rewards, 1.0);
}

Eigen::VectorXd RandomVector(Rng& rng, int n, double scale) {
  Eigen::VectorXd v(n);
  for (int i = 0; i < n; ++i) v(i) = scale * rng.Normal();
  return v;
}

Policy RandomLogLinear(Rng& rng, int nx, int ny, int dim) {
  std::vector<double> values(static_cast<size_t>(nx) * ny * dim);
  for (double& v : values) v = rng.Normal();
  auto features = std::make_shared<const FeatureMap>(
      *FeatureMap::Dense(nx, ny, dim, std::move(values)));
  return *Policy::LogLinear(features).WithTheta(RandomVector(rng, dim, 1.0));
}

Policy RandomTabular(Rng& rng, int nx, int ny) {
  return *Policy::TabularSoftmax(nx, ny).WithTheta(
      RandomVector(rng, nx * ny, 1.5));
}

CheckResult Check(std::string name, bool passed, std::string detail) {
  return CheckResult{std::move(name), passed, std::move(detail)};
}

CheckResult ProbabilityNormalization(Rng& rng) {
  double worst = 0.0;
  double worst_shift = 0.0;
  for (int trial = 0; trial < 30; ++trial) {
    const int nx = 1 + trial % 4;
    const int ny = 2 + trial % 5;
    const Policy p = trial % 2 ? RandomTabular(rng, nx, ny)
                               : RandomLogLinear(rng, nx, ny, 3);
    for (int x = 0; x < nx; ++x) {
      worst = std::max(worst, std::abs(p.ActionProbabilities(x).sum() - 1.0));
    }
    if (p.family() == PolicyFamily::kTabularSoftmax) {
      Eigen::VectorXd shift = Eigen::VectorXd::Zero(p.dim());
      shift.segment(0, ny).setConstant(3.7);
      const Policy q = p.Shifted(shift);
      worst_shift = std::max(worst_shift, (q.ActionProbabilities(0) -
                                           p.ActionProbabilities(0))
                                              .cwiseAbs()
                                              .maxCoeff());
    }
  }
  return Check("probability_normalization",
               worst <= 1e-12 && worst_shift <= 1e-12,
               absl::StrFormat("max |sum - 1| = %.3g, max shift change = %.3g",
                               worst, worst_shift));
}

CheckResult ScoreIdentities(Rng& rng) {
  double worst_mean = 0.0;
  double worst_second_moment = -std::numeric_limits<double>::infinity();
  double worst_uniform_norm = -std::numeric_limits<double>::infinity();
  for (int trial = 0; trial < 30; ++trial) {
    const int nx = 1 + trial % 3;
    const int ny = 2 + trial % 5;
    const Policy p = trial % 2 ? RandomTabular(rng, nx, ny)
                               : RandomLogLinear(rng, nx, ny, 3);
    const double g = p.Constants(1.0).g_bound;
    for (int x = 0; x < nx; ++x) {
      const Eigen::VectorXd pi = p.ActionProbabilities(x);
      Eigen::VectorXd mean = Eigen::VectorXd::Zero(p.dim());
      double second = 0.0;
      for (int y = 0; y < ny; ++y) {
        const Eigen::VectorXd s = p.Score(x, y);
        mean += pi(y) * s;
        second += pi(y) * s.squaredNorm();
      }
      worst_mean = std::max(worst_mean, mean.cwiseAbs().maxCoeff());
      if (p.family() == PolicyFamily::kTabularSoftmax) {
        worst_second_moment = std::max(worst_second_moment, second - g * g);
      }
    }
    // At theta = 0 every tabular score has norm exactly sqrt(1 - 1/|Y|).
    const Policy uniform = Policy::TabularSoftmax(nx, ny);
    for (int x = 0; x < nx; ++x) {
      for (int y = 0; y < ny; ++y) {
        worst_uniform_norm =
            std::max(worst_uniform_norm, uniform.Score(x, y).norm() -
                                             std::sqrt(1.0 - 1.0 / ny));
      }
    }
  }
  return Check("score_identities",
               worst_mean <= 1e-12 && worst_second_moment <= 1e-12 &&
                   worst_uniform_norm <= 1e-12,
               absl::StrFormat("max |E score| = %.3g, max E||score||^2 - G^2 "
                               "= %.3g, uniform ||score|| - G = %.3g",
                               worst_mean, worst_second_moment,
                               worst_uniform_norm));
}

CheckResult GradientFiniteDifference(Rng& rng) {
  double worst = 0.0;
  for (int trial = 0; trial < 20; ++trial) {
    const int nx = 1 + trial % 5;
    const int ny = 2 + trial % 5;
    const ContextualBandit bandit = RandomBandit(rng, nx, ny);
    const Policy p = trial % 2 ? RandomTabular(rng, nx, ny)
                               : RandomLogLinear(rng, nx, ny, 3);
    const Eigen::VectorXd g = ExactGradient(p, bandit);
    Eigen::VectorXd fd(p.dim());
    const double h = 1e-5;
    for (int i = 0; i < p.dim(); ++i) {
      Eigen::VectorXd e = Eigen::VectorXd::Zero(p.dim());
      e(i) = h;
      fd(i) = (ExactValue(p.Shifted(e), bandit) -
               ExactValue(p.Shifted(-e), bandit)) /
              (2.0 * h);
    }
    worst = std::max(worst, (g - fd).norm() / std::max(g.norm(), 1e-8));
  }
  return Check("gradient_finite_difference", worst <= 1e-6,
               absl::StrFormat("max relative error = %.3g", worst));
}

CheckResult PerformanceDifferenceIdentity(Rng& rng) {
  double worst = 0.0;
  for (int trial = 0; trial < 50; ++trial) {
    const int nx = 1 + trial % 4;
    const int ny = 2 + trial % 4;
    const ContextualBandit bandit = RandomBandit(rng, nx, ny);
    const PolicyTable a = RandomTabular(rng, nx, ny).Table();
    const PolicyTable b = RandomTabular(rng, nx, ny).Table();
    worst = std::max(worst, std::abs(PerformanceDifference(a, b, bandit) -
                                     (ExactValue(a, bandit) -
                                      ExactValue(b, bandit))));
  }
  return Check("performance_difference", worst <= 1e-12,
               absl::StrFormat("max deviation = %.3g", worst));
}

// Closed form evaluated independently of the library routine.
double ReferenceSigmaSq(double eps, double delta, double m, double r_max,
                        double g) {
  return 16.0 * std::log(1.25 / delta) * r_max * r_max * g * g /
         (m * m * eps * eps);
}

CheckResult NoiseScale(const VerifyOptions& options) {
  double worst = 0.0;
  for (double eps : {0.1, 1.0, 5.0}) {
    for (double delta : {1e-7, 1e-5, 1e-2}) {
      for (long long m : {1LL, 100LL, 4096LL}) {
        for (double r_max : {0.5, 1.0}) {
          for (double g : {0.5, 1.0, 2.0}) {
            const double got = *GaussianNoiseScale(
                PrivacyParams{eps, delta}, m, r_max, g);
            const double want = ReferenceSigmaSq(eps, delta, m, r_max, g);
            worst = std::max(worst, std::abs(got - want) / want);
          }
        }
      }
    }
  }

  // Plumbing: a private PG run must use exactly this variance every step.
  Eigen::VectorXd rho = Eigen::VectorXd::Constant(2, 0.5);
  Eigen::MatrixXd rewards(2, 3);
  rewards << 1.0, 0.0, -1.0, 0.5, -0.5, 0.0;
  BanditInstance instance{*ContextualBandit::Create(rho, rewards, 1.0),
                          nullptr};
  ExperimentConfig config;
  config.run.algorithm = Algorithm::kPg;
  config.run.batch_size = 50;
  config.run.iterations = 5;
  config.run.total_samples = 250;
  config.run.privacy = PrivacyParams{2.0, 1e-5};
  config.run.seed = options.seed;
  auto experiment = PrepareExperiment(config, instance);
  if (!experiment.ok()) {
    return Check("noise_scale", false, experiment.status().ToString());
  }
  Schedule schedule = experiment->schedule;
  auto spec = dynamic_cast<const PgUpdate*>(experiment->update.get())->spec();
  spec.noise_variance *= options.sigma_scale;
  const PgUpdate corrupted(spec);
  auto result = Run(config.run, schedule, instance.bandit,
                    experiment->prototype, corrupted);
  const double want = ReferenceSigmaSq(
      2.0, 1e-5, 50.0, 1.0, std::sqrt(1.0 - 1.0 / 3.0));
  double plumbing = 0.0;
  if (result.ok()) {
    for (const RunRecord& r : result->records) {
      plumbing = std::max(
          plumbing, std::abs(r.noise_variance.value_or(-1.0) - want) / want);
    }
  } else {
    plumbing = std::numeric_limits<double>::infinity();
  }
  return Check("noise_scale", worst <= 1e-12 && plumbing <= 1e-12,
               absl::StrFormat("closed-form relative error = %.3g, run "
                               "variance relative error = %.3g",
                               worst, plumbing));
}

CheckResult GaussianVariance(Rng& rng) {
  const double sigma_sq = 0.37;
  const int draws = 100000;
  double sum = 0.0;
  double sum_sq = 0.0;
  for (int i = 0; i < draws; ++i) {
    const double v = (*AddGaussianNoise(Eigen::VectorXd::Zero(1),
                                        GaussianNoiseSpec{sigma_sq, 1}, rng))(0);
    sum += v;
    sum_sq += v * v;
  }
  const double mean = sum / draws;
  const double var = sum_sq / draws - mean * mean;
  const double rel = std::abs(var - sigma_sq) / sigma_sq;
  return Check("gaussian_noise_variance", rel <= 0.05,
               absl::StrFormat("empirical variance %.5g vs %.5g", var,
                               sigma_sq));
}

CheckResult ExpMechDistribution(Rng& rng) {
  std::vector<Eigen::VectorXd> points;
  for (int i = 0; i < 8; ++i) {
    points.push_back(Eigen::VectorXd::Constant(1, -0.7 + 0.2 * i));
  }
  auto set = *CandidateSet::Create(points, 1.0, 1.0);
  Eigen::VectorXd losses(8);
  losses << 0.0, 1.0, 2.5, 0.3, 4.0, 1.7, 0.9, 3.1;
  const double eps = 4.0;
  const Eigen::VectorXd p =
      *ExponentialMechanismProbabilities(losses, eps, 1.0);
  Eigen::VectorXd counts = Eigen::VectorXd::Zero(8);
  const int draws = 100000;
  for (int i = 0; i < draws; ++i) {
    counts(*ExponentialMechanismSample(set, losses, eps, 1.0, rng)) += 1.0;
  }
  const double tv = 0.5 * (counts / draws - p).cwiseAbs().sum();
  return Check("expmech_distribution", tv <= 0.02,
               absl::StrFormat("total variation = %.4g", tv));
}

CheckResult ExpMechDpRatio(Rng& rng) {
  const double r = 1.0;
  auto set = *CandidateSet::Lattice(2, 1.0, 3, r);
  double worst_excess = -std::numeric_limits<double>::infinity();
  for (int trial = 0; trial < 200; ++trial) {
    const int m = 1 + trial % 6;
    LsDataset d{Eigen::MatrixXd(m, 2), Eigen::VectorXd(m)};
    for (int i = 0; i < m; ++i) {
      d.features.row(i) = RandomVector(rng, 2, 1.0).transpose();
      d.labels(i) = 4.0 * rng.Uniform() - 2.0;
    }
    LsDataset adjacent = d;
    const int k = trial % m;
    adjacent.features.row(k) = RandomVector(rng, 2, 3.0).transpose();
    adjacent.labels(k) = 6.0 * rng.Uniform() - 3.0;
    const double eps = 0.5 + trial % 4;
    const double ratio = *VerifyExpMechDpRatio(set, d, adjacent, eps, r);
    worst_excess = std::max(worst_excess, std::log(ratio) - eps);
  }
  return Check("expmech_dp_ratio", worst_excess <= 1e-12,
               absl::StrFormat("max log-ratio - epsilon = %.3g",
                               worst_excess));
}

CheckResult RebelIdentities(Rng& rng) {
  double worst_linearity = 0.0;
  double worst_component = -std::numeric_limits<double>::infinity();
  double worst_sum = 0.0;
  for (int trial = 0; trial < 30; ++trial) {
    const int nx = 1 + trial % 3;
    const int ny = 2 + trial % 4;
    const ContextualBandit bandit = RandomBandit(rng, nx, ny);
    const Policy prev = trial % 2 ? RandomTabular(rng, nx, ny)
                                  : RandomLogLinear(rng, nx, ny, 3);
    const Eigen::VectorXd w = RandomVector(rng, prev.dim(), 1.0);
    const double eta = 0.05 + rng.Uniform();
    const Policy next = prev.Shifted(eta * w);
    for (int x = 0; x < nx; ++x) {
      for (int y = 0; y < ny; ++y) {
        for (int y2 = 0; y2 < ny; ++y2) {
          const double lhs =
              ((next.LogProbability(x, y) - prev.LogProbability(x, y)) -
               (next.LogProbability(x, y2) - prev.LogProbability(x, y2))) /
              eta;
          const double rhs = w.dot(prev.FeatureDifference(x, y, y2));
          worst_linearity = std::max(worst_linearity, std::abs(lhs - rhs));
        }
      }
    }
    const PolicyTable mu = RandomTabular(rng, nx, ny).Table();
    const RebelDiagnostics d =
        *ComputeRebelDiagnostics(prev, next, mu, eta, bandit);
    worst_component = std::max(
        {worst_component, d.pi_centered - d.total_err_sq,
         d.mu_centered - d.total_err_sq, d.centering_gap - d.total_err_sq});
    worst_sum = std::max(
        worst_sum, std::abs(d.pi_centered + d.mu_centered + d.centering_gap -
                            d.total_err_sq));
  }
  return Check("rebel_identities",
               worst_linearity <= 1e-10 && worst_component <= 1e-9 &&
                   worst_sum <= 1e-9,
               absl::StrFormat("log-ratio error = %.3g, component excess = "
                               "%.3g, decomposition error = %.3g",
                               worst_linearity, worst_component, worst_sum));
}

CheckResult OnePass(const VerifyOptions& options) {
  Eigen::VectorXd rho(3);
  rho << 0.2, 0.3, 0.5;
  Eigen::MatrixXd rewards(3, 2);
  rewards << 1.0, -1.0, 0.0, 0.5, -0.25, 0.75;
  BanditInstance instance{*ContextualBandit::Create(rho, rewards, 1.0),
                          nullptr};
  ExperimentConfig config;
  config.run.algorithm = Algorithm::kRebel;
  config.run.batch_size = 20;
  config.run.iterations = 10;
  config.run.seed = options.seed;
  RunHooks hooks;
  hooks.replay_users = options.duplicate_user;
  auto result = RunExperiment(config, instance, hooks);
  if (!result.ok()) {
    return Check("ledger_one_pass", false, result.status().ToString());
  }
  const bool ok = result->users_consumed == 200 && result->batches == 10 &&
                  result->total_budget == config.run.privacy;
  // A repeated identifier must be rejected outright.
  BudgetLedger ledger(PrivacyParams{1.0, 0.0});
  const UserId first[] = {1, 2, 3};
  const UserId second[] = {4, 2};
  const bool rejects = ledger.RecordBatch(first).ok() &&
                       !ledger.RecordBatch(second).ok();
  return Check("ledger_one_pass", ok && rejects,
               absl::StrFormat("users = %d, batches = %d, duplicate rejected "
                               "= %s",
                               result->users_consumed, result->batches,
                               rejects ? "yes" : "no"));
}

CheckResult AdvantageRange(Rng& rng) {
  double worst = 0.0;
  for (int trial = 0; trial < 10; ++trial) {
    const ContextualBandit bandit = RandomBandit(rng, 3, 4);
    const Policy p = RandomTabular(rng, 3, 4);
    BudgetLedger ledger(PrivacyParams::NonPrivate());
    UserPool users;
    auto batch = SampleBatch(bandit, p, BasePolicy::Uniform(), 500, rng,
                             ledger, users);
    if (!batch.ok()) return Check("advantage_range", false, "sampling failed");
    for (const TrajectoryRecord& r : batch->records) {
      worst = std::max(worst, std::abs(r.advantage) / (2.0 * bandit.r_max()));
      if (r.advantage != bandit.reward(r.state, r.action) -
                             bandit.reward(r.state, r.compare_action)) {
        return Check("advantage_range", false, "advantage mismatch");
      }
    }
  }
  return Check("advantage_range", worst <= 1.0,
               absl::StrFormat("max |A| / (2 r_max) = %.4g", worst));
}

}  // namespace

std::vector<CheckResult> RunVerifySuite(const VerifyOptions& options) {
  Rng rng(options.seed);
  std::vector<CheckResult> out;
  out.push_back(ProbabilityNormalization(rng));
  out.push_back(ScoreIdentities(rng));
  out.push_back(GradientFiniteDifference(rng));
  out.push_back(PerformanceDifferenceIdentity(rng));
  out.push_back(NoiseScale(options));
  out.push_back(GaussianVariance(rng));
  out.push_back(ExpMechDistribution(rng));
  out.push_back(ExpMechDpRatio(rng));
  out.push_back(RebelIdentities(rng));
  out.push_back(AdvantageRange(rng));
  out.push_back(OnePass(options));
  return out;
}

std::string FormatVerifyReport(const std::vector<CheckResult>& results) {
  std::string report;
  int failed = 0;
  for (const CheckResult& r : results) {
    absl::StrAppend(&report, r.passed ? "PASS " : "FAIL ", r.name, ": ",
                    r.detail, "\n");
    if (!r.passed) ++failed;
  }
  absl::StrAppend(&report, absl::StrFormat("%d checks, %d failed\n",
                                           results.size(), failed));
  return report;
}

}  // namespace dppo
