// Copyright 2026 The dpaudit Authors
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

#include "dpaudit/trainer.h"

#include <cmath>
#include <limits>
#include <string>
#include <vector>

#include "dpaudit/dataset.h"
#include "test_util.h"

namespace dpaudit {
namespace {

using ::dpaudit::testing::IsOk;
using ::dpaudit::testing::StatusIs;
using ::dpaudit::testing::TempDir;
using ::testing::HasSubstr;
using ::testing::Not;

constexpr double kInf = std::numeric_limits<double>::infinity();

SgdConfig Config(double sigma, double q, int epochs, double lr,
                 double clip = 1.0, uint64_t seed = 7) {
  SgdConfig c;
  c.noise_multiplier = sigma;
  c.clip_norm = clip;
  c.sampling_rate = q;
  c.epochs = epochs;
  c.steps = SgdConfig::StepsFor(epochs, q);
  c.learning_rate = lr;
  c.seed = seed;
  return c;
}

// d=2, K=2: six parameters, the smallest toy with two classes.
Dataset Toy() {
  Dataset d;
  d.rows = 4;
  d.dim = 2;
  d.classes = 2;
  d.features = {0.3, -1.2, 1.5, 0.4, -0.7, 0.9, 2.0, -0.1};
  d.labels = {0, 1, 0, 1};
  return d;
}

TEST(GradientTest, MatchesCentralDifferences) {
  const Dataset data = Toy();
  Model model = Model::Zeros(2, 2);
  model.SetParameters(std::vector<double>{0.2, -0.5, 0.8, 0.1, -0.3, 0.05});
  ASSERT_EQ(model.num_parameters(), 6u);
  const std::vector<double> analytic = MeanLossGradient(model, data);
  const std::vector<double> p0 = model.Parameters();
  constexpr double kH = 1e-5;
  for (size_t i = 0; i < p0.size(); ++i) {
    std::vector<double> p = p0;
    p[i] = p0[i] + kH;
    model.SetParameters(p);
    const double up = MeanLoss(model, data);
    p[i] = p0[i] - kH;
    model.SetParameters(p);
    const double down = MeanLoss(model, data);
    const double numeric = (up - down) / (2 * kH);
    EXPECT_NEAR(analytic[i], numeric, 1e-5 * std::abs(numeric)) << "param " << i;
  }
}

TEST(GradientTest, MatchesOnSyntheticModel) {
  auto splits = GenerateSynthetic({30, 3, 3, 1.0, 4});
  Model model = Model::Zeros(3, 3);
  std::vector<double> p(model.num_parameters());
  for (size_t i = 0; i < p.size(); ++i) p[i] = 0.1 * std::sin(1.0 + i);
  model.SetParameters(p);
  const std::vector<double> analytic = MeanLossGradient(model, splits->train);
  for (size_t i = 0; i < p.size(); ++i) {
    std::vector<double> q = p;
    q[i] += 1e-5;
    model.SetParameters(q);
    const double up = MeanLoss(model, splits->train);
    q[i] -= 2e-5;
    model.SetParameters(q);
    const double down = MeanLoss(model, splits->train);
    const double numeric = (up - down) / 2e-5;
    EXPECT_NEAR(analytic[i], numeric, 1e-5 * std::abs(numeric)) << "param " << i;
  }
}

TEST(TrainTest, NoiselessUnclippedEqualsGradientDescent) {
  auto splits = GenerateSynthetic({200, 5, 3, 2.0, 11});
  // q = 1 samples every row, so each step is a full gradient step.
  const SgdConfig config = Config(0.0, 1.0, 30, 0.5, kInf);
  DPAUDIT_ASSERT_OK_AND_ASSIGN(result, TrainDpSgd(splits->train, config));

  Model reference = Model::Zeros(5, 3);
  for (int64_t t = 0; t < config.steps; ++t) {
    std::vector<double> p = reference.Parameters();
    const std::vector<double> g = MeanLossGradient(reference, splits->train);
    for (size_t i = 0; i < p.size(); ++i) p[i] -= config.learning_rate * g[i];
    reference.SetParameters(p);
  }
  const std::vector<double> got = result.model.Parameters();
  const std::vector<double> want = reference.Parameters();
  for (size_t i = 0; i < got.size(); ++i) {
    EXPECT_NEAR(got[i], want[i], 1e-10) << "param " << i;
  }
  EXPECT_EQ(result.trace.examples_sampled, 200 * config.steps);
}

TEST(TrainTest, LargeClipNormEqualsUnclipped) {
  auto splits = GenerateSynthetic({200, 5, 3, 2.0, 11});
  auto unclipped = TrainDpSgd(splits->train, Config(0.0, 0.1, 5, 0.3, kInf));
  auto loose = TrainDpSgd(splits->train, Config(0.0, 0.1, 5, 0.3, 1e6));
  ASSERT_THAT(unclipped, IsOk());
  ASSERT_THAT(loose, IsOk());
  ASSERT_LT(unclipped->trace.max_clipped_norm, 1e6);
  const auto a = unclipped->model.Parameters();
  const auto b = loose->model.Parameters();
  for (size_t i = 0; i < a.size(); ++i) EXPECT_NEAR(a[i], b[i], 1e-10);
}

TEST(TrainTest, ClippedNormsRespectBound) {
  auto splits = GenerateSynthetic({500, 10, 4, 3.0, 2});
  for (double clip : {0.01, 0.1, 1.0}) {
    for (double sigma : {0.0, 1.0}) {
      auto r = TrainDpSgd(splits->train, Config(sigma, 0.05, 3, 1.0, clip));
      ASSERT_THAT(r, IsOk());
      EXPECT_LE(r->trace.max_clipped_norm, clip + 1e-9);
      EXPECT_GT(r->trace.max_clipped_norm, 0.0);
    }
  }
}

TEST(TrainTest, SingleClippedExampleStep) {
  Dataset d;
  d.rows = 1;
  d.dim = 2;
  d.classes = 2;
  d.features = {3.0, 4.0};
  d.labels = {1};
  const double clip = 0.5;
  auto r = TrainDpSgd(d, Config(0.0, 1.0, 1, 1.0, clip));
  ASSERT_THAT(r, IsOk());
  // At zero weights p = (1/2, 1/2), so p - y = (1/2, -1/2) and the
  // augmented input (3, 4, 1) has norm sqrt(26).
  const double norm = std::sqrt(26.0) * std::sqrt(0.5);
  const double f = clip / norm;
  const std::vector<double> want = {-3 * 0.5 * f, 3 * 0.5 * f, -4 * 0.5 * f,
                                    4 * 0.5 * f,  -0.5 * f,    0.5 * f};
  const std::vector<double> got = r->model.Parameters();
  for (size_t i = 0; i < want.size(); ++i) EXPECT_NEAR(got[i], want[i], 1e-15);
  EXPECT_NEAR(r->trace.max_clipped_norm, clip, 1e-12);
}

TEST(TrainTest, DeterministicPerSeed) {
  auto splits = GenerateSynthetic({300, 6, 3, 1.0, 5});
  const SgdConfig c = Config(1.0, 0.1, 4, 0.2);
  auto a = TrainDpSgd(splits->train, c);
  auto b = TrainDpSgd(splits->train, c);
  ASSERT_THAT(a, IsOk());
  EXPECT_EQ(a->model, b->model);
  EXPECT_EQ(a->trace.epoch_loss, b->trace.epoch_loss);
  auto other = TrainDpSgd(splits->train, c.WithSeed(8));
  EXPECT_NE(a->model.weights, other->model.weights);
}

TEST(TrainTest, TraceHasOneEntryPerEpoch) {
  auto splits = GenerateSynthetic({300, 6, 3, 1.0, 5});
  for (double q : {0.03, 0.07, 0.5}) {
    auto r = TrainDpSgd(splits->train, Config(0.5, q, 7, 0.2));
    ASSERT_THAT(r, IsOk());
    EXPECT_EQ(r->trace.epoch_loss.size(), 7u);
    EXPECT_EQ(r->trace.epoch_accuracy.size(), 7u);
    EXPECT_EQ(r->model.realized_steps, SgdConfig::StepsFor(7, q));
    EXPECT_EQ(r->model.final_train_loss, r->trace.epoch_loss.back());
    EXPECT_EQ(r->model.config, Config(0.5, q, 7, 0.2));
  }
}

TEST(TrainTest, NoiselessSeparableReachesHighAccuracy) {
  auto splits = GenerateSynthetic({2000, 20, 2, 3.0, 1});
  auto r = TrainDpSgd(splits->train, Config(0.0, 0.02, 100, 0.1));
  ASSERT_THAT(r, IsOk());
  EXPECT_GE(Accuracy(r->model, splits->train), 0.95);
  EXPECT_GT(Accuracy(r->model, splits->holdout), 0.90);
}

TEST(TrainTest, HugeNoiseGivesChanceAccuracy) {
  auto splits = GenerateSynthetic({2000, 20, 10, 0.5, 3});
  auto r = TrainDpSgd(splits->train, Config(1000.0, 0.02, 20, 0.2));
  ASSERT_THAT(r, IsOk());
  const double stderr_ = std::sqrt(0.1 * 0.9 / 2000);
  EXPECT_NEAR(Accuracy(r->model, splits->holdout), 0.1, 3 * stderr_);
}

TEST(TrainTest, NoSignalGivesChanceHoldoutAccuracy) {
  auto splits = GenerateSynthetic({2000, 10, 2, 0.0, 9});
  auto r = TrainDpSgd(splits->train, Config(0.0, 0.05, 20, 0.1));
  ASSERT_THAT(r, IsOk());
  const double stderr_ = std::sqrt(0.25 / 2000);
  EXPECT_NEAR(Accuracy(r->model, splits->holdout), 0.5, 3 * stderr_);
}

TEST(TrainTest, AccuracyFallsWithNoiseOnAverage) {
  auto splits = GenerateSynthetic({1000, 10, 4, 1.0, 21});
  double mean[3] = {0, 0, 0};
  const double sigmas[3] = {8.0, 1.0, 0.0};
  for (int s = 0; s < 5; ++s) {
    for (int i = 0; i < 3; ++i) {
      auto r = TrainDpSgd(splits->train,
                          Config(sigmas[i], 0.02, 20, 0.2, 1.0, 100 + s));
      ASSERT_THAT(r, IsOk());
      mean[i] += Accuracy(r->model, splits->train) / 5;
    }
  }
  EXPECT_LE(mean[0], mean[1]);
  EXPECT_LE(mean[1], mean[2]);
}

TEST(TrainTest, DivergenceSuggestsSmallerLearningRate) {
  auto splits = GenerateSynthetic({100, 3, 2, 1.0, 1});
  auto r = TrainDpSgd(splits->train, Config(1.0, 0.5, 3, 1e308, 1e10));
  ASSERT_THAT(r, StatusIs(absl::StatusCode::kFailedPrecondition));
  EXPECT_THAT(std::string(r.status().message()), HasSubstr("smaller learning rate"));
}

TEST(TrainTest, RejectsBadInputs) {
  auto splits = GenerateSynthetic({100, 3, 2, 1.0, 1});
  // q*n < 1.
  EXPECT_THAT(TrainDpSgd(splits->train, Config(1.0, 0.001, 1, 0.1)),
              StatusIs(absl::StatusCode::kInvalidArgument));
  SgdConfig bad = Config(1.0, 0.1, 2, 0.1);
  bad.steps += 1;
  EXPECT_THAT(TrainDpSgd(splits->train, bad), Not(IsOk()));
  EXPECT_THAT(TrainDpSgd(splits->train, Config(-1.0, 0.1, 2, 0.1)), Not(IsOk()));
}

TEST(LossTest, UniformPredictionGivesLogK) {
  auto splits = GenerateSynthetic({50, 4, 7, 1.0, 1});
  const Model zero = Model::Zeros(4, 7);
  for (double l : PerExampleLosses(zero, splits->train)) {
    EXPECT_NEAR(l, std::log(7.0), 1e-12);
  }
  EXPECT_NEAR(MeanLoss(zero, splits->train), std::log(7.0), 1e-12);
}

TEST(LossTest, ConfidentPredictionsGiveZeroAndFloor) {
  Dataset d;
  d.rows = 2;
  d.dim = 1;
  d.classes = 2;
  d.features = {1.0, 1.0};
  d.labels = {0, 1};
  Model m = Model::Zeros(1, 2);
  m.bias = {1000.0, 0.0};
  const std::vector<double> l = PerExampleLosses(m, d);
  EXPECT_EQ(l[0], 0.0);
  EXPECT_NEAR(l[1], -std::log(kProbabilityFloor), 1e-9);
}

TEST(AccuracyTest, TiesGoToLowestClass) {
  auto splits = GenerateSynthetic({1000, 3, 2, 1.0, 6});
  int zeros = 0;
  for (int y : splits->train.labels) zeros += y == 0;
  EXPECT_DOUBLE_EQ(Accuracy(Model::Zeros(3, 2), splits->train), zeros / 1000.0);
}

TEST(AccuracyTest, MemorizedOneHotRows) {
  Dataset d;
  d.rows = 3;
  d.dim = 3;
  d.classes = 3;
  d.features = {1, 0, 0, 0, 1, 0, 0, 0, 1};
  d.labels = {0, 1, 2};
  Model m = Model::Zeros(3, 3);
  m.weights = {5, 0, 0, 0, 5, 0, 0, 0, 5};
  EXPECT_EQ(Accuracy(m, d), 1.0);
}

TEST(ModelIoTest, RoundTripIsExact) {
  auto splits = GenerateSynthetic({100, 4, 3, 1.0, 2});
  auto r = TrainDpSgd(splits->train, Config(1.0, 0.1, 2, 0.3));
  ASSERT_THAT(r, IsOk());
  const std::string text = SerializeModel(r->model);
  EXPECT_EQ(text.substr(0, 19), "dpsgd-model v1 4 3\n");
  DPAUDIT_ASSERT_OK_AND_ASSIGN(back, ParseModel(text));
  EXPECT_EQ(back.weights, r->model.weights);
  EXPECT_EQ(back.bias, r->model.bias);

  const std::string path = TempDir("model") + "/m.txt";
  ASSERT_THAT(SaveModel(r->model, path), IsOk());
  DPAUDIT_ASSERT_OK_AND_ASSIGN(loaded, LoadModel(path));
  EXPECT_EQ(loaded.weights, r->model.weights);
}

TEST(ModelIoTest, RejectsMalformed) {
  EXPECT_THAT(ParseModel(""), Not(IsOk()));
  EXPECT_THAT(ParseModel("dpsgd-model v2 1 1\n0\n0\n"), Not(IsOk()));
  EXPECT_THAT(ParseModel("dpsgd-model v1 1 1\n0\n"), Not(IsOk()));
  EXPECT_THAT(ParseModel("dpsgd-model v1 1 1\n0\nnan\n"), Not(IsOk()));
  EXPECT_THAT(ParseModel("dpsgd-model v1 1 1\n0.5\n-2\n"), IsOk());
}

}  // namespace
}  // namespace dpaudit
