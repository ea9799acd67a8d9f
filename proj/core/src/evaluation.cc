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

#include "dpaudit/evaluation.h"

#include <algorithm>
#include <atomic>
#include <thread>

#include "dpaudit/random.h"
#include "dpaudit/trainer.h"

namespace dpaudit {
namespace {

enum : uint64_t { kDataStreams = 1, kTrainingStreams = 2 };

}  // namespace

uint64_t TrainingSeed(uint64_t root_seed, uint64_t trial, uint64_t grid_point) {
  return RandomStream(root_seed)
      .Split(kTrainingStreams)
      .Split(trial)
      .Split(grid_point)
      .NextU64();
}

uint64_t DataSeed(uint64_t root_seed, uint64_t trial) {
  return RandomStream(root_seed).Split(kDataStreams).Split(trial).NextU64();
}

absl::StatusOr<TrialOutcome> RunTrial(const DataSplits& data,
                                      const SgdConfig& config,
                                      double target_fpr) {
  absl::StatusOr<TrainResult> trained = TrainDpSgd(data.train, config);
  if (!trained.ok()) return trained.status();
  const Model& model = trained->model;

  TrialOutcome out;
  out.train_accuracy = Accuracy(model, data.train);
  out.holdout_accuracy = Accuracy(model, data.holdout);
  out.final_train_loss = model.final_train_loss;
  out.max_clipped_norm = trained->trace.max_clipped_norm;

  const std::vector<double> members = PerExampleLosses(model, data.train);
  const std::vector<double> nonmembers = PerExampleLosses(model, data.holdout);
  absl::StatusOr<AttackResult> yeom = YeomAttack(members, nonmembers);
  if (!yeom.ok()) return yeom.status();
  out.yeom = *yeom;
  absl::StatusOr<RocCurve> roc = ComputeRoc(members, nonmembers);
  if (!roc.ok()) return roc.status();
  out.at_fpr = OperatingPoint(*roc, target_fpr);
  out.best = ComputeBestAdvantage(*roc);
  out.members = static_cast<int64_t>(members.size());
  out.nonmembers = static_cast<int64_t>(nonmembers.size());
  return out;
}

NoiseLevelResult Aggregate(double sigma, std::span<const TrialOutcome> trials) {
  NoiseLevelResult r;
  r.sigma = sigma;
  r.trials = static_cast<int>(trials.size());
  if (trials.empty()) return r;
  double yeom_thr = 0, yeom_tpr = 0, yeom_fpr = 0;
  double fpr_thr = 0, fpr_tpr = 0, fpr_fpr = 0;
  for (const TrialOutcome& t : trials) {
    r.train_accuracy += t.train_accuracy;
    r.holdout_accuracy += t.holdout_accuracy;
    r.final_train_loss += t.final_train_loss;
    r.max_clipped_norm = std::max(r.max_clipped_norm, t.max_clipped_norm);
    yeom_thr += t.yeom.threshold;
    yeom_tpr += t.yeom.tpr;
    yeom_fpr += t.yeom.fpr;
    fpr_thr += t.at_fpr.threshold;
    fpr_tpr += t.at_fpr.tpr;
    fpr_fpr += t.at_fpr.fpr;
    r.best_advantage += t.best.advantage;
    r.best_threshold += t.best.threshold;
    r.best_tpr += t.best.tpr;
    r.best_fpr += t.best.fpr;
    r.members += t.members;
    r.nonmembers += t.nonmembers;
  }
  const double n = static_cast<double>(trials.size());
  r.train_accuracy /= n;
  r.holdout_accuracy /= n;
  r.final_train_loss /= n;
  r.yeom = AttackResult::FromRates(yeom_thr / n, yeom_tpr / n, yeom_fpr / n,
                                   r.trials);
  r.at_fpr = AttackResult::FromRates(fpr_thr / n, fpr_tpr / n, fpr_fpr / n,
                                     r.trials);
  r.best_advantage /= n;
  r.best_threshold /= n;
  r.best_tpr /= n;
  r.best_fpr /= n;
  return r;
}

void ParallelFor(int64_t count, int threads,
                 const std::function<void(int64_t)>& fn) {
  const int workers =
      static_cast<int>(std::clamp<int64_t>(threads, 1, std::max<int64_t>(count, 1)));
  if (workers <= 1) {
    for (int64_t i = 0; i < count; ++i) fn(i);
    return;
  }
  std::atomic<int64_t> next{0};
  std::vector<std::jthread> pool;
  pool.reserve(workers);
  for (int w = 0; w < workers; ++w) {
    pool.emplace_back([&] {
      for (int64_t i = next++; i < count; i = next++) fn(i);
    });
  }
}

}  // namespace dpaudit
