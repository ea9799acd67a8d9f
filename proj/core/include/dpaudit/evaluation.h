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

#ifndef DPAUDIT_EVALUATION_H_
#define DPAUDIT_EVALUATION_H_

#include <cstdint>
#include <functional>
#include <span>
#include <vector>

#include "absl/status/statusor.h"
#include "dpaudit/attack.h"
#include "dpaudit/dataset.h"
#include "dpaudit/privacy_budget.h"

namespace dpaudit {

// Seed for training run (trial, grid point) under `root_seed`.
uint64_t TrainingSeed(uint64_t root_seed, uint64_t trial, uint64_t grid_point);
// Seed for the synthetic data of `trial`.
uint64_t DataSeed(uint64_t root_seed, uint64_t trial);

// One trained model, attacked.
struct TrialOutcome {
  double train_accuracy = 0.0;
  double holdout_accuracy = 0.0;
  double final_train_loss = 0.0;
  double max_clipped_norm = 0.0;
  AttackResult yeom;
  RocPoint at_fpr;
  BestAdvantage best;
  int64_t members = 0;
  int64_t nonmembers = 0;
};

// Trial-averaged view of one noise level.
struct NoiseLevelResult {
  double sigma = 0.0;
  int trials = 0;
  double train_accuracy = 0.0;
  double holdout_accuracy = 0.0;
  double final_train_loss = 0.0;
  double max_clipped_norm = 0.0;
  // Average-loss threshold attack, averaged.
  AttackResult yeom;
  // Fixed-FPR operating point, averaged; advantage = tpr - fpr.
  AttackResult at_fpr;
  // Mean over trials of the per-trial best advantage.
  double best_advantage = 0.0;
  double best_threshold = 0.0;
  double best_tpr = 0.0;
  double best_fpr = 0.0;
  // Summed over trials; the sample sizes behind the averaged rates.
  int64_t members = 0;
  int64_t nonmembers = 0;
};

absl::StatusOr<TrialOutcome> RunTrial(const DataSplits& data,
                                      const SgdConfig& config,
                                      double target_fpr);

NoiseLevelResult Aggregate(double sigma, std::span<const TrialOutcome> trials);

// Runs fn(0..count-1) on up to `threads` worker threads. Each index runs
// exactly once; callers write results into pre-sized slots so the outcome is
// independent of scheduling.
void ParallelFor(int64_t count, int threads,
                 const std::function<void(int64_t)>& fn);

}  // namespace dpaudit

#endif  // DPAUDIT_EVALUATION_H_
