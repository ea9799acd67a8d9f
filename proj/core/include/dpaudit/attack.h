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

// Loss-threshold membership inference. An example is predicted to be a
// training member iff its loss is <= the threshold (ties count as members).
// TPR is measured on the training split and FPR on the holdout split.

#ifndef DPAUDIT_ATTACK_H_
#define DPAUDIT_ATTACK_H_

#include <span>
#include <vector>

#include "absl/status/statusor.h"
#include "dpaudit/dataset.h"
#include "dpaudit/trainer.h"

namespace dpaudit {

// The FPR at which attack TPR is reported by default.
inline constexpr double kDefaultTargetFpr = 0.05;

struct AttackResult {
  double threshold = 0.0;
  double tpr = 0.0;
  double fpr = 0.0;
  // Always exactly tpr - fpr.
  double advantage = 0.0;
  int trials = 1;

  // Type II error rate, beta = 1 - tpr.
  double false_negative_rate() const { return 1.0 - tpr; }

  static AttackResult FromRates(double threshold, double tpr, double fpr,
                                int trials = 1) {
    return AttackResult{threshold, tpr, fpr, tpr - fpr, trials};
  }
};

struct RocPoint {
  double threshold = 0.0;
  double fpr = 0.0;
  double tpr = 0.0;
  friend bool operator==(const RocPoint&, const RocPoint&) = default;
};

// Staircase of (fpr, tpr), both non-decreasing, from (0, 0) to (1, 1).
struct RocCurve {
  std::vector<RocPoint> points;
};

// Attack with a fixed threshold over precomputed losses.
AttackResult ThresholdAttack(std::span<const double> member_losses,
                             std::span<const double> nonmember_losses,
                             double threshold);

// Threshold = mean training loss.
absl::StatusOr<AttackResult> YeomAttack(const Model& model,
                                        const Dataset& train,
                                        const Dataset& holdout);
absl::StatusOr<AttackResult> YeomAttack(std::span<const double> member_losses,
                                        std::span<const double> nonmember_losses);

// Sweeps every distinct pooled loss value plus -inf and +inf as thresholds.
absl::StatusOr<RocCurve> ComputeRoc(std::span<const double> member_losses,
                                    std::span<const double> nonmember_losses);

// TPR at the largest achievable FPR <= target_fpr. No interpolation, so the
// answer is always realized by an actual threshold.
double TprAtFpr(const RocCurve& curve, double target_fpr);

// The curve point realizing TprAtFpr.
RocPoint OperatingPoint(const RocCurve& curve, double target_fpr);

struct BestAdvantage {
  double advantage = 0.0;
  double threshold = 0.0;
  double fpr = 0.0;
  double tpr = 0.0;
};

// Max over the curve of tpr - fpr; ties go to the smaller fpr.
BestAdvantage ComputeBestAdvantage(const RocCurve& curve);

struct TrialLosses {
  std::vector<double> members;
  std::vector<double> nonmembers;
};

// Per-trial attack at `target_fpr`, arithmetically averaged over trials.
absl::StatusOr<AttackResult> AveragedAttack(std::span<const TrialLosses> trials,
                                            double target_fpr = kDefaultTargetFpr);

struct AttackTrial {
  const Model* model = nullptr;
  const Dataset* train = nullptr;
  const Dataset* holdout = nullptr;
};
absl::StatusOr<AttackResult> AveragedAttack(std::span<const AttackTrial> trials,
                                            double target_fpr = kDefaultTargetFpr);

}  // namespace dpaudit

#endif  // DPAUDIT_ATTACK_H_
