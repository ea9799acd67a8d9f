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

#include "dpaudit/attack.h"

#include <algorithm>
#include <cmath>
#include <limits>

#include "absl/strings/str_cat.h"

namespace dpaudit {
namespace {

constexpr double kInf = std::numeric_limits<double>::infinity();

// Advantages closer than this are ties (e.g. 2/3 - 1/3 vs 1/3).
constexpr double kAdvantageTieTolerance = 1e-12;

double Rate(int64_t count, size_t total) {
  return static_cast<double>(count) / static_cast<double>(total);
}

absl::Status CheckNonEmpty(std::span<const double> members,
                           std::span<const double> nonmembers) {
  if (members.empty() || nonmembers.empty()) {
    return absl::InvalidArgumentError(
        "membership inference needs non-empty member and non-member sets");
  }
  return absl::OkStatus();
}

}  // namespace

AttackResult ThresholdAttack(std::span<const double> member_losses,
                             std::span<const double> nonmember_losses,
                             double threshold) {
  auto count_le = [threshold](std::span<const double> v) {
    return static_cast<int64_t>(std::count_if(
        v.begin(), v.end(), [threshold](double l) { return l <= threshold; }));
  };
  return AttackResult::FromRates(
      threshold, Rate(count_le(member_losses), member_losses.size()),
      Rate(count_le(nonmember_losses), nonmember_losses.size()));
}

absl::StatusOr<AttackResult> YeomAttack(
    std::span<const double> member_losses,
    std::span<const double> nonmember_losses) {
  if (absl::Status s = CheckNonEmpty(member_losses, nonmember_losses); !s.ok()) {
    return s;
  }
  double sum = 0.0;
  for (double l : member_losses) sum += l;
  const double threshold = sum / static_cast<double>(member_losses.size());
  return ThresholdAttack(member_losses, nonmember_losses, threshold);
}

absl::StatusOr<AttackResult> YeomAttack(const Model& model,
                                        const Dataset& train,
                                        const Dataset& holdout) {
  const std::vector<double> members = PerExampleLosses(model, train);
  const std::vector<double> nonmembers = PerExampleLosses(model, holdout);
  return YeomAttack(members, nonmembers);
}

absl::StatusOr<RocCurve> ComputeRoc(std::span<const double> member_losses,
                                    std::span<const double> nonmember_losses) {
  if (absl::Status s = CheckNonEmpty(member_losses, nonmember_losses); !s.ok()) {
    return s;
  }
  std::vector<double> members(member_losses.begin(), member_losses.end());
  std::vector<double> nonmembers(nonmember_losses.begin(),
                                 nonmember_losses.end());
  std::sort(members.begin(), members.end());
  std::sort(nonmembers.begin(), nonmembers.end());
  std::vector<double> thresholds;
  thresholds.reserve(members.size() + nonmembers.size());
  std::merge(members.begin(), members.end(), nonmembers.begin(),
             nonmembers.end(), std::back_inserter(thresholds));
  thresholds.erase(std::unique(thresholds.begin(), thresholds.end()),
                   thresholds.end());

  RocCurve curve;
  curve.points.reserve(thresholds.size() + 2);
  curve.points.push_back({-kInf, 0.0, 0.0});
  size_t m = 0, n = 0;
  for (double t : thresholds) {
    while (m < members.size() && members[m] <= t) ++m;
    while (n < nonmembers.size() && nonmembers[n] <= t) ++n;
    curve.points.push_back({t, Rate(static_cast<int64_t>(n), nonmembers.size()),
                            Rate(static_cast<int64_t>(m), members.size())});
  }
  curve.points.push_back({kInf, 1.0, 1.0});
  return curve;
}

RocPoint OperatingPoint(const RocCurve& curve, double target_fpr) {
  RocPoint best{-kInf, 0.0, 0.0};
  for (const RocPoint& p : curve.points) {
    if (p.fpr > target_fpr) break;
    if (p.fpr > best.fpr || (p.fpr == best.fpr && p.tpr >= best.tpr)) best = p;
  }
  return best;
}

double TprAtFpr(const RocCurve& curve, double target_fpr) {
  return OperatingPoint(curve, target_fpr).tpr;
}

BestAdvantage ComputeBestAdvantage(const RocCurve& curve) {
  BestAdvantage best{-kInf, 0.0, 0.0, 0.0};
  for (const RocPoint& p : curve.points) {
    const double adv = p.tpr - p.fpr;
    if (adv > best.advantage + kAdvantageTieTolerance) {
      best = {adv, p.threshold, p.fpr, p.tpr};
    }
  }
  if (curve.points.empty()) best.advantage = 0.0;
  return best;
}

absl::StatusOr<AttackResult> AveragedAttack(std::span<const TrialLosses> trials,
                                            double target_fpr) {
  if (trials.empty()) {
    return absl::InvalidArgumentError("averaged attack needs at least 1 trial");
  }
  if (!(target_fpr >= 0 && target_fpr <= 1)) {
    return absl::InvalidArgumentError(
        absl::StrCat("target FPR must be in [0, 1], got ", target_fpr));
  }
  double tpr = 0.0, fpr = 0.0, threshold = 0.0;
  for (const TrialLosses& trial : trials) {
    absl::StatusOr<RocCurve> curve = ComputeRoc(trial.members, trial.nonmembers);
    if (!curve.ok()) return curve.status();
    const RocPoint point = OperatingPoint(*curve, target_fpr);
    tpr += point.tpr;
    fpr += point.fpr;
    threshold += point.threshold;
  }
  const double count = static_cast<double>(trials.size());
  return AttackResult::FromRates(threshold / count, tpr / count, fpr / count,
                                 static_cast<int>(trials.size()));
}

absl::StatusOr<AttackResult> AveragedAttack(std::span<const AttackTrial> trials,
                                            double target_fpr) {
  std::vector<TrialLosses> losses;
  losses.reserve(trials.size());
  for (const AttackTrial& trial : trials) {
    if (trial.model == nullptr || trial.train == nullptr ||
        trial.holdout == nullptr) {
      return absl::InvalidArgumentError("attack trial has a null member");
    }
    losses.push_back({PerExampleLosses(*trial.model, *trial.train),
                      PerExampleLosses(*trial.model, *trial.holdout)});
  }
  return AveragedAttack(losses, target_fpr);
}

}  // namespace dpaudit
