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

// Relations between an (epsilon, delta) guarantee and what any membership
// test can achieve against it, in both directions:
//
//   TPR <= e^eps * FPR + delta                     (hypothesis-test bound)
//   TPR - FPR <= 1 - e^-eps + delta * e^-eps       (advantage bound)
//   eps >= ln((1 - delta) / (1 - advantage))       (attack-implied lower bound)
//
// and the region of privacy: per noise level, the interval between the best
// attack-implied lower bound and the best analytic upper bound.

#ifndef DPAUDIT_BOUNDS_H_
#define DPAUDIT_BOUNDS_H_

#include <cstdint>
#include <limits>
#include <span>
#include <vector>

#include "absl/status/status.h"
#include "absl/status/statusor.h"
#include "dpaudit/dataset.h"
#include "dpaudit/privacy_budget.h"

namespace dpaudit {

// min(1, e^eps * fpr + delta).
double TprUpperBound(double fpr, const PrivacyBudget& budget);

// 1 - e^-eps + delta e^-eps.
double AdvantageUpperBound(const PrivacyBudget& budget);

// The older pure-DP bound min(1, e^eps - 1), kept as a comparator.
double YeomAdvantageBound(double epsilon);

// Result of inverting the advantage bound. An advantage of exactly 1 is
// consistent with no finite epsilon, which is reported as `unbounded` rather
// than as a number.
struct EpsilonLowerBound {
  bool unbounded = false;
  double epsilon = 0.0;

  double value() const {
    return unbounded ? std::numeric_limits<double>::infinity() : epsilon;
  }
};

// max(0, ln((1 - delta) / (1 - advantage))). Requires advantage <= 1 and
// 0 <= delta < 1.
absl::StatusOr<EpsilonLowerBound> EpsilonLowerBoundFromAdvantage(
    double advantage, double delta);

// Which attack operating point feeds the lower bound.
enum class LowerBoundSource {
  // Threshold maximising TPR - FPR over the ROC sweep.
  kBestThreshold,
  // The fixed-FPR operating point (5% by default).
  kFixedFpr,
};

struct PrivacyRegionPoint {
  double sigma = 0.0;
  double eps_lower = 0.0;
  double eps_upper = 0.0;
  double advantage_used = 0.0;
  AnalysisKind analysis_used = AnalysisKind::kRdp;
  // Non-OK if training or accounting failed for this noise level; the bound
  // fields are then meaningless.
  absl::Status status;
};

struct RegionSetup {
  // One train/holdout pair per trial.
  std::vector<DataSplits> trial_data;
  SgdConfig sgd;
  uint64_t root_seed = 0;
  LowerBoundSource source = LowerBoundSource::kBestThreshold;
  double target_fpr = 0.05;
  int threads = 1;
};

// Trains `trial_data.size()` models per sigma, averages the chosen attack
// advantage over trials, and pairs its lower bound with the RDP upper bound
// at `delta`. Points come back sorted by sigma descending. A failing noise
// level is marked through its status; the rest of the grid still runs.
absl::StatusOr<std::vector<PrivacyRegionPoint>> PrivacyRegion(
    std::span<const double> sigma_grid, const RegionSetup& setup, double delta);

// Checks eps_lower <= eps_upper on every successful point.
absl::Status CheckRegionConsistency(std::span<const PrivacyRegionPoint> points);

}  // namespace dpaudit

#endif  // DPAUDIT_BOUNDS_H_
