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

#include <algorithm>
#include <numeric>

#include "absl/strings/str_cat.h"
#include "dpaudit/accountant.h"
#include "dpaudit/bounds.h"
#include "dpaudit/evaluation.h"

namespace dpaudit {

absl::StatusOr<std::vector<PrivacyRegionPoint>> PrivacyRegion(
    std::span<const double> sigma_grid, const RegionSetup& setup,
    double delta) {
  if (sigma_grid.empty()) {
    return absl::InvalidArgumentError("privacy region needs a non-empty sigma grid");
  }
  for (double sigma : sigma_grid) {
    if (!(sigma > 0)) {
      return absl::InvalidArgumentError(absl::StrCat(
          "privacy region needs positive noise multipliers, got ", sigma));
    }
  }
  if (setup.trial_data.empty()) {
    return absl::InvalidArgumentError("privacy region needs at least 1 trial");
  }
  if (!(delta > 0 && delta < 1)) {
    return absl::InvalidArgumentError(
        absl::StrCat("delta must be in (0, 1), got ", delta));
  }

  const int64_t grid = static_cast<int64_t>(sigma_grid.size());
  const int64_t trials = static_cast<int64_t>(setup.trial_data.size());
  std::vector<absl::StatusOr<TrialOutcome>> outcomes(
      grid * trials, absl::UnknownError("not run"));
  ParallelFor(grid * trials, setup.threads, [&](int64_t job) {
    const int64_t g = job / trials;
    const int64_t t = job % trials;
    const SgdConfig config =
        setup.sgd.WithNoise(sigma_grid[g])
            .WithSeed(TrainingSeed(setup.root_seed, t, g));
    outcomes[job] = RunTrial(setup.trial_data[t], config, setup.target_fpr);
  });

  std::vector<PrivacyRegionPoint> points(grid);
  for (int64_t g = 0; g < grid; ++g) {
    PrivacyRegionPoint& point = points[g];
    point.sigma = sigma_grid[g];
    point.analysis_used = AnalysisKind::kRdp;
    std::vector<TrialOutcome> ok;
    for (int64_t t = 0; t < trials; ++t) {
      const auto& o = outcomes[g * trials + t];
      if (!o.ok()) {
        point.status = o.status();
        break;
      }
      ok.push_back(*o);
    }
    if (!point.status.ok()) continue;
    const NoiseLevelResult level = Aggregate(point.sigma, ok);
    point.advantage_used = setup.source == LowerBoundSource::kBestThreshold
                               ? level.best_advantage
                               : level.at_fpr.advantage;
    absl::StatusOr<EpsilonLowerBound> lower =
        EpsilonLowerBoundFromAdvantage(point.advantage_used, delta);
    if (!lower.ok()) {
      point.status = lower.status();
      continue;
    }
    point.eps_lower = lower->value();
    absl::StatusOr<Accounting> upper =
        Account(setup.sgd.WithNoise(point.sigma), AnalysisKind::kRdp, delta);
    if (!upper.ok()) {
      point.status = upper.status();
      continue;
    }
    point.eps_upper = upper->budget.epsilon;
  }
  std::stable_sort(points.begin(), points.end(),
                   [](const PrivacyRegionPoint& a, const PrivacyRegionPoint& b) {
                     return a.sigma > b.sigma;
                   });
  return points;
}

}  // namespace dpaudit
