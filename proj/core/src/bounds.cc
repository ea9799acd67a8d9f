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

#include "dpaudit/bounds.h"

#include <algorithm>
#include <cmath>

#include "absl/strings/str_cat.h"

namespace dpaudit {

double TprUpperBound(double fpr, const PrivacyBudget& budget) {
  if (std::isinf(budget.epsilon)) return 1.0;
  return std::min(1.0, std::exp(budget.epsilon) * fpr + budget.delta);
}

double AdvantageUpperBound(const PrivacyBudget& budget) {
  const double decay = std::exp(-budget.epsilon);
  // 1 - e^-eps loses precision for tiny eps; -expm1(-eps) does not.
  return -std::expm1(-budget.epsilon) + budget.delta * decay;
}

double YeomAdvantageBound(double epsilon) {
  return std::min(1.0, std::expm1(epsilon));
}

absl::StatusOr<EpsilonLowerBound> EpsilonLowerBoundFromAdvantage(
    double advantage, double delta) {
  if (std::isnan(advantage) || advantage > 1) {
    return absl::InvalidArgumentError(
        absl::StrCat("advantage must be at most 1, got ", advantage));
  }
  if (std::isnan(delta) || delta < 0 || delta >= 1) {
    return absl::InvalidArgumentError(
        absl::StrCat("delta must be in [0, 1), got ", delta));
  }
  if (advantage == 1) return EpsilonLowerBound{true, 0.0};
  if (advantage <= delta) return EpsilonLowerBound{false, 0.0};
  // ln(1 - delta) - ln(1 - advantage), each via log1p.
  const double eps = std::log1p(-delta) - std::log1p(-advantage);
  return EpsilonLowerBound{false, std::max(0.0, eps)};
}

absl::Status CheckRegionConsistency(std::span<const PrivacyRegionPoint> points) {
  for (const PrivacyRegionPoint& p : points) {
    if (!p.status.ok()) continue;
    if (p.eps_lower > p.eps_upper) {
      return absl::InternalError(absl::StrCat(
          "region violated at sigma=", p.sigma, ": lower bound ", p.eps_lower,
          " exceeds upper bound ", p.eps_upper));
    }
  }
  return absl::OkStatus();
}

}  // namespace dpaudit
