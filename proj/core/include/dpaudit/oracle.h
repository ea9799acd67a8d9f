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

// Exact ground truth for the test-bound and advantage-bound on mechanisms
// with a finite output alphabet. Every deterministic membership test over a
// finite alphabet is a subset of outputs; by Neyman-Pearson the optimal ones
// are prefixes of the outputs sorted by likelihood ratio P_in / P_out, so the
// exact ROC staircase is enumerable.

#ifndef DPAUDIT_ORACLE_H_
#define DPAUDIT_ORACLE_H_

#include <cstdint>
#include <optional>
#include <string>
#include <string_view>
#include <vector>

#include "absl/status/status.h"
#include "absl/status/statusor.h"
#include "dpaudit/attack.h"
#include "dpaudit/privacy_budget.h"
#include "dpaudit/random.h"

namespace dpaudit {

inline constexpr double kOracleTolerance = 1e-12;

// Output distributions of a mechanism on two neighbouring datasets, "in"
// (target record present) and "out", plus the budget it claims.
class FiniteMechanism {
 public:
  // Each vector must be non-negative and sum to 1 within 1e-12.
  static absl::StatusOr<FiniteMechanism> Create(std::vector<std::string> outputs,
                                                std::vector<double> p_in,
                                                std::vector<double> p_out,
                                                PrivacyBudget declared);

  // Declares the exact pure-DP budget: epsilon = max |ln(P_in / P_out)|,
  // delta = 0 (infinite epsilon if supports differ).
  static absl::StatusOr<FiniteMechanism> WithExactPureBudget(
      std::vector<std::string> outputs, std::vector<double> p_in,
      std::vector<double> p_out);

  // Randomized response on the target's bit: in reports 1 w.p. p.
  static absl::StatusOr<FiniteMechanism> RandomizedResponse(double p);

  // Random mechanism with `outputs` outputs and probabilities bounded away
  // from zero, declared with its exact pure budget.
  static FiniteMechanism Random(int outputs, RandomStream& stream);

  const std::vector<std::string>& outputs() const { return outputs_; }
  const std::vector<double>& p_in() const { return p_in_; }
  const std::vector<double>& p_out() const { return p_out_; }
  const PrivacyBudget& declared() const { return declared_; }
  size_t size() const { return outputs_.size(); }

 private:
  FiniteMechanism(std::vector<std::string> outputs, std::vector<double> p_in,
                  std::vector<double> p_out, PrivacyBudget declared)
      : outputs_(std::move(outputs)),
        p_in_(std::move(p_in)),
        p_out_(std::move(p_out)),
        declared_(declared) {}

  std::vector<std::string> outputs_;
  std::vector<double> p_in_;
  std::vector<double> p_out_;
  PrivacyBudget declared_;
};

// Smallest delta making the mechanism (epsilon, delta)-DP in both
// directions: max over directions of sum_o max(0, P(o) - e^eps Q(o)).
double RequiredDelta(const FiniteMechanism& m, double epsilon);

// OK iff the declared budget holds exactly (within 1e-12).
absl::Status VerifyDeclaredBudget(const FiniteMechanism& m);

// Likelihood-ratio staircase. Point thresholds are the likelihood ratio of
// the last output included (+inf for outputs impossible under "out").
// Outputs impossible under both distributions come last.
RocCurve ExactRoc(const FiniteMechanism& m);

struct TprBoundReport {
  size_t points_checked = 0;
  // Largest and smallest bound - tpr over all points.
  double max_slack = 0.0;
  double min_slack = 0.0;
  // Smallest slack over points strictly inside the unit square (the corners
  // are tight for trivial reasons); nullopt if the curve has no such point.
  std::optional<double> min_interior_slack;
  RocPoint tightest_interior_point;
  bool declared_budget_consistent = false;
};

// Checks tpr <= e^eps fpr + delta (+1e-12) at every exact ROC vertex under
// the declared budget. A violation is a FailedPrecondition naming the point.
absl::StatusOr<TprBoundReport> VerifyTprBound(const FiniteMechanism& m);

struct AdvantageBoundReport {
  double best_advantage = 0.0;
  double bound = 0.0;
  double gap = 0.0;
  RocPoint best_point;
};

// Checks the exact best advantage against 1 - e^-eps + delta e^-eps.
absl::StatusOr<AdvantageBoundReport> VerifyAdvantageBound(
    const FiniteMechanism& m);

// CSV rows "output_id,p_in,p_out", header optional. Without a declared
// budget the exact pure budget is used.
absl::StatusOr<FiniteMechanism> ParseMechanismCsv(
    std::string_view content, std::optional<PrivacyBudget> declared);
absl::StatusOr<FiniteMechanism> LoadMechanismCsv(
    const std::string& path, std::optional<PrivacyBudget> declared);

struct OracleSuiteResult {
  int mechanisms = 0;
  int tpr_bound_failures = 0;
  int advantage_bound_failures = 0;
  // Interior slack for randomized response with p = 0.75; 0 means tight.
  double rr_interior_slack = 0.0;
  std::vector<std::string> failures;

  bool ok() const {
    return tpr_bound_failures == 0 && advantage_bound_failures == 0;
  }
};

// Randomized response at p = 0.55, 0.60, ..., 0.95 and `random_mechanisms`
// random 8-output mechanisms.
OracleSuiteResult RunOracleSuite(uint64_t seed, int random_mechanisms = 20);

}  // namespace dpaudit

#endif  // DPAUDIT_ORACLE_H_
