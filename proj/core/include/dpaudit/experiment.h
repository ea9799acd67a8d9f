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

// End-to-end audits: train DP-SGD models over a grid of noise levels (or of
// target epsilons, calibrating the noise for each analysis), attack them, and
// tabulate accuracy, attack success, the four analytic upper bounds and the
// attack-implied lower bound per noise level.

#ifndef DPAUDIT_EXPERIMENT_H_
#define DPAUDIT_EXPERIMENT_H_

#include <cstdint>
#include <optional>
#include <string>
#include <string_view>
#include <vector>

#include "absl/status/statusor.h"
#include "dpaudit/bounds.h"
#include "dpaudit/dataset.h"
#include "dpaudit/privacy_budget.h"

namespace dpaudit {

inline constexpr int kConfigVersion = 1;

struct DataSource {
  // Used when `train_csv` is empty.
  SyntheticSpec synthetic;
  std::string train_csv;
  std::string holdout_csv;

  bool is_csv() const { return !train_csv.empty(); }
  friend bool operator==(const DataSource&, const DataSource&) = default;
};

struct ExperimentConfig {
  DataSource data;
  // Template; the noise multiplier and seed are overridden per run.
  SgdConfig sgd;
  // Exactly one of the two grids is non-empty.
  std::vector<double> sigma_grid;
  std::vector<double> target_eps_grid;
  // Analyses to calibrate for in target mode.
  std::vector<AnalysisKind> analyses;
  double delta = 1e-5;
  int trials = 5;
  double target_fpr = 0.05;
  std::string output_dir = "audit_out";
  uint64_t root_seed = 0;
  int threads = 1;

  bool target_mode() const { return !target_eps_grid.empty(); }
  absl::Status Validate() const;

  friend bool operator==(const ExperimentConfig&,
                         const ExperimentConfig&) = default;
};

// JSON schema documented in docs/config.md. Unknown keys are rejected.
absl::StatusOr<ExperimentConfig> ParseExperimentConfig(std::string_view json);
absl::StatusOr<ExperimentConfig> LoadExperimentConfig(const std::string& path);
std::string ExperimentConfigToJson(const ExperimentConfig& config);

struct AuditRow {
  double sigma = 0.0;
  // Target mode only.
  std::optional<double> target_eps;
  std::optional<AnalysisKind> target_analysis;

  int trials = 0;
  double accuracy = 0.0;  // training accuracy, trial mean
  double holdout_accuracy = 0.0;
  double accuracy_rel_baseline = 0.0;
  double train_loss = 0.0;

  // Fixed-FPR operating point; attack_advantage == attack_tpr - attack_fpr.
  double attack_threshold = 0.0;
  double attack_tpr = 0.0;
  double attack_fpr = 0.0;
  double attack_advantage = 0.0;
  // Average-loss threshold attack.
  double yeom_tpr = 0.0;
  double yeom_fpr = 0.0;
  double yeom_advantage = 0.0;
  // Best threshold of the ROC sweep.
  double best_advantage = 0.0;
  double best_threshold = 0.0;
  // Normal-approximation 95% interval on the best advantage.
  double best_advantage_ci_low = 0.0;
  double best_advantage_ci_high = 0.0;

  // Upper bounds; +inf when sigma == 0.
  double eps_naive = 0.0;
  double eps_advanced = 0.0;
  double eps_zcdp = 0.0;
  double eps_rdp = 0.0;
  bool classical_gaussian_valid = true;

  // Lower bound from best_advantage (the default), and from the fixed-FPR
  // operating point.
  double eps_lower = 0.0;
  double eps_lower_at_fpr = 0.0;

  // Empty on success.
  std::string error;

  bool ok() const { return error.empty(); }
  friend bool operator==(const AuditRow&, const AuditRow&) = default;
};

struct ReportMetadata {
  int config_version = kConfigVersion;
  std::string config_hash;
  uint64_t root_seed = 0;
  std::string artifact_version;
  std::string gaussian_sampler;
  double delta = 0.0;
  double target_fpr = 0.0;
  std::string mode;  // "sigma" or "target"
  // The only field allowed to differ between identical runs.
  std::string timestamp;
  friend bool operator==(const ReportMetadata&, const ReportMetadata&) = default;
};

struct AuditReport {
  ReportMetadata metadata;
  std::vector<AuditRow> rows;

  bool all_failed() const;
  friend bool operator==(const AuditReport&, const AuditReport&) = default;
};

// Sigma mode: one row per sigma in grid order. Target mode: one row per
// (target, analysis), target-major. Per-row failures are recorded in the row;
// only an invalid config or unreadable data fails the whole call.
absl::StatusOr<AuditReport> RunExperiment(const ExperimentConfig& config);

// Trial datasets for `config`: synthetic data re-drawn per trial, or the
// same CSV splits for every trial.
absl::StatusOr<std::vector<DataSplits>> PrepareTrialData(
    const ExperimentConfig& config);

// Region-of-privacy points derived from a report's successful rows with
// sigma > 0, sorted by sigma descending.
std::vector<PrivacyRegionPoint> RegionFromReport(const AuditReport& report);

std::string ArtifactVersion();
// 64-bit FNV-1a of the canonical config JSON, as 16 hex digits.
std::string ConfigHash(const ExperimentConfig& config);

}  // namespace dpaudit

#endif  // DPAUDIT_EXPERIMENT_H_
