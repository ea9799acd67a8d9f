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

#include "dpaudit/experiment.h"

#include <algorithm>
#include <chrono>
#include <cmath>
#include <ctime>
#include <limits>
#include <set>

#include "absl/strings/str_cat.h"
#include "absl/strings/str_format.h"
#include "absl/strings/str_join.h"
#include "dpaudit/accountant.h"
#include "dpaudit/evaluation.h"
#include "dpaudit/random.h"
#include "json.hpp"

#ifndef DPAUDIT_VERSION
#define DPAUDIT_VERSION "0.0.0"
#endif

namespace dpaudit {
namespace {

using nlohmann::json;

constexpr double kInf = std::numeric_limits<double>::infinity();
// Grid-point id reserved for the per-trial noiseless baseline.
constexpr uint64_t kBaselineGridPoint = uint64_t{1} << 32;
constexpr double kZ95 = 1.959963984540054;

template <typename T>
absl::Status Read(const json& obj, std::string_view key, T& out) {
  const auto it = obj.find(std::string(key));
  if (it == obj.end()) return absl::OkStatus();
  try {
    out = it->get<T>();
  } catch (const json::exception& e) {
    return absl::InvalidArgumentError(
        absl::StrCat("config key '", std::string(key), "': ", e.what()));
  }
  return absl::OkStatus();
}

absl::Status RejectUnknown(const json& obj, std::string_view where,
                           std::initializer_list<std::string_view> known) {
  for (const auto& [key, value] : obj.items()) {
    if (std::find(known.begin(), known.end(), key) == known.end()) {
      return absl::InvalidArgumentError(
          absl::StrCat("unknown config key '", key, "' in ", std::string(where)));
    }
  }
  return absl::OkStatus();
}

#define DPAUDIT_RETURN_IF_ERROR(expr)          \
  do {                                         \
    if (absl::Status _s = (expr); !_s.ok()) {  \
      return _s;                               \
    }                                          \
  } while (0)

std::string Timestamp() {
  const std::time_t now =
      std::chrono::system_clock::to_time_t(std::chrono::system_clock::now());
  std::tm utc{};
  gmtime_r(&now, &utc);
  char buf[32];
  std::strftime(buf, sizeof(buf), "%Y-%m-%dT%H:%M:%SZ", &utc);
  return buf;
}

struct RowPlan {
  double sigma = 0.0;
  std::optional<double> target_eps;
  std::optional<AnalysisKind> target_analysis;
  std::string error;
};

void FillBounds(const SgdConfig& sgd, double delta, AuditRow& row) {
  if (row.sigma == 0) {
    row.eps_naive = row.eps_advanced = row.eps_zcdp = row.eps_rdp = kInf;
  } else {
    const SgdConfig config = sgd.WithNoise(row.sigma);
    for (AnalysisKind kind : kAllAnalyses) {
      absl::StatusOr<Accounting> acc = Account(config, kind, delta);
      if (!acc.ok()) {
        row.error = std::string(acc.status().message());
        return;
      }
      const double eps = acc->budget.epsilon;
      switch (kind) {
        case AnalysisKind::kNaive:
          row.eps_naive = eps;
          row.classical_gaussian_valid = acc->classical_bound_valid;
          break;
        case AnalysisKind::kAdvanced:
          row.eps_advanced = eps;
          break;
        case AnalysisKind::kZCdp:
          row.eps_zcdp = eps;
          break;
        case AnalysisKind::kRdp:
          row.eps_rdp = eps;
          break;
      }
    }
  }
  absl::StatusOr<EpsilonLowerBound> best =
      EpsilonLowerBoundFromAdvantage(row.best_advantage, delta);
  absl::StatusOr<EpsilonLowerBound> at_fpr =
      EpsilonLowerBoundFromAdvantage(row.attack_advantage, delta);
  if (!best.ok() || !at_fpr.ok()) {
    row.error = std::string((best.ok() ? at_fpr : best).status().message());
    return;
  }
  row.eps_lower = best->value();
  row.eps_lower_at_fpr = at_fpr->value();
}

void FillAttack(const NoiseLevelResult& level, AuditRow& row) {
  row.trials = level.trials;
  row.accuracy = level.train_accuracy;
  row.holdout_accuracy = level.holdout_accuracy;
  row.train_loss = level.final_train_loss;
  row.attack_threshold = level.at_fpr.threshold;
  row.attack_tpr = level.at_fpr.tpr;
  row.attack_fpr = level.at_fpr.fpr;
  row.attack_advantage = level.at_fpr.advantage;
  row.yeom_tpr = level.yeom.tpr;
  row.yeom_fpr = level.yeom.fpr;
  row.yeom_advantage = level.yeom.advantage;
  row.best_advantage = level.best_advantage;
  row.best_threshold = level.best_threshold;
  const double var =
      level.best_tpr * (1 - level.best_tpr) / static_cast<double>(level.members) +
      level.best_fpr * (1 - level.best_fpr) / static_cast<double>(level.nonmembers);
  const double half = kZ95 * std::sqrt(var);
  row.best_advantage_ci_low = level.best_advantage - half;
  row.best_advantage_ci_high = level.best_advantage + half;
}

}  // namespace

absl::Status ExperimentConfig::Validate() const {
  if (sigma_grid.empty() == target_eps_grid.empty()) {
    return absl::InvalidArgumentError(
        "exactly one of sigma_grid and target_eps_grid must be non-empty");
  }
  for (double s : sigma_grid) {
    if (!(s >= 0) || !std::isfinite(s)) {
      return absl::InvalidArgumentError(
          absl::StrCat("sigma grid values must be finite and >= 0, got ", s));
    }
  }
  for (double t : target_eps_grid) {
    if (!(t > 0) || !std::isfinite(t)) {
      return absl::InvalidArgumentError(
          absl::StrCat("target epsilons must be positive, got ", t));
    }
  }
  if (target_mode() && analyses.empty()) {
    return absl::InvalidArgumentError(
        "target_eps_grid needs a non-empty analyses list");
  }
  if (!(delta > 0 && delta < 1)) {
    return absl::InvalidArgumentError(
        absl::StrCat("delta must be in (0, 1), got ", delta));
  }
  if (trials < 1) {
    return absl::InvalidArgumentError(
        absl::StrCat("trials must be at least 1, got ", trials));
  }
  if (!(target_fpr >= 0 && target_fpr <= 1)) {
    return absl::InvalidArgumentError(
        absl::StrCat("target_fpr must be in [0, 1], got ", target_fpr));
  }
  if (threads < 1) {
    return absl::InvalidArgumentError("threads must be at least 1");
  }
  if (data.is_csv() == false) {
    const SyntheticSpec& s = data.synthetic;
    if (s.rows_per_split <= 0 || s.dim <= 0 || s.classes <= 0 ||
        !(s.separation >= 0)) {
      return absl::InvalidArgumentError("invalid synthetic data parameters");
    }
  } else if (data.holdout_csv.empty()) {
    return absl::InvalidArgumentError("train_csv requires holdout_csv");
  }
  return sgd.Validate(/*allow_zero_noise=*/true);
}

absl::StatusOr<ExperimentConfig> ParseExperimentConfig(std::string_view text) {
  json root;
  try {
    root = json::parse(text);
  } catch (const json::exception& e) {
    return absl::InvalidArgumentError(
        absl::StrCat("config is not valid JSON: ", e.what()));
  }
  if (!root.is_object()) {
    return absl::InvalidArgumentError("config must be a JSON object");
  }
  DPAUDIT_RETURN_IF_ERROR(RejectUnknown(
      root, "config",
      {"config_version", "data", "sgd", "sigma_grid", "target_eps_grid",
       "analyses", "delta", "trials", "target_fpr", "output_dir", "root_seed",
       "threads"}));
  int version = 0;
  DPAUDIT_RETURN_IF_ERROR(Read(root, "config_version", version));
  if (version != kConfigVersion) {
    return absl::InvalidArgumentError(absl::StrCat(
        "config_version must be ", kConfigVersion, ", got ", version));
  }

  ExperimentConfig config;
  config.sgd.noise_multiplier = 0;
  if (auto it = root.find("data"); it != root.end()) {
    const json& data = *it;
    if (!data.is_object()) {
      return absl::InvalidArgumentError("'data' must be an object");
    }
    DPAUDIT_RETURN_IF_ERROR(
        RejectUnknown(data, "data", {"synthetic", "train_csv", "holdout_csv"}));
    DPAUDIT_RETURN_IF_ERROR(Read(data, "train_csv", config.data.train_csv));
    DPAUDIT_RETURN_IF_ERROR(Read(data, "holdout_csv", config.data.holdout_csv));
    if (auto syn = data.find("synthetic"); syn != data.end()) {
      if (!syn->is_object()) {
        return absl::InvalidArgumentError("'data.synthetic' must be an object");
      }
      DPAUDIT_RETURN_IF_ERROR(
          RejectUnknown(*syn, "data.synthetic",
                        {"rows_per_split", "dim", "classes", "separation"}));
      SyntheticSpec& s = config.data.synthetic;
      DPAUDIT_RETURN_IF_ERROR(Read(*syn, "rows_per_split", s.rows_per_split));
      DPAUDIT_RETURN_IF_ERROR(Read(*syn, "dim", s.dim));
      DPAUDIT_RETURN_IF_ERROR(Read(*syn, "classes", s.classes));
      DPAUDIT_RETURN_IF_ERROR(Read(*syn, "separation", s.separation));
    }
  }
  if (auto it = root.find("sgd"); it != root.end()) {
    if (!it->is_object()) {
      return absl::InvalidArgumentError("'sgd' must be an object");
    }
    DPAUDIT_RETURN_IF_ERROR(RejectUnknown(
        *it, "sgd", {"clip_norm", "sampling_rate", "epochs", "learning_rate"}));
    DPAUDIT_RETURN_IF_ERROR(Read(*it, "clip_norm", config.sgd.clip_norm));
    DPAUDIT_RETURN_IF_ERROR(Read(*it, "sampling_rate", config.sgd.sampling_rate));
    DPAUDIT_RETURN_IF_ERROR(Read(*it, "epochs", config.sgd.epochs));
    DPAUDIT_RETURN_IF_ERROR(Read(*it, "learning_rate", config.sgd.learning_rate));
  }
  if (!(config.sgd.sampling_rate > 0) || config.sgd.epochs < 1) {
    return absl::InvalidArgumentError(
        "sgd.sampling_rate must be > 0 and sgd.epochs >= 1");
  }
  config.sgd.steps =
      SgdConfig::StepsFor(config.sgd.epochs, config.sgd.sampling_rate);

  DPAUDIT_RETURN_IF_ERROR(Read(root, "sigma_grid", config.sigma_grid));
  DPAUDIT_RETURN_IF_ERROR(Read(root, "target_eps_grid", config.target_eps_grid));
  std::vector<std::string> analyses;
  DPAUDIT_RETURN_IF_ERROR(Read(root, "analyses", analyses));
  for (const std::string& name : analyses) {
    absl::StatusOr<AnalysisKind> kind = ParseAnalysisKind(name);
    if (!kind.ok()) return kind.status();
    config.analyses.push_back(*kind);
  }
  DPAUDIT_RETURN_IF_ERROR(Read(root, "delta", config.delta));
  DPAUDIT_RETURN_IF_ERROR(Read(root, "trials", config.trials));
  DPAUDIT_RETURN_IF_ERROR(Read(root, "target_fpr", config.target_fpr));
  DPAUDIT_RETURN_IF_ERROR(Read(root, "output_dir", config.output_dir));
  DPAUDIT_RETURN_IF_ERROR(Read(root, "root_seed", config.root_seed));
  DPAUDIT_RETURN_IF_ERROR(Read(root, "threads", config.threads));
  DPAUDIT_RETURN_IF_ERROR(config.Validate());
  return config;
}

absl::StatusOr<ExperimentConfig> LoadExperimentConfig(const std::string& path) {
  absl::StatusOr<std::string> text = ReadFile(path);
  if (!text.ok()) return text.status();
  absl::StatusOr<ExperimentConfig> config = ParseExperimentConfig(*text);
  if (!config.ok()) {
    return absl::InvalidArgumentError(
        absl::StrCat(path, ": ", config.status().message()));
  }
  return config;
}

std::string ExperimentConfigToJson(const ExperimentConfig& config) {
  json root;
  root["config_version"] = kConfigVersion;
  if (config.data.is_csv()) {
    root["data"] = {{"train_csv", config.data.train_csv},
                    {"holdout_csv", config.data.holdout_csv}};
  } else {
    const SyntheticSpec& s = config.data.synthetic;
    root["data"]["synthetic"] = {{"rows_per_split", s.rows_per_split},
                                 {"dim", s.dim},
                                 {"classes", s.classes},
                                 {"separation", s.separation}};
  }
  root["sgd"] = {{"clip_norm", config.sgd.clip_norm},
                 {"sampling_rate", config.sgd.sampling_rate},
                 {"epochs", config.sgd.epochs},
                 {"learning_rate", config.sgd.learning_rate}};
  if (config.target_mode()) {
    root["target_eps_grid"] = config.target_eps_grid;
    std::vector<std::string> names;
    for (AnalysisKind k : config.analyses) {
      names.emplace_back(AnalysisKindName(k));
    }
    root["analyses"] = names;
  } else {
    root["sigma_grid"] = config.sigma_grid;
  }
  root["delta"] = config.delta;
  root["trials"] = config.trials;
  root["target_fpr"] = config.target_fpr;
  root["output_dir"] = config.output_dir;
  root["root_seed"] = config.root_seed;
  root["threads"] = config.threads;
  return root.dump(2);
}

std::string ArtifactVersion() { return DPAUDIT_VERSION; }

std::string ConfigHash(const ExperimentConfig& config) {
  // Output placement and threading do not affect results.
  ExperimentConfig canonical = config;
  canonical.output_dir.clear();
  canonical.threads = 1;
  uint64_t hash = 0xcbf29ce484222325ULL;
  for (unsigned char c : ExperimentConfigToJson(canonical)) {
    hash ^= c;
    hash *= 0x100000001b3ULL;
  }
  return absl::StrFormat("%016x", hash);
}

bool AuditReport::all_failed() const {
  return !rows.empty() &&
         std::all_of(rows.begin(), rows.end(),
                     [](const AuditRow& r) { return !r.ok(); });
}

absl::StatusOr<std::vector<DataSplits>> PrepareTrialData(
    const ExperimentConfig& config) {
  std::vector<DataSplits> trials;
  if (config.data.is_csv()) {
    absl::StatusOr<Dataset> train =
        LoadCsv(config.data.train_csv, SplitTag::kTrain);
    if (!train.ok()) return train.status();
    absl::StatusOr<Dataset> holdout =
        LoadCsv(config.data.holdout_csv, SplitTag::kHoldout);
    if (!holdout.ok()) return holdout.status();
    if (train->dim != holdout->dim) {
      return absl::InvalidArgumentError(absl::StrCat(
          "train has ", train->dim, " features but holdout has ", holdout->dim));
    }
    const int classes = std::max(train->classes, holdout->classes);
    train->classes = holdout->classes = classes;
    trials.assign(config.trials, DataSplits{*train, *holdout});
    return trials;
  }
  for (int t = 0; t < config.trials; ++t) {
    SyntheticSpec spec = config.data.synthetic;
    spec.seed = DataSeed(config.root_seed, static_cast<uint64_t>(t));
    absl::StatusOr<DataSplits> splits = GenerateSynthetic(spec);
    if (!splits.ok()) return splits.status();
    trials.push_back(std::move(*splits));
  }
  return trials;
}

absl::StatusOr<AuditReport> RunExperiment(const ExperimentConfig& config) {
  DPAUDIT_RETURN_IF_ERROR(config.Validate());
  absl::StatusOr<std::vector<DataSplits>> data = PrepareTrialData(config);
  if (!data.ok()) return data.status();

  AuditReport report;
  ReportMetadata& meta = report.metadata;
  meta.config_hash = ConfigHash(config);
  meta.root_seed = config.root_seed;
  meta.artifact_version = ArtifactVersion();
  meta.gaussian_sampler = std::string(kGaussianSamplerName);
  meta.delta = config.delta;
  meta.target_fpr = config.target_fpr;
  meta.mode = config.target_mode() ? "target" : "sigma";
  meta.timestamp = Timestamp();

  // Decide the noise level of every row.
  std::vector<RowPlan> plans;
  if (config.target_mode()) {
    for (double target : config.target_eps_grid) {
      for (AnalysisKind kind : config.analyses) {
        RowPlan plan;
        plan.target_eps = target;
        plan.target_analysis = kind;
        absl::StatusOr<double> sigma =
            CalibrateNoiseMultiplier(target, kind, config.sgd, config.delta);
        if (sigma.ok()) {
          plan.sigma = *sigma;
        } else {
          plan.error = absl::StrCat("calibration failed: ",
                                    sigma.status().message());
        }
        plans.push_back(std::move(plan));
      }
    }
  } else {
    for (double sigma : config.sigma_grid) plans.push_back({sigma, {}, {}, {}});
  }

  // Jobs: every (row, trial) with a usable sigma, plus one baseline per trial.
  const int64_t trials = config.trials;
  const int64_t rows = static_cast<int64_t>(plans.size());
  std::vector<absl::StatusOr<TrialOutcome>> outcomes(
      (rows + 1) * trials, absl::UnknownError("not run"));
  ParallelFor((rows + 1) * trials, config.threads, [&](int64_t job) {
    const int64_t r = job / trials;
    const int64_t t = job % trials;
    const bool baseline = r == rows;
    if (!baseline && (!plans[r].error.empty() || plans[r].sigma == 0)) return;
    const double sigma = baseline ? 0.0 : plans[r].sigma;
    const uint64_t grid_point =
        baseline ? kBaselineGridPoint : static_cast<uint64_t>(r);
    const SgdConfig sgd = config.sgd.WithNoise(sigma).WithSeed(
        TrainingSeed(config.root_seed, static_cast<uint64_t>(t), grid_point));
    outcomes[job] = RunTrial((*data)[t], sgd, config.target_fpr);
  });

  auto trial_results = [&](int64_t r,
                           std::vector<TrialOutcome>& out) -> absl::Status {
    out.clear();
    for (int64_t t = 0; t < trials; ++t) {
      const auto& o = outcomes[r * trials + t];
      if (!o.ok()) return o.status();
      out.push_back(*o);
    }
    return absl::OkStatus();
  };

  std::vector<TrialOutcome> baseline_trials;
  const absl::Status baseline_status = trial_results(rows, baseline_trials);
  const NoiseLevelResult baseline = Aggregate(0.0, baseline_trials);

  for (int64_t r = 0; r < rows; ++r) {
    const RowPlan& plan = plans[r];
    AuditRow row;
    row.sigma = plan.sigma;
    row.target_eps = plan.target_eps;
    row.target_analysis = plan.target_analysis;
    row.error = plan.error;
    if (row.ok()) {
      std::vector<TrialOutcome> results;
      absl::Status status = plan.sigma == 0 ? baseline_status
                                            : trial_results(r, results);
      if (plan.sigma == 0) results = baseline_trials;
      if (!status.ok()) {
        row.error = std::string(status.message());
      } else {
        const NoiseLevelResult level = Aggregate(plan.sigma, results);
        FillAttack(level, row);
        if (plan.sigma == 0) {
          row.accuracy_rel_baseline = 1.0;
        } else if (baseline_status.ok() && baseline.train_accuracy > 0) {
          row.accuracy_rel_baseline =
              level.train_accuracy / baseline.train_accuracy;
        }
        FillBounds(config.sgd, config.delta, row);
      }
    }
    report.rows.push_back(std::move(row));
  }
  return report;
}

std::vector<PrivacyRegionPoint> RegionFromReport(const AuditReport& report) {
  std::vector<PrivacyRegionPoint> points;
  for (const AuditRow& row : report.rows) {
    if (!row.ok() || row.sigma <= 0) continue;
    PrivacyRegionPoint p;
    p.sigma = row.sigma;
    p.eps_lower = row.eps_lower;
    p.eps_upper = row.eps_rdp;
    p.advantage_used = row.best_advantage;
    p.analysis_used = AnalysisKind::kRdp;
    points.push_back(p);
  }
  std::stable_sort(points.begin(), points.end(),
                   [](const PrivacyRegionPoint& a, const PrivacyRegionPoint& b) {
                     return a.sigma > b.sigma;
                   });
  return points;
}

}  // namespace dpaudit
