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

#include "cli.h"

#include <cmath>
#include <filesystem>
#include <functional>
#include <optional>
#include <string>
#include <vector>

#include "CLI11.hpp"
#include "absl/status/status.h"
#include "absl/strings/str_cat.h"
#include "absl/strings/str_format.h"
#include "dpaudit/accountant.h"
#include "dpaudit/attack.h"
#include "dpaudit/bounds.h"
#include "dpaudit/dataset.h"
#include "dpaudit/experiment.h"
#include "dpaudit/oracle.h"
#include "dpaudit/report.h"
#include "dpaudit/trainer.h"

namespace dpaudit {
namespace {

constexpr int kExitOk = 0;
constexpr int kExitFailure = 1;
constexpr int kExitUsage = 2;

std::string Real(double v) {
  if (std::isinf(v)) return v > 0 ? "inf" : "-inf";
  return absl::StrFormat("%.6g", v);
}

int Fail(std::ostream& err, const absl::Status& status) {
  err << "error: " << status.message() << "\n";
  return kExitFailure;
}

int Usage(std::ostream& err, absl::string_view message) {
  err << "error: " << message << "\n";
  return kExitUsage;
}

std::vector<AnalysisKind> SelectAnalyses(const std::string& name) {
  if (name == "all") return {std::begin(kAllAnalyses), std::end(kAllAnalyses)};
  absl::StatusOr<AnalysisKind> kind = ParseAnalysisKind(name);
  if (!kind.ok()) return {};
  return {*kind};
}

const std::vector<std::string> kAnalysisChoices = {"naive", "advanced", "zcdp",
                                                   "rdp", "all"};

struct AccountFlags {
  double sigma = 0;
  double q = 0;
  int64_t steps = 0;
  double delta = 1e-5;
  std::string analysis = "all";
};

int RunAccount(const AccountFlags& f, std::ostream& out, std::ostream& err) {
  SgdConfig config;
  config.noise_multiplier = f.sigma;
  config.sampling_rate = f.q;
  config.steps = f.steps;
  for (AnalysisKind kind : SelectAnalyses(f.analysis)) {
    absl::StatusOr<Accounting> acc = Account(config, kind, f.delta);
    if (!acc.ok()) return Fail(err, acc.status());
    out << AnalysisKindName(kind) << ": epsilon=" << Real(acc->budget.epsilon)
        << " delta=" << Real(acc->budget.delta);
    if (acc->best_order) out << " order=" << Real(*acc->best_order);
    if (!acc->classical_bound_valid) out << " (per-step epsilon exceeds 1)";
    out << "\n";
  }
  return kExitOk;
}

struct CalibrateFlags {
  double target_eps = 0;
  double q = 0.02;
  int64_t steps = 5000;
  double delta = 1e-5;
  std::string analysis = "all";
};

int RunCalibrate(const CalibrateFlags& f, std::ostream& out,
                 std::ostream& err) {
  SgdConfig config;
  config.sampling_rate = f.q;
  config.steps = f.steps;
  int status = kExitOk;
  for (AnalysisKind kind : SelectAnalyses(f.analysis)) {
    absl::StatusOr<double> sigma =
        CalibrateNoiseMultiplier(f.target_eps, kind, config, f.delta);
    if (!sigma.ok()) {
      err << AnalysisKindName(kind) << ": " << sigma.status().message() << "\n";
      status = kExitFailure;
      continue;
    }
    absl::StatusOr<Accounting> acc =
        Account(config.WithNoise(*sigma), kind, f.delta);
    if (!acc.ok()) return Fail(err, acc.status());
    out << AnalysisKindName(kind) << ": sigma=" << Real(*sigma)
        << " epsilon=" << Real(acc->budget.epsilon) << "\n";
  }
  return status;
}

struct DataFlags {
  std::string train_csv;
  std::string holdout_csv;
  SyntheticSpec synthetic;
};

absl::StatusOr<DataSplits> LoadData(const DataFlags& f) {
  if (f.train_csv.empty()) return GenerateSynthetic(f.synthetic);
  if (f.holdout_csv.empty()) {
    return absl::InvalidArgumentError("--train-csv requires --holdout-csv");
  }
  absl::StatusOr<Dataset> train = LoadCsv(f.train_csv, SplitTag::kTrain);
  if (!train.ok()) return train.status();
  absl::StatusOr<Dataset> holdout = LoadCsv(f.holdout_csv, SplitTag::kHoldout);
  if (!holdout.ok()) return holdout.status();
  const int classes = std::max(train->classes, holdout->classes);
  train->classes = holdout->classes = classes;
  return DataSplits{std::move(*train), std::move(*holdout)};
}

struct TrainFlags {
  DataFlags data;
  SgdConfig sgd;
  std::string model_out;
  std::string write_data;
};

int RunTrain(TrainFlags f, std::ostream& out, std::ostream& err) {
  absl::StatusOr<DataSplits> data = LoadData(f.data);
  if (!data.ok()) return Fail(err, data.status());
  f.sgd.steps = SgdConfig::StepsFor(f.sgd.epochs, f.sgd.sampling_rate);
  absl::StatusOr<TrainResult> result = TrainDpSgd(data->train, f.sgd);
  if (!result.ok()) return Fail(err, result.status());
  const Model& model = result->model;
  out << "steps: " << model.realized_steps << "\n"
      << "train_loss: " << Real(model.final_train_loss) << "\n"
      << "train_accuracy: " << Real(Accuracy(model, data->train)) << "\n"
      << "holdout_accuracy: " << Real(Accuracy(model, data->holdout)) << "\n";
  if (!f.model_out.empty()) {
    if (absl::Status s = SaveModel(model, f.model_out); !s.ok()) {
      return Fail(err, s);
    }
    out << "model: " << f.model_out << "\n";
  }
  if (!f.write_data.empty()) {
    std::error_code ec;
    std::filesystem::create_directories(f.write_data, ec);
    const std::filesystem::path dir(f.write_data);
    for (const auto& [name, set] :
         {std::pair<const char*, const Dataset*>{"train.csv", &data->train},
          {"holdout.csv", &data->holdout}}) {
      if (absl::Status s = WriteCsv(*set, (dir / name).string()); !s.ok()) {
        return Fail(err, s);
      }
    }
  }
  return kExitOk;
}

struct AttackFlags {
  std::string model;
  std::string train_csv;
  std::string holdout_csv;
  double target_fpr = kDefaultTargetFpr;
  double delta = 1e-5;
  std::string losses_out;
};

int RunAttack(const AttackFlags& f, std::ostream& out, std::ostream& err) {
  absl::StatusOr<Model> model = LoadModel(f.model);
  if (!model.ok()) return Fail(err, model.status());
  DataFlags data_flags;
  data_flags.train_csv = f.train_csv;
  data_flags.holdout_csv = f.holdout_csv;
  absl::StatusOr<DataSplits> data = LoadData(data_flags);
  if (!data.ok()) return Fail(err, data.status());
  if (data->train.dim != model->dim) {
    return Fail(err, absl::InvalidArgumentError(absl::StrCat(
                         "model expects ", model->dim, " features, data has ",
                         data->train.dim)));
  }
  data->train.classes = data->holdout.classes = model->classes;
  const std::vector<double> members = PerExampleLosses(*model, data->train);
  const std::vector<double> nonmembers =
      PerExampleLosses(*model, data->holdout);
  absl::StatusOr<AttackResult> yeom = YeomAttack(members, nonmembers);
  if (!yeom.ok()) return Fail(err, yeom.status());
  absl::StatusOr<RocCurve> roc = ComputeRoc(members, nonmembers);
  if (!roc.ok()) return Fail(err, roc.status());
  const RocPoint at = OperatingPoint(*roc, f.target_fpr);
  const BestAdvantage best = ComputeBestAdvantage(*roc);
  absl::StatusOr<EpsilonLowerBound> lower =
      EpsilonLowerBoundFromAdvantage(best.advantage, f.delta);
  if (!lower.ok()) return Fail(err, lower.status());
  out << "yeom: threshold=" << Real(yeom->threshold)
      << " tpr=" << Real(yeom->tpr) << " fpr=" << Real(yeom->fpr)
      << " advantage=" << Real(yeom->advantage) << "\n"
      << "at_fpr " << Real(f.target_fpr) << ": tpr=" << Real(at.tpr)
      << " fpr=" << Real(at.fpr) << " advantage=" << Real(at.tpr - at.fpr)
      << "\n"
      << "best: threshold=" << Real(best.threshold)
      << " advantage=" << Real(best.advantage) << "\n"
      << "eps_lower: " << Real(lower->value()) << "\n";
  if (!f.losses_out.empty()) {
    std::error_code ec;
    std::filesystem::create_directories(f.losses_out, ec);
    const std::filesystem::path dir(f.losses_out);
    if (absl::Status s =
            WriteLossesCsv(members, (dir / "member_losses.csv").string());
        !s.ok()) {
      return Fail(err, s);
    }
    if (absl::Status s =
            WriteLossesCsv(nonmembers, (dir / "nonmember_losses.csv").string());
        !s.ok()) {
      return Fail(err, s);
    }
  }
  return kExitOk;
}

struct AuditFlags {
  std::string config;
  std::string out_dir;
  int threads = 0;
};

int RunAudit(const AuditFlags& f, std::ostream& out, std::ostream& err) {
  absl::StatusOr<ExperimentConfig> config = LoadExperimentConfig(f.config);
  if (!config.ok()) return Usage(err, config.status().message());
  if (!f.out_dir.empty()) config->output_dir = f.out_dir;
  if (f.threads > 0) config->threads = f.threads;
  absl::StatusOr<AuditReport> report = RunExperiment(*config);
  if (!report.ok()) return Fail(err, report.status());
  if (absl::Status s = EmitReport(*report, config->output_dir); !s.ok()) {
    return Fail(err, s);
  }
  for (const AuditRow& row : report->rows) {
    out << "sigma=" << Real(row.sigma);
    if (row.target_eps) {
      out << " target=" << Real(*row.target_eps) << "/"
          << AnalysisKindName(*row.target_analysis);
    }
    if (!row.ok()) {
      out << " error: " << row.error << "\n";
      continue;
    }
    out << " accuracy=" << Real(row.accuracy)
        << " tpr@fpr=" << Real(row.attack_tpr)
        << " eps_lower=" << Real(row.eps_lower)
        << " eps_rdp=" << Real(row.eps_rdp) << "\n";
  }
  out << "report: " << config->output_dir << "\n";
  if (report->all_failed()) {
    err << "error: every row failed\n";
    return kExitFailure;
  }
  return kExitOk;
}

struct OracleFlags {
  std::string mechanism;
  std::optional<double> eps;
  double delta = 0;
  uint64_t seed = 0;
};

int RunOracle(const OracleFlags& f, std::ostream& out, std::ostream& err) {
  bool prop1 = true, prop2 = true;
  std::vector<std::string> failures;
  if (!f.mechanism.empty()) {
    std::optional<PrivacyBudget> declared;
    if (f.eps) declared = PrivacyBudget{*f.eps, f.delta};
    absl::StatusOr<FiniteMechanism> m = LoadMechanismCsv(f.mechanism, declared);
    if (!m.ok()) return Fail(err, m.status());
    if (absl::Status s = VerifyDeclaredBudget(*m); !s.ok()) {
      failures.push_back(absl::StrCat("declared budget: ", s.message()));
    }
    absl::StatusOr<TprBoundReport> tpr = VerifyTprBound(*m);
    if (!tpr.ok()) {
      prop1 = false;
      failures.push_back(std::string(tpr.status().message()));
    }
    absl::StatusOr<AdvantageBoundReport> adv = VerifyAdvantageBound(*m);
    if (!adv.ok()) {
      prop2 = false;
      failures.push_back(std::string(adv.status().message()));
    } else {
      out << "best advantage " << Real(adv->best_advantage) << ", bound "
          << Real(adv->bound) << "\n";
    }
  } else {
    const OracleSuiteResult suite = RunOracleSuite(f.seed);
    prop1 = suite.tpr_bound_failures == 0;
    prop2 = suite.advantage_bound_failures == 0;
    failures = suite.failures;
    out << "mechanisms checked: " << suite.mechanisms
        << ", randomized response p=0.75 interior slack: "
        << Real(suite.rr_interior_slack) << "\n";
  }
  for (const std::string& f : failures) err << f << "\n";
  out << "prop1: " << (prop1 ? "pass" : "fail")
      << ", prop2: " << (prop2 ? "pass" : "fail") << "\n";
  return prop1 && prop2 ? kExitOk : kExitFailure;
}

struct BoundFlags {
  std::optional<double> advantage;
  std::optional<double> eps;
  double delta = 0;
};

int RunBound(const BoundFlags& f, std::ostream& out, std::ostream& err) {
  if (!f.advantage && !f.eps) {
    return Usage(err, "bound needs --advantage and/or --eps");
  }
  if (f.advantage) {
    absl::StatusOr<EpsilonLowerBound> lower =
        EpsilonLowerBoundFromAdvantage(*f.advantage, f.delta);
    if (!lower.ok()) return Fail(err, lower.status());
    out << "eps_lower: " << Real(lower->value()) << "\n";
  }
  if (f.eps) {
    if (!(*f.eps >= 0) || !(f.delta >= 0 && f.delta < 1)) {
      return Fail(err, absl::InvalidArgumentError(
                           "need eps >= 0 and delta in [0, 1)"));
    }
    const PrivacyBudget budget{*f.eps, f.delta};
    out << "advantage_upper: " << Real(AdvantageUpperBound(budget)) << "\n"
        << "pure_dp_advantage_bound: " << Real(YeomAdvantageBound(*f.eps))
        << "\n";
  }
  return kExitOk;
}

}  // namespace

int CliMain(int argc, const char* const* argv, std::ostream& out,
            std::ostream& err) {
  CLI::App app{"Differential-privacy accounting and membership-inference "
               "auditing for DP-SGD.",
               "dpaudit"};
  app.require_subcommand(1);
  app.set_version_flag("--version", ArtifactVersion());
  std::function<int()> action;

  AccountFlags account;
  CLI::App* account_cmd =
      app.add_subcommand("account", "Epsilon of a DP-SGD run under each analysis");
  account_cmd->add_option("--sigma", account.sigma, "Noise multiplier")
      ->required();
  account_cmd->add_option("--q", account.q, "Sampling rate")->required();
  account_cmd->add_option("--steps", account.steps, "Number of steps")
      ->required();
  account_cmd->add_option("--delta", account.delta, "Target delta")
      ->capture_default_str();
  account_cmd->add_option("--analysis", account.analysis, "Analysis")
      ->check(CLI::IsMember(kAnalysisChoices))
      ->capture_default_str();
  account_cmd->callback([&] { action = [&] { return RunAccount(account, out, err); }; });

  CalibrateFlags calibrate;
  CLI::App* calibrate_cmd = app.add_subcommand(
      "calibrate", "Noise multiplier reaching a target epsilon");
  calibrate_cmd->add_option("--target-eps", calibrate.target_eps,
                            "Target epsilon")
      ->required();
  calibrate_cmd->add_option("--q", calibrate.q, "Sampling rate")
      ->capture_default_str();
  calibrate_cmd->add_option("--steps", calibrate.steps, "Number of steps")
      ->capture_default_str();
  calibrate_cmd->add_option("--delta", calibrate.delta, "Target delta")
      ->capture_default_str();
  calibrate_cmd->add_option("--analysis", calibrate.analysis, "Analysis")
      ->check(CLI::IsMember(kAnalysisChoices))
      ->capture_default_str();
  calibrate_cmd->callback(
      [&] { action = [&] { return RunCalibrate(calibrate, out, err); }; });

  TrainFlags train;
  CLI::App* train_cmd =
      app.add_subcommand("train", "Train a DP-SGD logistic-regression model");
  train_cmd->add_option("--train-csv", train.data.train_csv,
                        "Training CSV (label first); synthetic data if omitted");
  train_cmd->add_option("--holdout-csv", train.data.holdout_csv, "Holdout CSV");
  train_cmd->add_option("--rows", train.data.synthetic.rows_per_split,
                        "Synthetic rows per split")
      ->capture_default_str();
  train_cmd->add_option("--dim", train.data.synthetic.dim, "Synthetic features")
      ->capture_default_str();
  train_cmd->add_option("--classes", train.data.synthetic.classes,
                        "Synthetic classes")
      ->capture_default_str();
  train_cmd->add_option("--separation", train.data.synthetic.separation,
                        "Distance of class centres from the origin")
      ->capture_default_str();
  train_cmd->add_option("--data-seed", train.data.synthetic.seed,
                        "Synthetic data seed")
      ->capture_default_str();
  train_cmd->add_option("--sigma", train.sgd.noise_multiplier,
                        "Noise multiplier (0 for no noise)")
      ->capture_default_str();
  train_cmd->add_option("--clip", train.sgd.clip_norm, "Clipping norm")
      ->capture_default_str();
  train_cmd->add_option("--q", train.sgd.sampling_rate, "Sampling rate")
      ->capture_default_str();
  train_cmd->add_option("--epochs", train.sgd.epochs, "Epochs")
      ->capture_default_str();
  train_cmd->add_option("--lr", train.sgd.learning_rate, "Learning rate")
      ->capture_default_str();
  train_cmd->add_option("--seed", train.sgd.seed, "Training seed")
      ->capture_default_str();
  train_cmd->add_option("--model-out", train.model_out, "Model output path");
  train_cmd->add_option("--write-data", train.write_data,
                        "Directory for train.csv and holdout.csv");
  train_cmd->callback([&] { action = [&] { return RunTrain(train, out, err); }; });

  AttackFlags attack;
  CLI::App* attack_cmd = app.add_subcommand(
      "attack", "Loss-threshold membership inference against a model");
  attack_cmd->add_option("--model", attack.model, "Model file")->required();
  attack_cmd->add_option("--train-csv", attack.train_csv, "Member records")
      ->required();
  attack_cmd->add_option("--holdout-csv", attack.holdout_csv,
                         "Non-member records")
      ->required();
  attack_cmd->add_option("--target-fpr", attack.target_fpr,
                         "False-positive rate of the fixed operating point")
      ->capture_default_str();
  attack_cmd->add_option("--delta", attack.delta,
                         "Delta for the implied epsilon lower bound")
      ->capture_default_str();
  attack_cmd->add_option("--losses-out", attack.losses_out,
                         "Directory for per-example loss CSVs");
  attack_cmd->callback([&] { action = [&] { return RunAttack(attack, out, err); }; });

  AuditFlags audit;
  CLI::App* audit_cmd =
      app.add_subcommand("audit", "Run a full audit from a JSON config");
  audit_cmd->add_option("--config", audit.config, "Config file")->required();
  audit_cmd->add_option("--out", audit.out_dir, "Overrides output_dir");
  audit_cmd->add_option("--threads", audit.threads, "Overrides threads");
  audit_cmd->callback([&] { action = [&] { return RunAudit(audit, out, err); }; });

  OracleFlags oracle;
  CLI::App* oracle_cmd = app.add_subcommand(
      "oracle", "Exact bound checks on finite mechanisms");
  oracle_cmd->add_option("--mechanism", oracle.mechanism,
                         "CSV of output_id,p_in,p_out; built-in suite if omitted");
  oracle_cmd->add_option("--eps", oracle.eps,
                         "Declared epsilon (exact pure epsilon if omitted)");
  oracle_cmd->add_option("--delta", oracle.delta, "Declared delta")
      ->capture_default_str();
  oracle_cmd->add_option("--seed", oracle.seed, "Seed of the random mechanisms")
      ->capture_default_str();
  oracle_cmd->callback([&] { action = [&] { return RunOracle(oracle, out, err); }; });

  BoundFlags bound;
  CLI::App* bound_cmd = app.add_subcommand(
      "bound", "Convert between attack advantage and epsilon");
  bound_cmd->add_option("--advantage", bound.advantage,
                        "Measured advantage; prints the implied epsilon");
  bound_cmd->add_option("--eps", bound.eps,
                        "Epsilon; prints the advantage it permits");
  bound_cmd->add_option("--delta", bound.delta, "Delta")->capture_default_str();
  bound_cmd->callback([&] { action = [&] { return RunBound(bound, out, err); }; });

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    const int code = app.exit(e, out, err);
    return code == 0 ? kExitOk : kExitUsage;
  }
  return action ? action() : kExitUsage;
}

}  // namespace dpaudit
