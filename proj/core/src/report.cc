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

#include "dpaudit/report.h"

#include <cmath>
#include <filesystem>
#include <system_error>

#include "absl/strings/str_cat.h"
#include "absl/strings/str_format.h"
#include "absl/strings/str_join.h"
#include "dpaudit/dataset.h"
#include "dpaudit/svg_chart.h"
#include "json.hpp"

namespace dpaudit {
namespace {

using nlohmann::json;

// Non-finite doubles have no JSON number form.
json Num(double v) {
  if (std::isfinite(v)) return v;
  return FormatReal(v);
}

absl::StatusOr<double> GetReal(const json& obj, const char* key) {
  const auto it = obj.find(key);
  if (it == obj.end()) {
    return absl::InvalidArgumentError(absl::StrCat("missing field '", key, "'"));
  }
  if (it->is_number()) return it->get<double>();
  if (it->is_string()) return ParseReal(it->get<std::string>());
  return absl::InvalidArgumentError(
      absl::StrCat("field '", key, "' is not a number"));
}

std::string CsvReal(double v) {
  if (!std::isfinite(v)) return FormatReal(v);
  return absl::StrFormat("%.9g", v);
}

std::string CsvField(std::string_view s) {
  if (s.find_first_of(",\"\r\n") == std::string_view::npos) {
    return std::string(s);
  }
  std::string out = "\"";
  for (char c : s) {
    if (c == '"') out += '"';
    out += c;
  }
  out += '"';
  return out;
}

std::string TargetEps(const AuditRow& row) {
  return row.target_eps ? CsvReal(*row.target_eps) : "";
}

std::string TargetAnalysis(const AuditRow& row) {
  return row.target_analysis ? std::string(AnalysisKindName(*row.target_analysis))
                             : "";
}

#define ASSIGN_REAL(obj, field, target)                  \
  do {                                                   \
    absl::StatusOr<double> _v = GetReal(obj, field);     \
    if (!_v.ok()) return _v.status();                    \
    target = *_v;                                        \
  } while (0)

absl::StatusOr<AuditRow> RowFromJson(const json& j) {
  AuditRow row;
  ASSIGN_REAL(j, "sigma", row.sigma);
  if (j.contains("target_eps") && !j["target_eps"].is_null()) {
    double t = 0;
    ASSIGN_REAL(j, "target_eps", t);
    row.target_eps = t;
  }
  if (j.contains("target_analysis") && !j["target_analysis"].is_null()) {
    absl::StatusOr<AnalysisKind> kind =
        ParseAnalysisKind(j["target_analysis"].get<std::string>());
    if (!kind.ok()) return kind.status();
    row.target_analysis = *kind;
  }
  row.trials = j.at("trials").get<int>();
  ASSIGN_REAL(j, "accuracy", row.accuracy);
  ASSIGN_REAL(j, "holdout_accuracy", row.holdout_accuracy);
  ASSIGN_REAL(j, "accuracy_rel_baseline", row.accuracy_rel_baseline);
  ASSIGN_REAL(j, "train_loss", row.train_loss);
  ASSIGN_REAL(j, "attack_threshold", row.attack_threshold);
  ASSIGN_REAL(j, "attack_tpr", row.attack_tpr);
  ASSIGN_REAL(j, "attack_fpr", row.attack_fpr);
  ASSIGN_REAL(j, "attack_advantage", row.attack_advantage);
  ASSIGN_REAL(j, "yeom_tpr", row.yeom_tpr);
  ASSIGN_REAL(j, "yeom_fpr", row.yeom_fpr);
  ASSIGN_REAL(j, "yeom_advantage", row.yeom_advantage);
  ASSIGN_REAL(j, "best_advantage", row.best_advantage);
  ASSIGN_REAL(j, "best_threshold", row.best_threshold);
  ASSIGN_REAL(j, "best_advantage_ci_low", row.best_advantage_ci_low);
  ASSIGN_REAL(j, "best_advantage_ci_high", row.best_advantage_ci_high);
  ASSIGN_REAL(j, "eps_naive", row.eps_naive);
  ASSIGN_REAL(j, "eps_advanced", row.eps_advanced);
  ASSIGN_REAL(j, "eps_zcdp", row.eps_zcdp);
  ASSIGN_REAL(j, "eps_rdp", row.eps_rdp);
  row.classical_gaussian_valid = j.at("classical_gaussian_valid").get<bool>();
  ASSIGN_REAL(j, "eps_lower", row.eps_lower);
  ASSIGN_REAL(j, "eps_lower_at_fpr", row.eps_lower_at_fpr);
  row.error = j.at("error").get<std::string>();
  return row;
}

}  // namespace

std::string ReportToJson(const AuditReport& report) {
  const ReportMetadata& m = report.metadata;
  json root;
  root["metadata"] = {{"config_version", m.config_version},
                      {"config_hash", m.config_hash},
                      {"root_seed", m.root_seed},
                      {"artifact_version", m.artifact_version},
                      {"gaussian_sampler", m.gaussian_sampler},
                      {"delta", Num(m.delta)},
                      {"target_fpr", Num(m.target_fpr)},
                      {"mode", m.mode},
                      {"timestamp", m.timestamp}};
  root["rows"] = json::array();
  for (const AuditRow& r : report.rows) {
    json row;
    row["sigma"] = Num(r.sigma);
    row["target_eps"] = r.target_eps ? json(FormatReal(*r.target_eps)) : json();
    row["target_analysis"] =
        r.target_analysis ? json(std::string(AnalysisKindName(*r.target_analysis))) : json();
    row["trials"] = r.trials;
    row["accuracy"] = Num(r.accuracy);
    row["holdout_accuracy"] = Num(r.holdout_accuracy);
    row["accuracy_rel_baseline"] = Num(r.accuracy_rel_baseline);
    row["train_loss"] = Num(r.train_loss);
    row["attack_threshold"] = Num(r.attack_threshold);
    row["attack_tpr"] = Num(r.attack_tpr);
    row["attack_fpr"] = Num(r.attack_fpr);
    row["attack_advantage"] = Num(r.attack_advantage);
    row["yeom_tpr"] = Num(r.yeom_tpr);
    row["yeom_fpr"] = Num(r.yeom_fpr);
    row["yeom_advantage"] = Num(r.yeom_advantage);
    row["best_advantage"] = Num(r.best_advantage);
    row["best_threshold"] = Num(r.best_threshold);
    row["best_advantage_ci_low"] = Num(r.best_advantage_ci_low);
    row["best_advantage_ci_high"] = Num(r.best_advantage_ci_high);
    row["eps_naive"] = FormatReal(r.eps_naive);
    row["eps_advanced"] = FormatReal(r.eps_advanced);
    row["eps_zcdp"] = FormatReal(r.eps_zcdp);
    row["eps_rdp"] = FormatReal(r.eps_rdp);
    row["classical_gaussian_valid"] = r.classical_gaussian_valid;
    row["eps_lower"] = FormatReal(r.eps_lower);
    row["eps_lower_at_fpr"] = FormatReal(r.eps_lower_at_fpr);
    row["error"] = r.error;
    root["rows"].push_back(std::move(row));
  }
  return root.dump(2) + "\n";
}

absl::StatusOr<AuditReport> ReportFromJson(std::string_view text) {
  try {
    const json root = json::parse(text);
    AuditReport report;
    const json& m = root.at("metadata");
    ReportMetadata& meta = report.metadata;
    meta.config_version = m.at("config_version").get<int>();
    meta.config_hash = m.at("config_hash").get<std::string>();
    meta.root_seed = m.at("root_seed").get<uint64_t>();
    meta.artifact_version = m.at("artifact_version").get<std::string>();
    meta.gaussian_sampler = m.at("gaussian_sampler").get<std::string>();
    ASSIGN_REAL(m, "delta", meta.delta);
    ASSIGN_REAL(m, "target_fpr", meta.target_fpr);
    meta.mode = m.at("mode").get<std::string>();
    meta.timestamp = m.at("timestamp").get<std::string>();
    for (const json& j : root.at("rows")) {
      absl::StatusOr<AuditRow> row = RowFromJson(j);
      if (!row.ok()) return row.status();
      report.rows.push_back(std::move(*row));
    }
    return report;
  } catch (const json::exception& e) {
    return absl::InvalidArgumentError(
        absl::StrCat("malformed report JSON: ", e.what()));
  }
}

std::string Table1Csv(const AuditReport& report) {
  std::string out =
      "sigma,target_eps,target_analysis,trials,accuracy,holdout_accuracy,"
      "accuracy_rel_baseline,attack_tpr,attack_fpr,attack_advantage,"
      "best_advantage,eps_naive,eps_advanced,eps_zcdp,eps_rdp,error\n";
  for (const AuditRow& r : report.rows) {
    absl::StrAppend(
        &out,
        absl::StrJoin(
            {CsvReal(r.sigma), TargetEps(r), TargetAnalysis(r),
             absl::StrCat(r.trials), CsvReal(r.accuracy),
             CsvReal(r.holdout_accuracy), CsvReal(r.accuracy_rel_baseline),
             CsvReal(r.attack_tpr), CsvReal(r.attack_fpr),
             CsvReal(r.attack_advantage), CsvReal(r.best_advantage),
             CsvReal(r.eps_naive), CsvReal(r.eps_advanced),
             CsvReal(r.eps_zcdp), CsvReal(r.eps_rdp), CsvField(r.error)},
            ","),
        "\n");
  }
  return out;
}

std::string Table2Csv(const AuditReport& report) {
  std::string out =
      "sigma,target_eps,target_analysis,attack_advantage,best_advantage,"
      "best_advantage_ci_low,best_advantage_ci_high,eps_lower,"
      "eps_lower_at_fpr,eps_rdp,eps_zcdp,eps_advanced,eps_naive,"
      "classical_gaussian_valid,error\n";
  for (const AuditRow& r : report.rows) {
    absl::StrAppend(
        &out,
        absl::StrJoin(
            {CsvReal(r.sigma), TargetEps(r), TargetAnalysis(r),
             CsvReal(r.attack_advantage), CsvReal(r.best_advantage),
             CsvReal(r.best_advantage_ci_low),
             CsvReal(r.best_advantage_ci_high), CsvReal(r.eps_lower),
             CsvReal(r.eps_lower_at_fpr), CsvReal(r.eps_rdp),
             CsvReal(r.eps_zcdp), CsvReal(r.eps_advanced),
             CsvReal(r.eps_naive),
             std::string(r.classical_gaussian_valid ? "true" : "false"),
             CsvField(r.error)},
            ","),
        "\n");
  }
  return out;
}

std::string RegionCsv(std::span<const PrivacyRegionPoint> points) {
  std::string out = "sigma,eps_lower,eps_upper,advantage,analysis\n";
  for (const PrivacyRegionPoint& p : points) {
    absl::StrAppend(&out, CsvReal(p.sigma), ",", CsvReal(p.eps_lower), ",",
                    CsvReal(p.eps_upper), ",", CsvReal(p.advantage_used), ",",
                    std::string(AnalysisKindName(p.analysis_used)), "\n");
  }
  return out;
}

absl::Status EmitReport(const AuditReport& report, const std::string& dir,
                        EmitFormats formats) {
  std::error_code ec;
  std::filesystem::create_directories(dir, ec);
  if (ec) {
    return absl::UnavailableError(
        absl::StrCat("cannot create directory ", dir, ": ", ec.message()));
  }
  const std::filesystem::path base(dir);
  auto write = [&](const char* name, const std::string& content) {
    return WriteFile((base / name).string(), content);
  };
  const std::vector<PrivacyRegionPoint> region = RegionFromReport(report);
  if (formats.json) {
    if (absl::Status s = write("report.json", ReportToJson(report)); !s.ok()) {
      return s;
    }
  }
  if (formats.csv) {
    for (const auto& [name, content] :
         {std::pair<const char*, std::string>{"table1.csv", Table1Csv(report)},
          {"table2.csv", Table2Csv(report)},
          {"region.csv", RegionCsv(region)}}) {
      if (absl::Status s = write(name, content); !s.ok()) return s;
    }
  }
  if (formats.svg) {
    if (absl::Status s = write("region.svg", RegionSvg(region)); !s.ok()) {
      return s;
    }
  }
  return absl::OkStatus();
}

}  // namespace dpaudit
