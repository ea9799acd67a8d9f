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

// Serialization of audit reports: a JSON document that round-trips exactly,
// and the CSV and SVG views written next to it.

#ifndef DPAUDIT_REPORT_H_
#define DPAUDIT_REPORT_H_

#include <span>
#include <string>
#include <string_view>

#include "absl/status/status.h"
#include "absl/status/statusor.h"
#include "dpaudit/bounds.h"
#include "dpaudit/experiment.h"

namespace dpaudit {

// Epsilon columns are written as decimal strings with 17 significant digits
// ("inf" when unbounded), so that parsing reproduces every value bit for bit.
std::string ReportToJson(const AuditReport& report);
absl::StatusOr<AuditReport> ReportFromJson(std::string_view json);

// Accuracy and attack columns per row.
std::string Table1Csv(const AuditReport& report);
// Upper bounds next to the attack-implied lower bounds.
std::string Table2Csv(const AuditReport& report);
// Header "sigma,eps_lower,eps_upper,advantage,analysis".
std::string RegionCsv(std::span<const PrivacyRegionPoint> points);

struct EmitFormats {
  bool json = true;
  bool csv = true;
  bool svg = true;
};

// Writes report.json, table1.csv, table2.csv, region.csv and region.svg
// (subject to `formats`) into `dir`, creating it if needed.
absl::Status EmitReport(const AuditReport& report, const std::string& dir,
                        EmitFormats formats = {});

}  // namespace dpaudit

#endif  // DPAUDIT_REPORT_H_
