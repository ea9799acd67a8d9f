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

#include "dpaudit/dataset.h"

#include <cmath>
#include <fstream>
#include <sstream>

#include "absl/strings/ascii.h"
#include "absl/strings/numbers.h"
#include "absl/strings/str_cat.h"
#include "absl/strings/str_format.h"
#include "absl/strings/str_split.h"
#include "dpaudit/mechanisms.h"
#include "dpaudit/random.h"

namespace dpaudit {
namespace {

enum : uint64_t { kCentreStream = 1, kTrainStream = 2, kHoldoutStream = 3 };

void SampleSplit(const std::vector<double>& centres, const SyntheticSpec& spec,
                 SplitTag tag, RandomStream stream, Dataset& out) {
  out.rows = spec.rows_per_split;
  out.dim = spec.dim;
  out.classes = spec.classes;
  out.split = tag;
  out.features.resize(static_cast<size_t>(spec.rows_per_split) * spec.dim);
  out.labels.resize(spec.rows_per_split);
  for (int64_t i = 0; i < spec.rows_per_split; ++i) {
    const int label = static_cast<int>(stream.NextU64() % spec.classes);
    out.labels[i] = label;
    for (int j = 0; j < spec.dim; ++j) {
      out.features[i * spec.dim + j] =
          centres[label * spec.dim + j] + stream.NextGaussian();
    }
  }
}

// Splits a CSV line into trimmed fields. Quoted fields are not needed for
// numeric data and are rejected by the number parser.
std::vector<absl::string_view> Fields(absl::string_view line) {
  std::vector<absl::string_view> fields = absl::StrSplit(line, ',');
  for (auto& f : fields) f = absl::StripAsciiWhitespace(f);
  return fields;
}

bool ParseRow(const std::vector<absl::string_view>& fields, int& label,
              std::vector<double>& values) {
  if (fields.size() < 2) return false;
  if (!absl::SimpleAtoi(fields[0], &label)) {
    double as_real = 0;
    if (!absl::SimpleAtod(fields[0], &as_real) ||
        as_real != std::floor(as_real)) {
      return false;
    }
    label = static_cast<int>(as_real);
  }
  values.clear();
  for (size_t k = 1; k < fields.size(); ++k) {
    double v = 0;
    if (!absl::SimpleAtod(fields[k], &v)) return false;
    values.push_back(v);
  }
  return true;
}

}  // namespace

absl::Status Dataset::Validate() const {
  if (dim <= 0 || classes <= 0) {
    return absl::InvalidArgumentError(absl::StrCat(
        "dataset needs positive dim and classes, got d=", dim, " K=", classes));
  }
  if (features.size() != static_cast<size_t>(rows) * dim ||
      labels.size() != static_cast<size_t>(rows)) {
    return absl::InvalidArgumentError("dataset sizes are inconsistent");
  }
  for (int64_t i = 0; i < rows; ++i) {
    if (labels[i] < 0 || labels[i] >= classes) {
      return absl::InvalidArgumentError(absl::StrCat(
          "label ", labels[i], " of row ", i, " is outside [0, ", classes, ")"));
    }
  }
  for (double x : features) {
    if (!std::isfinite(x)) {
      return absl::InvalidArgumentError("dataset has a non-finite feature");
    }
  }
  return absl::OkStatus();
}

absl::StatusOr<DataSplits> GenerateSynthetic(const SyntheticSpec& spec) {
  if (spec.rows_per_split <= 0 || spec.dim <= 0 || spec.classes <= 0) {
    return absl::InvalidArgumentError(
        "synthetic data needs positive rows, dim and classes");
  }
  if (!(spec.separation >= 0) || !std::isfinite(spec.separation)) {
    return absl::InvalidArgumentError(
        absl::StrCat("separation must be >= 0, got ", spec.separation));
  }
  const RandomStream root(spec.seed);
  RandomStream centre_stream = root.Split(kCentreStream);
  std::vector<double> centres(static_cast<size_t>(spec.classes) * spec.dim);
  for (int k = 0; k < spec.classes; ++k) {
    std::span<double> c(centres.data() + k * spec.dim, spec.dim);
    for (double& x : c) x = centre_stream.NextGaussian();
    const double norm = L2Norm(c);
    for (double& x : c) x *= spec.separation / norm;
  }
  DataSplits splits;
  SampleSplit(centres, spec, SplitTag::kTrain, root.Split(kTrainStream),
              splits.train);
  SampleSplit(centres, spec, SplitTag::kHoldout, root.Split(kHoldoutStream),
              splits.holdout);
  return splits;
}

absl::StatusOr<Dataset> ParseCsv(std::string_view content_in, SplitTag split,
                                 int classes) {
  const absl::string_view content(content_in.data(), content_in.size());
  Dataset data;
  data.split = split;
  std::vector<double> values;
  int max_label = -1;
  int64_t line_no = 0;
  bool seen_data = false;
  for (absl::string_view line : absl::StrSplit(content, '\n')) {
    ++line_no;
    line = absl::StripAsciiWhitespace(line);
    if (line.empty()) continue;
    const std::vector<absl::string_view> fields = Fields(line);
    int label = 0;
    if (!ParseRow(fields, label, values)) {
      if (!seen_data && line_no == 1) continue;  // header
      return absl::InvalidArgumentError(
          absl::StrCat("line ", line_no, ": malformed row '", line, "'"));
    }
    if (!seen_data) {
      data.dim = static_cast<int>(values.size());
      seen_data = true;
    } else if (static_cast<int>(values.size()) != data.dim) {
      return absl::InvalidArgumentError(absl::StrCat(
          "line ", line_no, ": expected ", data.dim + 1, " fields, found ",
          values.size() + 1));
    }
    if (label < 0) {
      return absl::InvalidArgumentError(
          absl::StrCat("line ", line_no, ": negative label ", label));
    }
    max_label = std::max(max_label, label);
    data.labels.push_back(label);
    data.features.insert(data.features.end(), values.begin(), values.end());
    ++data.rows;
  }
  if (data.rows == 0) {
    return absl::InvalidArgumentError("CSV contains no data rows");
  }
  data.classes = classes > 0 ? classes : max_label + 1;
  if (absl::Status s = data.Validate(); !s.ok()) return s;
  return data;
}

absl::StatusOr<std::string> ReadFile(const std::string& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) return absl::NotFoundError(absl::StrCat("cannot open ", path));
  std::ostringstream buf;
  buf << in.rdbuf();
  if (in.bad()) return absl::DataLossError(absl::StrCat("error reading ", path));
  return buf.str();
}

absl::Status WriteFile(const std::string& path, std::string_view content) {
  std::ofstream out(path, std::ios::binary | std::ios::trunc);
  if (!out) {
    return absl::PermissionDeniedError(
        absl::StrCat("cannot open ", path, " for writing"));
  }
  out.write(content.data(), static_cast<std::streamsize>(content.size()));
  out.close();
  if (!out) return absl::DataLossError(absl::StrCat("error writing ", path));
  return absl::OkStatus();
}

absl::StatusOr<Dataset> LoadCsv(const std::string& path, SplitTag split,
                                int classes) {
  absl::StatusOr<std::string> content = ReadFile(path);
  if (!content.ok()) return content.status();
  absl::StatusOr<Dataset> data = ParseCsv(*content, split, classes);
  if (!data.ok()) {
    return absl::Status(data.status().code(),
                        absl::StrCat(path, ": ", data.status().message()));
  }
  return data;
}

absl::Status WriteCsv(const Dataset& data, const std::string& path) {
  std::string out = "label";
  for (int j = 0; j < data.dim; ++j) absl::StrAppend(&out, ",f", j + 1);
  out += '\n';
  for (int64_t i = 0; i < data.rows; ++i) {
    absl::StrAppend(&out, data.labels[i]);
    for (double x : data.Row(i)) absl::StrAppend(&out, absl::StrFormat(",%.17g", x));
    out += '\n';
  }
  return WriteFile(path, out);
}

absl::Status WriteLossesCsv(std::span<const double> losses,
                            const std::string& path) {
  std::string out = "loss\n";
  for (double l : losses) absl::StrAppend(&out, absl::StrFormat("%.17g\n", l));
  return WriteFile(path, out);
}

}  // namespace dpaudit
