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

#ifndef DPAUDIT_DATASET_H_
#define DPAUDIT_DATASET_H_

#include <cstdint>
#include <span>
#include <string>
#include <string_view>
#include <utility>
#include <vector>

#include "absl/status/status.h"
#include "absl/status/statusor.h"

namespace dpaudit {

enum class SplitTag { kTrain, kHoldout };

// Dense labelled examples: row-major n x d features and labels in [0, K).
struct Dataset {
  int64_t rows = 0;
  int dim = 0;
  int classes = 0;
  std::vector<double> features;
  std::vector<int> labels;
  SplitTag split = SplitTag::kTrain;

  std::span<const double> Row(int64_t i) const {
    return {features.data() + i * dim, static_cast<size_t>(dim)};
  }
  bool empty() const { return rows == 0; }

  // Sizes agree, labels are in range and every feature is finite.
  absl::Status Validate() const;

  friend bool operator==(const Dataset&, const Dataset&) = default;
};

struct SyntheticSpec {
  int64_t rows_per_split = 10000;
  int dim = 50;
  int classes = 10;
  // Class centres are random unit directions scaled by this; points add
  // N(0, I) around their centre.
  double separation = 3.0;
  uint64_t seed = 0;
  friend bool operator==(const SyntheticSpec&, const SyntheticSpec&) = default;
};

struct DataSplits {
  Dataset train;
  Dataset holdout;
};

// Both splits are i.i.d. draws from one Gaussian mixture with uniform class
// prior, so membership carries no distributional signal.
absl::StatusOr<DataSplits> GenerateSynthetic(const SyntheticSpec& spec);

// Parses CSV text: first column an integer label, remaining columns real
// features. A first row that does not parse as numbers is treated as a
// header. `classes` of 0 infers max label + 1.
absl::StatusOr<Dataset> ParseCsv(std::string_view content, SplitTag split,
                                 int classes = 0);
absl::StatusOr<Dataset> LoadCsv(const std::string& path, SplitTag split,
                                int classes = 0);
// Header "label,f1,...,fd", 17 significant digits.
absl::Status WriteCsv(const Dataset& data, const std::string& path);

// Single-column CSV with header "loss".
absl::Status WriteLossesCsv(std::span<const double> losses,
                            const std::string& path);

absl::StatusOr<std::string> ReadFile(const std::string& path);
absl::Status WriteFile(const std::string& path, std::string_view content);

}  // namespace dpaudit

#endif  // DPAUDIT_DATASET_H_
