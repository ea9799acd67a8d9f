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

#ifndef DPAUDIT_PRIVACY_BUDGET_H_
#define DPAUDIT_PRIVACY_BUDGET_H_

#include <cstdint>
#include <string>
#include <string_view>

#include "absl/status/status.h"
#include "absl/status/statusor.h"

namespace dpaudit {

// An (epsilon, delta) pair. Epsilon may be +infinity when an analysis gives
// no finite guarantee.
struct PrivacyBudget {
  double epsilon = 0.0;
  double delta = 0.0;

  // Checks epsilon >= 0 and 0 <= delta < 1.
  absl::Status Validate() const;

  static absl::StatusOr<PrivacyBudget> Create(double epsilon, double delta);

  friend bool operator==(const PrivacyBudget&, const PrivacyBudget&) = default;
};

enum class AnalysisKind { kNaive, kAdvanced, kZCdp, kRdp };

inline constexpr AnalysisKind kAllAnalyses[] = {
    AnalysisKind::kNaive, AnalysisKind::kAdvanced, AnalysisKind::kZCdp,
    AnalysisKind::kRdp};

// Lower-case names: "naive", "advanced", "zcdp", "rdp".
std::string_view AnalysisKindName(AnalysisKind kind);
absl::StatusOr<AnalysisKind> ParseAnalysisKind(std::string_view name);

// Hyperparameters of one DP-SGD run. The noise multiplier is in units of the
// clip norm. `steps` must equal StepsFor(epochs, sampling_rate).
struct SgdConfig {
  double noise_multiplier = 1.0;
  double clip_norm = 1.0;
  double sampling_rate = 0.02;
  int64_t steps = 5000;
  double learning_rate = 0.1;
  int epochs = 100;
  uint64_t seed = 0;

  static int64_t StepsFor(int epochs, double sampling_rate);

  // Validates ranges and the steps/epochs relation. A zero noise multiplier
  // (the noiseless baseline) is accepted only if `allow_zero_noise`.
  absl::Status Validate(bool allow_zero_noise = false) const;

  SgdConfig WithNoise(double sigma) const;
  SgdConfig WithSeed(uint64_t s) const;

  friend bool operator==(const SgdConfig&, const SgdConfig&) = default;
};

// Formats with 17 significant digits; "inf" for +infinity.
std::string FormatReal(double value);
// Inverse of FormatReal. Accepts "inf", "-inf", "nan" and ordinary decimals.
absl::StatusOr<double> ParseReal(std::string_view text);

}  // namespace dpaudit

#endif  // DPAUDIT_PRIVACY_BUDGET_H_
