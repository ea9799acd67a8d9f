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

#include "dpaudit/privacy_budget.h"

#include <cmath>
#include <limits>

#include "absl/strings/ascii.h"
#include "absl/strings/numbers.h"
#include "absl/strings/str_cat.h"
#include "absl/strings/str_format.h"

namespace dpaudit {

absl::Status PrivacyBudget::Validate() const {
  if (std::isnan(epsilon) || epsilon < 0) {
    return absl::InvalidArgumentError(
        absl::StrCat("epsilon must be non-negative, got ", epsilon));
  }
  if (std::isnan(delta) || delta < 0 || delta >= 1) {
    return absl::InvalidArgumentError(
        absl::StrCat("delta must be in [0, 1), got ", delta));
  }
  return absl::OkStatus();
}

absl::StatusOr<PrivacyBudget> PrivacyBudget::Create(double epsilon,
                                                    double delta) {
  PrivacyBudget budget{epsilon, delta};
  if (absl::Status s = budget.Validate(); !s.ok()) return s;
  return budget;
}

std::string_view AnalysisKindName(AnalysisKind kind) {
  switch (kind) {
    case AnalysisKind::kNaive:
      return "naive";
    case AnalysisKind::kAdvanced:
      return "advanced";
    case AnalysisKind::kZCdp:
      return "zcdp";
    case AnalysisKind::kRdp:
      return "rdp";
  }
  return "unknown";
}

absl::StatusOr<AnalysisKind> ParseAnalysisKind(std::string_view name) {
  const std::string lower = absl::AsciiStrToLower(std::string(name));
  for (AnalysisKind kind : kAllAnalyses) {
    if (lower == AnalysisKindName(kind)) return kind;
  }
  return absl::InvalidArgumentError(absl::StrCat(
      "unknown analysis '", std::string(name), "'; expected naive, advanced, zcdp or rdp"));
}

int64_t SgdConfig::StepsFor(int epochs, double sampling_rate) {
  // The slack absorbs representation error in e.g. 100 / 0.02.
  const double raw = static_cast<double>(epochs) / sampling_rate;
  return static_cast<int64_t>(std::ceil(raw - 1e-9 * raw));
}

absl::Status SgdConfig::Validate(bool allow_zero_noise) const {
  if (std::isnan(noise_multiplier) || noise_multiplier < 0 ||
      (!allow_zero_noise && noise_multiplier == 0)) {
    return absl::InvalidArgumentError(absl::StrCat(
        "noise multiplier must be positive, got ", noise_multiplier));
  }
  if (!(clip_norm > 0)) {
    return absl::InvalidArgumentError(
        absl::StrCat("clip norm must be positive, got ", clip_norm));
  }
  if (!(sampling_rate > 0 && sampling_rate <= 1)) {
    return absl::InvalidArgumentError(absl::StrCat(
        "sampling rate must be in (0, 1], got ", sampling_rate));
  }
  if (epochs < 1) {
    return absl::InvalidArgumentError(
        absl::StrCat("epochs must be positive, got ", epochs));
  }
  if (!(learning_rate > 0)) {
    return absl::InvalidArgumentError(
        absl::StrCat("learning rate must be positive, got ", learning_rate));
  }
  if (steps != StepsFor(epochs, sampling_rate)) {
    return absl::InvalidArgumentError(absl::StrCat(
        "steps (", steps, ") must equal ceil(epochs / q) = ",
        StepsFor(epochs, sampling_rate)));
  }
  return absl::OkStatus();
}

SgdConfig SgdConfig::WithNoise(double sigma) const {
  SgdConfig c = *this;
  c.noise_multiplier = sigma;
  return c;
}

SgdConfig SgdConfig::WithSeed(uint64_t s) const {
  SgdConfig c = *this;
  c.seed = s;
  return c;
}

std::string FormatReal(double value) {
  if (std::isinf(value)) return value > 0 ? "inf" : "-inf";
  if (std::isnan(value)) return "nan";
  return absl::StrFormat("%.17g", value);
}

absl::StatusOr<double> ParseReal(std::string_view text) {
  const std::string lower =
      absl::AsciiStrToLower(
      absl::StripAsciiWhitespace(absl::string_view(text.data(), text.size())));
  if (lower == "inf" || lower == "+inf" || lower == "infinity") {
    return std::numeric_limits<double>::infinity();
  }
  if (lower == "-inf") return -std::numeric_limits<double>::infinity();
  if (lower == "nan") return std::numeric_limits<double>::quiet_NaN();
  double value = 0;
  if (!absl::SimpleAtod(lower, &value)) {
    return absl::InvalidArgumentError(
        absl::StrCat("not a number: '", std::string(text), "'"));
  }
  return value;
}

}  // namespace dpaudit
