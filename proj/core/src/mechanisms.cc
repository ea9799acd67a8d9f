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

#include "dpaudit/mechanisms.h"

#include <cmath>

#include "absl/strings/str_cat.h"

namespace dpaudit {

double L2Norm(std::span<const double> v) {
  double sum = 0.0;
  for (double x : v) sum += x * x;
  return std::sqrt(sum);
}

double ClipFactor(double norm, double clip_norm) {
  if (norm <= clip_norm || norm == 0.0) return 1.0;
  return clip_norm / norm;
}

std::vector<double> Clip(std::span<const double> v, double clip_norm) {
  std::vector<double> out(v.begin(), v.end());
  const double factor = ClipFactor(L2Norm(v), clip_norm);
  if (factor < 1.0) {
    for (double& x : out) x *= factor;
  }
  return out;
}

std::vector<double> GaussianNoise(size_t dim, double stddev,
                                  RandomStream& stream) {
  std::vector<double> out(dim, 0.0);
  AddGaussianNoise(out, stddev, stream);
  return out;
}

void AddGaussianNoise(std::span<double> v, double stddev,
                      RandomStream& stream) {
  if (stddev == 0.0) return;
  for (double& x : v) x += stddev * stream.NextGaussian();
}

absl::StatusOr<RandomizedResponse> RandomizedResponse::Create(double p) {
  if (!(p > 0.5 && p < 1.0)) {
    return absl::InvalidArgumentError(
        absl::StrCat("randomized response needs p in (0.5, 1), got ", p));
  }
  return RandomizedResponse(p);
}

bool RandomizedResponse::Apply(bool bit, RandomStream& stream) const {
  return stream.NextBernoulli(p_) ? bit : !bit;
}

double RandomizedResponse::epsilon() const { return std::log(p_ / (1 - p_)); }

}  // namespace dpaudit
