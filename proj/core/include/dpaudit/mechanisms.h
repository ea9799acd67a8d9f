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

#ifndef DPAUDIT_MECHANISMS_H_
#define DPAUDIT_MECHANISMS_H_

#include <cstddef>
#include <span>
#include <vector>

#include "absl/status/statusor.h"
#include "dpaudit/random.h"

namespace dpaudit {

double L2Norm(std::span<const double> v);

// Scale factor min(1, clip_norm / norm); 1 for a zero norm.
double ClipFactor(double norm, double clip_norm);

// v * min(1, C / ||v||_2). The zero vector maps to itself, and an infinite C
// is the identity.
std::vector<double> Clip(std::span<const double> v, double clip_norm);

// `dim` i.i.d. N(0, stddev^2) draws from `stream`.
std::vector<double> GaussianNoise(size_t dim, double stddev,
                                  RandomStream& stream);

// Adds N(0, stddev^2) to each coordinate in place. No draws when stddev == 0.
void AddGaussianNoise(std::span<double> v, double stddev, RandomStream& stream);

// Reports the true bit with probability p and its complement otherwise.
// Pure (ln(p / (1 - p)), 0)-DP.
class RandomizedResponse {
 public:
  static absl::StatusOr<RandomizedResponse> Create(double p);

  bool Apply(bool bit, RandomStream& stream) const;
  double truth_probability() const { return p_; }
  double epsilon() const;

 private:
  explicit RandomizedResponse(double p) : p_(p) {}
  double p_;
};

}  // namespace dpaudit

#endif  // DPAUDIT_MECHANISMS_H_
