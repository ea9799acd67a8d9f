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

#ifndef DPAUDIT_RANDOM_H_
#define DPAUDIT_RANDOM_H_

#include <cstdint>
#include <limits>
#include <string_view>

namespace dpaudit {

// Name of the Gaussian sampler, recorded in report metadata because it fixes
// the bit-level output of every seeded run.
inline constexpr std::string_view kGaussianSamplerName =
    "splitmix64-counter/marsaglia-polar";

// Counter-based, splittable random stream. Output i is the SplitMix64
// finalizer applied to key + i * golden-gamma, so a stream is fully described
// by (key, counter) and Split() derives independent child keys without
// touching the parent's position. Identical seeds give bit-identical streams
// on every platform: no std:: distributions are involved.
//
// A stream is a value type. Copy it to fork, never share one mutably across
// threads.
class RandomStream {
 public:
  using result_type = uint64_t;

  explicit RandomStream(uint64_t seed);

  // Child stream for `stream_id`; independent of this stream's counter.
  RandomStream Split(uint64_t stream_id) const;

  uint64_t NextU64();
  // Uniform on [0, 1) with 53 bits of resolution.
  double NextUniform();
  // Standard normal via the Marsaglia polar method.
  double NextGaussian();
  bool NextBernoulli(double p) { return NextUniform() < p; }

  uint64_t key() const { return key_; }
  uint64_t counter() const { return counter_; }

  // UniformRandomBitGenerator interface.
  static constexpr uint64_t min() { return 0; }
  static constexpr uint64_t max() {
    return std::numeric_limits<uint64_t>::max();
  }
  uint64_t operator()() { return NextU64(); }

 private:
  RandomStream(uint64_t key, bool /*raw*/) : key_(key) {}

  uint64_t key_;
  uint64_t counter_ = 0;
  bool has_spare_ = false;
  double spare_ = 0.0;
};

// SplitMix64 output finalizer.
uint64_t Mix64(uint64_t x);

}  // namespace dpaudit

#endif  // DPAUDIT_RANDOM_H_
