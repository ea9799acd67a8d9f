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

// Multinomial logistic regression trained with DP-SGD.
//
// Each step draws a Poisson sample (every example independently with
// probability q), clips each per-example gradient of the cross-entropy loss
// to L2 norm C over all parameters, sums, adds N(0, (sigma C)^2) to every
// coordinate and divides by the expected batch size q n. A noise multiplier
// of 0 gives the noiseless (but still clipped) baseline.

#ifndef DPAUDIT_TRAINER_H_
#define DPAUDIT_TRAINER_H_

#include <cstdint>
#include <string>
#include <vector>

#include "absl/status/status.h"
#include "absl/status/statusor.h"
#include "dpaudit/dataset.h"
#include "dpaudit/privacy_budget.h"

namespace dpaudit {

// Probabilities are floored here before taking logs, which caps any single
// loss at -ln(1e-12) ~= 27.6.
inline constexpr double kProbabilityFloor = 1e-12;

struct Model {
  int dim = 0;
  int classes = 0;
  // Row-major dim x classes.
  std::vector<double> weights;
  std::vector<double> bias;

  SgdConfig config;
  int64_t realized_steps = 0;
  double final_train_loss = 0.0;

  static Model Zeros(int dim, int classes);

  size_t num_parameters() const { return weights.size() + bias.size(); }
  // Flattened parameters: weights then bias.
  std::vector<double> Parameters() const;
  void SetParameters(std::span<const double> params);

  friend bool operator==(const Model&, const Model&) = default;
};

struct TrainTrace {
  std::vector<double> epoch_loss;
  std::vector<double> epoch_accuracy;
  // Largest per-example gradient norm after clipping over every step.
  double max_clipped_norm = 0.0;
  // Total number of Poisson-sampled examples across all steps.
  int64_t examples_sampled = 0;
};

struct TrainResult {
  Model model;
  TrainTrace trace;
};

// `config.noise_multiplier` may be 0. Requires q n >= 1. Fails with
// FailedPrecondition when the loss diverges.
absl::StatusOr<TrainResult> TrainDpSgd(const Dataset& train,
                                       const SgdConfig& config);

// Softmax probabilities for one example.
void PredictProbabilities(const Model& model, std::span<const double> x,
                          std::span<double> probs);

// -ln max(p(label), 1e-12) for every row.
std::vector<double> PerExampleLosses(const Model& model, const Dataset& data);

double MeanLoss(const Model& model, const Dataset& data);

// Gradient of MeanLoss in the Parameters() layout, without clipping.
std::vector<double> MeanLossGradient(const Model& model, const Dataset& data);

// Fraction of rows whose argmax prediction (lowest index on ties) matches.
double Accuracy(const Model& model, const Dataset& data);

// Text format: "dpsgd-model v1 <d> <K>" then the d*K weights row-major and
// then the K biases, one per line with 17 significant digits.
std::string SerializeModel(const Model& model);
absl::StatusOr<Model> ParseModel(std::string_view text);
absl::Status SaveModel(const Model& model, const std::string& path);
absl::StatusOr<Model> LoadModel(const std::string& path);

}  // namespace dpaudit

#endif  // DPAUDIT_TRAINER_H_
