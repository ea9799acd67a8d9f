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

#include "dpaudit/trainer.h"

#include <algorithm>
#include <cmath>
#include <limits>

#include "absl/strings/numbers.h"
#include "absl/strings/str_cat.h"
#include "absl/strings/str_format.h"
#include "absl/strings/str_split.h"
#include "absl/strings/ascii.h"
#include "dpaudit/mechanisms.h"
#include "dpaudit/random.h"

namespace dpaudit {
namespace {

enum : uint64_t { kSamplingStream = 0, kNoiseStream = 1 };

// probs <- softmax(x W + b), computed with the max logit subtracted.
void Softmax(const Model& model, std::span<const double> x,
             std::span<double> probs) {
  const int k_count = model.classes;
  for (int k = 0; k < k_count; ++k) probs[k] = model.bias[k];
  for (int j = 0; j < model.dim; ++j) {
    const double xj = x[j];
    const double* w = model.weights.data() + static_cast<size_t>(j) * k_count;
    for (int k = 0; k < k_count; ++k) probs[k] += xj * w[k];
  }
  const double max = *std::max_element(probs.begin(), probs.end());
  double sum = 0.0;
  for (double& p : probs) {
    p = std::exp(p - max);
    sum += p;
  }
  for (double& p : probs) p /= sum;
}

double ExampleLoss(std::span<const double> probs, int label) {
  return -std::log(std::max(probs[label], kProbabilityFloor));
}

bool AllFinite(std::span<const double> v) {
  return std::all_of(v.begin(), v.end(),
                     [](double x) { return std::isfinite(x); });
}

}  // namespace

Model Model::Zeros(int dim, int classes) {
  Model m;
  m.dim = dim;
  m.classes = classes;
  m.weights.assign(static_cast<size_t>(dim) * classes, 0.0);
  m.bias.assign(classes, 0.0);
  return m;
}

std::vector<double> Model::Parameters() const {
  std::vector<double> p = weights;
  p.insert(p.end(), bias.begin(), bias.end());
  return p;
}

void Model::SetParameters(std::span<const double> params) {
  std::copy_n(params.begin(), weights.size(), weights.begin());
  std::copy_n(params.begin() + weights.size(), bias.size(), bias.begin());
}

void PredictProbabilities(const Model& model, std::span<const double> x,
                          std::span<double> probs) {
  Softmax(model, x, probs);
}

std::vector<double> PerExampleLosses(const Model& model, const Dataset& data) {
  std::vector<double> losses(data.rows);
  std::vector<double> probs(model.classes);
  for (int64_t i = 0; i < data.rows; ++i) {
    Softmax(model, data.Row(i), probs);
    losses[i] = ExampleLoss(probs, data.labels[i]);
  }
  return losses;
}

double MeanLoss(const Model& model, const Dataset& data) {
  const std::vector<double> losses = PerExampleLosses(model, data);
  double sum = 0.0;
  for (double l : losses) sum += l;
  return data.rows == 0 ? 0.0 : sum / static_cast<double>(data.rows);
}

std::vector<double> MeanLossGradient(const Model& model, const Dataset& data) {
  const int k_count = model.classes;
  std::vector<double> grad(model.num_parameters(), 0.0);
  double* grad_w = grad.data();
  double* grad_b = grad.data() + model.weights.size();
  std::vector<double> probs(k_count);
  for (int64_t i = 0; i < data.rows; ++i) {
    const std::span<const double> x = data.Row(i);
    Softmax(model, x, probs);
    probs[data.labels[i]] -= 1.0;
    for (int j = 0; j < model.dim; ++j) {
      for (int k = 0; k < k_count; ++k) grad_w[j * k_count + k] += x[j] * probs[k];
    }
    for (int k = 0; k < k_count; ++k) grad_b[k] += probs[k];
  }
  const double inv_n = 1.0 / static_cast<double>(data.rows);
  for (double& g : grad) g *= inv_n;
  return grad;
}

double Accuracy(const Model& model, const Dataset& data) {
  if (data.rows == 0) return 0.0;
  std::vector<double> probs(model.classes);
  int64_t correct = 0;
  for (int64_t i = 0; i < data.rows; ++i) {
    Softmax(model, data.Row(i), probs);
    // max_element returns the first maximum: ties go to the lowest index.
    const int predicted = static_cast<int>(
        std::max_element(probs.begin(), probs.end()) - probs.begin());
    if (predicted == data.labels[i]) ++correct;
  }
  return static_cast<double>(correct) / static_cast<double>(data.rows);
}

absl::StatusOr<TrainResult> TrainDpSgd(const Dataset& train,
                                       const SgdConfig& config) {
  if (absl::Status s = config.Validate(/*allow_zero_noise=*/true); !s.ok()) {
    return s;
  }
  if (absl::Status s = train.Validate(); !s.ok()) return s;
  const double expected_batch =
      config.sampling_rate * static_cast<double>(train.rows);
  if (expected_batch < 1.0) {
    return absl::InvalidArgumentError(absl::StrCat(
        "expected batch size q*n = ", expected_batch, " must be at least 1"));
  }

  const int dim = train.dim;
  const int k_count = train.classes;
  TrainResult result;
  Model& model = result.model;
  model = Model::Zeros(dim, k_count);
  model.config = config;
  TrainTrace& trace = result.trace;

  // Per-example squared feature norms, plus 1 for the bias input.
  std::vector<double> augmented_sq_norm(train.rows);
  for (int64_t i = 0; i < train.rows; ++i) {
    double s = 1.0;
    for (double x : train.Row(i)) s += x * x;
    augmented_sq_norm[i] = s;
  }

  const size_t num_params = model.num_parameters();
  std::vector<double> grad(num_params);
  std::vector<double> residual(k_count);
  // No noise at sigma = 0, even with an infinite clip norm.
  const double noise_stddev = config.noise_multiplier == 0
                                  ? 0.0
                                  : config.noise_multiplier * config.clip_norm;
  const double step_scale = config.learning_rate / expected_batch;
  const RandomStream root(config.seed);

  int next_epoch = 1;
  for (int64_t t = 0; t < config.steps; ++t) {
    const RandomStream step_stream = root.Split(static_cast<uint64_t>(t));
    RandomStream sampling = step_stream.Split(kSamplingStream);
    std::fill(grad.begin(), grad.end(), 0.0);
    double* grad_w = grad.data();
    double* grad_b = grad.data() + model.weights.size();

    for (int64_t i = 0; i < train.rows; ++i) {
      if (!sampling.NextBernoulli(config.sampling_rate)) continue;
      ++trace.examples_sampled;
      const std::span<const double> x = train.Row(i);
      Softmax(model, x, residual);
      residual[train.labels[i]] -= 1.0;
      double r_sq = 0.0;
      for (double r : residual) r_sq += r * r;
      // ||x (p - y)^T||_F^2 + ||p - y||^2 = (||x||^2 + 1) ||p - y||^2.
      const double norm = std::sqrt(augmented_sq_norm[i] * r_sq);
      const double factor = ClipFactor(norm, config.clip_norm);
      trace.max_clipped_norm = std::max(trace.max_clipped_norm, factor * norm);
      for (double& r : residual) r *= factor;
      for (int j = 0; j < dim; ++j) {
        const double xj = x[j];
        double* g = grad_w + static_cast<size_t>(j) * k_count;
        for (int k = 0; k < k_count; ++k) g[k] += xj * residual[k];
      }
      for (int k = 0; k < k_count; ++k) grad_b[k] += residual[k];
    }

    if (noise_stddev > 0) {
      RandomStream noise = step_stream.Split(kNoiseStream);
      AddGaussianNoise(grad, noise_stddev, noise);
    }
    for (size_t p = 0; p < model.weights.size(); ++p) {
      model.weights[p] -= step_scale * grad[p];
    }
    for (int k = 0; k < k_count; ++k) {
      model.bias[k] -= step_scale * grad_b[k];
    }

    // Epoch e ends after round(e * steps / epochs) steps.
    while (next_epoch <= config.epochs &&
           t + 1 == static_cast<int64_t>(std::llround(
                        static_cast<double>(next_epoch) *
                        static_cast<double>(config.steps) / config.epochs))) {
      if (!AllFinite(model.weights) || !AllFinite(model.bias)) {
        return absl::FailedPreconditionError(absl::StrCat(
            "training diverged (non-finite parameters) in epoch ", next_epoch,
            "; try a smaller learning rate than ", config.learning_rate));
      }
      const double loss = MeanLoss(model, train);
      if (!std::isfinite(loss)) {
        return absl::FailedPreconditionError(absl::StrCat(
            "training diverged (non-finite loss) in epoch ", next_epoch,
            "; try a smaller learning rate than ", config.learning_rate));
      }
      trace.epoch_loss.push_back(loss);
      trace.epoch_accuracy.push_back(Accuracy(model, train));
      ++next_epoch;
    }
  }

  model.realized_steps = config.steps;
  model.final_train_loss =
      trace.epoch_loss.empty() ? MeanLoss(model, train) : trace.epoch_loss.back();
  return result;
}

std::string SerializeModel(const Model& model) {
  std::string out =
      absl::StrCat("dpsgd-model v1 ", model.dim, " ", model.classes, "\n");
  for (double w : model.weights) absl::StrAppend(&out, FormatReal(w), "\n");
  for (double b : model.bias) absl::StrAppend(&out, FormatReal(b), "\n");
  return out;
}

absl::StatusOr<Model> ParseModel(std::string_view text_in) {
  const absl::string_view text(text_in.data(), text_in.size());
  std::vector<absl::string_view> lines =
      absl::StrSplit(text, '\n', absl::SkipWhitespace());
  if (lines.empty()) return absl::InvalidArgumentError("empty model file");
  std::vector<absl::string_view> header =
      absl::StrSplit(absl::StripAsciiWhitespace(lines[0]), ' ',
                     absl::SkipEmpty());
  int dim = 0, classes = 0;
  if (header.size() != 4 || header[0] != "dpsgd-model" || header[1] != "v1" ||
      !absl::SimpleAtoi(header[2], &dim) ||
      !absl::SimpleAtoi(header[3], &classes) || dim <= 0 || classes <= 0) {
    return absl::InvalidArgumentError(absl::StrCat(
        "bad model header '", lines[0], "', expected 'dpsgd-model v1 d K'"));
  }
  Model model = Model::Zeros(dim, classes);
  const size_t expected = model.num_parameters();
  if (lines.size() - 1 != expected) {
    return absl::InvalidArgumentError(absl::StrCat(
        "model file has ", lines.size() - 1, " values, expected ", expected));
  }
  std::vector<double> params(expected);
  for (size_t i = 0; i < expected; ++i) {
    absl::StatusOr<double> v = ParseReal(std::string(lines[i + 1]));
    if (!v.ok() || !std::isfinite(*v)) {
      return absl::InvalidArgumentError(absl::StrCat(
          "line ", i + 2, ": bad parameter '", lines[i + 1], "'"));
    }
    params[i] = *v;
  }
  model.SetParameters(params);
  return model;
}

absl::Status SaveModel(const Model& model, const std::string& path) {
  return WriteFile(path, SerializeModel(model));
}

absl::StatusOr<Model> LoadModel(const std::string& path) {
  absl::StatusOr<std::string> text = ReadFile(path);
  if (!text.ok()) return text.status();
  return ParseModel(*text);
}

}  // namespace dpaudit
