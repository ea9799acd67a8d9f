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

#include "dpaudit/accountant.h"

#include <algorithm>
#include <cmath>
#include <limits>

#include "absl/strings/str_cat.h"
#include "dpaudit/log_math.h"

namespace dpaudit {
namespace {

constexpr double kInf = std::numeric_limits<double>::infinity();

// Relative accuracy the bisection aims for; the public contract is 1e-3.
constexpr double kCalibrationTolerance = 1e-4;
constexpr int kMaxBisectionSteps = 300;

absl::Status CheckOpenUnit(double value, std::string_view name) {
  if (!(value > 0 && value < 1)) {
    return absl::InvalidArgumentError(
        absl::StrCat(std::string(name), " must be in (0, 1), got ", value));
  }
  return absl::OkStatus();
}

absl::Status CheckMechanism(double sigma, double q, int64_t steps) {
  if (!(sigma > 0)) {
    return absl::InvalidArgumentError(
        absl::StrCat("noise multiplier must be positive, got ", sigma));
  }
  if (!(q > 0 && q <= 1)) {
    return absl::InvalidArgumentError(
        absl::StrCat("sampling rate must be in (0, 1], got ", q));
  }
  if (steps < 1) {
    return absl::InvalidArgumentError(
        absl::StrCat("steps must be at least 1, got ", steps));
  }
  return absl::OkStatus();
}

// Value of a single integer order, q < 1.
double IntegerOrderRdp(double sigma, double q, int64_t alpha) {
  const double log_moment = SubsampledGaussianLogMoment(sigma, q, alpha);
  // The moment is >= 1 analytically; rounding can push its log below zero.
  const double value = std::max(0.0, log_moment / static_cast<double>(alpha - 1));
  // Subsampling never loses to the full-batch Gaussian.
  return std::min(value, static_cast<double>(alpha) / (2.0 * sigma * sigma));
}

absl::StatusOr<Accounting> AccountClassical(const SgdConfig& config,
                                            AnalysisKind kind, double delta) {
  const int64_t steps = config.steps;
  const double delta0 = delta / (2.0 * static_cast<double>(steps));
  absl::StatusOr<GaussianStepBound> gaussian =
      GaussianStepEpsilon(config.noise_multiplier, delta0);
  if (!gaussian.ok()) return gaussian.status();
  absl::StatusOr<PrivacyBudget> amplified = AmplifyBySampling(
      PrivacyBudget{gaussian->epsilon, delta0}, config.sampling_rate);
  if (!amplified.ok()) return amplified.status();

  absl::StatusOr<PrivacyBudget> total =
      kind == AnalysisKind::kNaive
          ? ComposeNaive(*amplified, steps)
          : ComposeAdvanced(*amplified, steps, delta / 2.0);
  if (!total.ok()) return total.status();
  // The split is conservative by construction; keep the check anyway since
  // the composed delta is what the report claims.
  if (total->delta > delta * (1 + 1e-12)) {
    return absl::InternalError(absl::StrCat("composed delta ", total->delta,
                                            " exceeds target ", delta));
  }
  Accounting out;
  out.kind = kind;
  out.budget = *total;
  out.classical_bound_valid = gaussian->classical_bound_valid;
  return out;
}

}  // namespace

absl::StatusOr<GaussianStepBound> GaussianStepEpsilon(double sigma,
                                                      double delta0) {
  if (!(sigma > 0)) {
    return absl::InvalidArgumentError(
        absl::StrCat("sigma must be positive, got ", sigma));
  }
  if (absl::Status s = CheckOpenUnit(delta0, "delta0"); !s.ok()) return s;
  GaussianStepBound bound;
  bound.epsilon = std::sqrt(2.0 * std::log(1.25 / delta0)) / sigma;
  bound.classical_bound_valid = bound.epsilon <= 1.0;
  return bound;
}

absl::StatusOr<PrivacyBudget> AmplifyBySampling(const PrivacyBudget& step,
                                                double q) {
  if (absl::Status s = step.Validate(); !s.ok()) return s;
  if (!(q > 0 && q <= 1)) {
    return absl::InvalidArgumentError(
        absl::StrCat("sampling rate must be in (0, 1], got ", q));
  }
  if (q == 1) return step;
  const double eps = step.epsilon;
  double amplified;
  if (eps <= 1.0) {
    amplified = std::log1p(q * std::expm1(eps));
  } else {
    // ln(1 + q(e^eps - 1)) = eps + ln(q + (1 - q) e^-eps); no overflow.
    amplified = eps + std::log(q + (1 - q) * std::exp(-eps));
  }
  return PrivacyBudget{amplified, q * step.delta};
}

absl::StatusOr<PrivacyBudget> ComposeNaive(const PrivacyBudget& step,
                                           int64_t steps) {
  if (absl::Status s = step.Validate(); !s.ok()) return s;
  if (steps < 1) {
    return absl::InvalidArgumentError(
        absl::StrCat("steps must be at least 1, got ", steps));
  }
  const double t = static_cast<double>(steps);
  return PrivacyBudget{t * step.epsilon, t * step.delta};
}

absl::StatusOr<PrivacyBudget> ComposeAdvanced(const PrivacyBudget& step,
                                              int64_t steps,
                                              double delta_slack) {
  if (absl::Status s = step.Validate(); !s.ok()) return s;
  if (steps < 1) {
    return absl::InvalidArgumentError(
        absl::StrCat("steps must be at least 1, got ", steps));
  }
  if (absl::Status s = CheckOpenUnit(delta_slack, "delta slack"); !s.ok()) {
    return s;
  }
  const double t = static_cast<double>(steps);
  const double eps = step.epsilon;
  const double sublinear = eps * std::sqrt(2.0 * t * std::log(1.0 / delta_slack));
  const double linear = eps == 0 ? 0.0 : t * eps * std::expm1(eps);
  return PrivacyBudget{sublinear + linear, t * step.delta + delta_slack};
}

double ZcdpRho(double sigma, int64_t steps) {
  return static_cast<double>(steps) / (2.0 * sigma * sigma);
}

absl::StatusOr<double> ZcdpEpsilon(double sigma, int64_t steps, double delta) {
  if (absl::Status s = CheckMechanism(sigma, 1.0, steps); !s.ok()) return s;
  if (absl::Status s = CheckOpenUnit(delta, "delta"); !s.ok()) return s;
  const double rho = ZcdpRho(sigma, steps);
  return rho + 2.0 * std::sqrt(rho * std::log(1.0 / delta));
}

std::vector<double> DefaultRdpOrders() {
  std::vector<double> orders = {1.25, 1.5, 1.75};
  for (int a = 2; a <= 64; ++a) {
    orders.push_back(a);
    if (a < 12) orders.push_back(a + 0.5);
  }
  for (double a = 128; a <= 65536; a *= 2) orders.push_back(a);
  return orders;
}

double SubsampledGaussianLogMoment(double sigma, double q, int64_t alpha) {
  const double log_q = std::log(q);
  const double log_1mq = std::log1p(-q);
  const double two_var = 2.0 * sigma * sigma;
  const double a = static_cast<double>(alpha);
  std::vector<double> terms;
  terms.reserve(static_cast<size_t>(alpha) + 1);
  // log C(alpha, k), built incrementally (lgamma is not reentrant).
  double log_binomial = 0.0;
  for (int64_t k = 0; k <= alpha; ++k) {
    const double kd = static_cast<double>(k);
    double term = log_binomial + kd * log_q + (kd * kd - kd) / two_var;
    if (k < alpha) term += (a - kd) * log_1mq;
    terms.push_back(term);
    log_binomial += std::log(a - kd) - std::log(kd + 1);
  }
  return LogSumExp(terms);
}

absl::StatusOr<RdpCurve> SubsampledGaussianRdp(double sigma, double q,
                                               std::span<const double> orders) {
  if (absl::Status s = CheckMechanism(sigma, q, 1); !s.ok()) return s;
  RdpCurve curve;
  curve.orders.assign(orders.begin(), orders.end());
  curve.values.reserve(orders.size());
  for (size_t i = 0; i < orders.size(); ++i) {
    const double alpha = orders[i];
    if (!(alpha > 1) || !std::isfinite(alpha)) {
      return absl::InvalidArgumentError(
          absl::StrCat("RDP orders must be finite and > 1, got ", alpha));
    }
    if (i > 0 && !(alpha > orders[i - 1])) {
      return absl::InvalidArgumentError("RDP orders must be strictly increasing");
    }
    if (q == 1) {
      curve.values.push_back(alpha / (2.0 * sigma * sigma));
      continue;
    }
    const double lower = std::floor(alpha);
    const double upper = std::ceil(alpha);
    double value = IntegerOrderRdp(sigma, q, static_cast<int64_t>(upper));
    if (lower != upper && lower >= 2) {
      value = std::max(value,
                       IntegerOrderRdp(sigma, q, static_cast<int64_t>(lower)));
    }
    curve.values.push_back(value);
  }
  return curve;
}

absl::StatusOr<RdpConversion> RdpToDp(const RdpCurve& curve, int64_t steps,
                                      double delta) {
  if (curve.orders.empty() || curve.orders.size() != curve.values.size()) {
    return absl::InvalidArgumentError(
        "RDP curve must be non-empty with one value per order");
  }
  if (steps < 1) {
    return absl::InvalidArgumentError(
        absl::StrCat("steps must be at least 1, got ", steps));
  }
  if (absl::Status s = CheckOpenUnit(delta, "delta"); !s.ok()) return s;
  const double log_inv_delta = std::log(1.0 / delta);
  RdpConversion best{kInf, curve.orders.front()};
  for (size_t i = 0; i < curve.orders.size(); ++i) {
    const double alpha = curve.orders[i];
    const double eps = static_cast<double>(steps) * curve.values[i] +
                       log_inv_delta / (alpha - 1.0);
    if (eps < best.epsilon) best = {eps, alpha};
  }
  return best;
}

absl::StatusOr<Accounting> Account(const SgdConfig& config, AnalysisKind kind,
                                   double delta) {
  if (absl::Status s = CheckMechanism(config.noise_multiplier,
                                      config.sampling_rate, config.steps);
      !s.ok()) {
    return s;
  }
  if (absl::Status s = CheckOpenUnit(delta, "delta"); !s.ok()) return s;

  switch (kind) {
    case AnalysisKind::kNaive:
    case AnalysisKind::kAdvanced:
      return AccountClassical(config, kind, delta);
    case AnalysisKind::kZCdp: {
      absl::StatusOr<double> eps =
          ZcdpEpsilon(config.noise_multiplier, config.steps, delta);
      if (!eps.ok()) return eps.status();
      return Accounting{kind, PrivacyBudget{*eps, delta}, true, std::nullopt};
    }
    case AnalysisKind::kRdp: {
      const std::vector<double> orders = DefaultRdpOrders();
      absl::StatusOr<RdpCurve> curve = SubsampledGaussianRdp(
          config.noise_multiplier, config.sampling_rate, orders);
      if (!curve.ok()) return curve.status();
      absl::StatusOr<RdpConversion> conv =
          RdpToDp(*curve, config.steps, delta);
      if (!conv.ok()) return conv.status();
      return Accounting{kind, PrivacyBudget{conv->epsilon, delta}, true,
                        conv->best_order};
    }
  }
  return absl::InvalidArgumentError("unknown analysis kind");
}

absl::StatusOr<double> CalibrateNoiseMultiplier(double target_epsilon,
                                                AnalysisKind kind,
                                                const SgdConfig& config,
                                                double delta) {
  if (!(target_epsilon > 0) || !std::isfinite(target_epsilon)) {
    return absl::InvalidArgumentError(absl::StrCat(
        "target epsilon must be positive and finite, got ", target_epsilon));
  }
  auto epsilon_at = [&](double sigma) -> absl::StatusOr<double> {
    absl::StatusOr<Accounting> acc =
        Account(config.WithNoise(sigma), kind, delta);
    if (!acc.ok()) return acc.status();
    return acc->budget.epsilon;
  };
  auto rel_error = [&](double eps) {
    return std::abs(eps - target_epsilon) / target_epsilon;
  };

  double lo = kMinCalibrationSigma;
  double hi = kMaxCalibrationSigma;
  absl::StatusOr<double> eps_lo = epsilon_at(lo);
  if (!eps_lo.ok()) return eps_lo.status();
  absl::StatusOr<double> eps_hi = epsilon_at(hi);
  if (!eps_hi.ok()) return eps_hi.status();
  if (*eps_hi > target_epsilon * (1 + kCalibrationTolerance)) {
    return absl::OutOfRangeError(absl::StrCat(
        "target epsilon ", target_epsilon, " is unreachable under ",
        std::string(AnalysisKindName(kind)), ": sigma = ", hi, " still gives ", *eps_hi));
  }
  if (*eps_lo < target_epsilon * (1 - kCalibrationTolerance)) {
    return absl::OutOfRangeError(absl::StrCat(
        "target epsilon ", target_epsilon, " is unreachable under ",
        std::string(AnalysisKindName(kind)), ": sigma = ", lo, " only gives ", *eps_lo));
  }
  if (rel_error(*eps_hi) <= kCalibrationTolerance) return hi;

  double best_eps = *eps_hi;
  for (int i = 0; i < kMaxBisectionSteps; ++i) {
    const double mid = std::sqrt(lo * hi);
    if (mid <= lo || mid >= hi) break;
    absl::StatusOr<double> eps_mid = epsilon_at(mid);
    if (!eps_mid.ok()) return eps_mid.status();
    if (*eps_mid > target_epsilon) {
      lo = mid;
    } else {
      hi = mid;
      best_eps = *eps_mid;
      if (rel_error(best_eps) <= kCalibrationTolerance) return hi;
    }
  }
  if (rel_error(best_eps) <= 1e-3) return hi;
  return absl::InternalError(absl::StrCat(
      "calibration did not converge: best epsilon ", best_eps, " for target ",
      target_epsilon));
}

}  // namespace dpaudit
