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

// Upper bounds on the (epsilon, delta) guarantee of DP-SGD with the
// subsampled Gaussian mechanism, under four analyses:
//
//   naive     classical Gaussian step bound, amplified by sampling, composed
//             linearly.
//   advanced  the same per-step budget, composed with the advanced
//             composition theorem.
//   zcdp      zero-concentrated DP of the plain Gaussian mechanism. Sampling
//             amplification is deliberately not applied.
//   rdp       Renyi DP of the sampled Gaussian mechanism, composed linearly in
//             each order and converted to (epsilon, delta).
//
// Every function here is pure and thread-safe.

#ifndef DPAUDIT_ACCOUNTANT_H_
#define DPAUDIT_ACCOUNTANT_H_

#include <cstdint>
#include <optional>
#include <span>
#include <vector>

#include "absl/status/statusor.h"
#include "dpaudit/privacy_budget.h"

namespace dpaudit {

struct GaussianStepBound {
  double epsilon = 0.0;
  // False when epsilon > 1, where the classical bound
  // sigma = sqrt(2 ln(1.25 / delta)) / epsilon is not a proven guarantee.
  bool classical_bound_valid = true;
};

// epsilon_0 = sqrt(2 ln(1.25 / delta0)) / sigma.
absl::StatusOr<GaussianStepBound> GaussianStepEpsilon(double sigma,
                                                      double delta0);

// Privacy amplification by sampling with rate q:
// epsilon' = ln(1 + q (e^epsilon - 1)), delta' = q delta.
absl::StatusOr<PrivacyBudget> AmplifyBySampling(const PrivacyBudget& step,
                                                double q);

// (T epsilon, T delta).
absl::StatusOr<PrivacyBudget> ComposeNaive(const PrivacyBudget& step,
                                           int64_t steps);

// epsilon sqrt(2 T ln(1/slack)) + T epsilon (e^epsilon - 1), T delta + slack.
absl::StatusOr<PrivacyBudget> ComposeAdvanced(const PrivacyBudget& step,
                                              int64_t steps,
                                              double delta_slack);

// rho = T / (2 sigma^2).
double ZcdpRho(double sigma, int64_t steps);
// rho + 2 sqrt(rho ln(1/delta)).
absl::StatusOr<double> ZcdpEpsilon(double sigma, int64_t steps, double delta);

// Per-step RDP values epsilon(alpha) over a grid of orders.
struct RdpCurve {
  std::vector<double> orders;
  std::vector<double> values;
};

// {1.25, 1.5, 1.75, 2, 2.5, ..., 11.5, 12, 13, ..., 64, 128, 256, ..., 65536}.
// The large orders only matter at very high noise.
std::vector<double> DefaultRdpOrders();

// Natural log of E_{z ~ N(0, sigma^2)} [(mu(z) / mu0(z))^alpha] where mu is
// the mixture (1-q) N(0, sigma^2) + q N(1, sigma^2) and mu0 = N(0, sigma^2),
// for an integer order alpha >= 2. Evaluated by the binomial expansion with
// log-sum-exp accumulation.
double SubsampledGaussianLogMoment(double sigma, double q, int64_t alpha);

// Per-step RDP of the sampled Gaussian mechanism. For q = 1 this is the
// closed form alpha / (2 sigma^2) at every order. For q < 1, integer orders
// use the binomial expansion; a fractional order takes the larger of the
// values at its flanking integer orders (at least 2), which upper-bounds it
// because Renyi divergence is non-decreasing in the order.
absl::StatusOr<RdpCurve> SubsampledGaussianRdp(double sigma, double q,
                                               std::span<const double> orders);

struct RdpConversion {
  double epsilon = 0.0;
  double best_order = 0.0;
};

// min over orders of T epsilon(alpha) + ln(1/delta) / (alpha - 1).
absl::StatusOr<RdpConversion> RdpToDp(const RdpCurve& curve, int64_t steps,
                                      double delta);

// One cell of the upper-bound table.
struct Accounting {
  AnalysisKind kind = AnalysisKind::kRdp;
  PrivacyBudget budget;
  // Naive/advanced only: whether the per-step classical Gaussian bound had
  // epsilon_0 <= 1.
  bool classical_bound_valid = true;
  // Rdp only.
  std::optional<double> best_order;
};

// Upper bound for a DP-SGD run at total failure probability `delta`.
//
// Naive and advanced split delta evenly: per-step delta_0 = delta / (2T), and
// advanced composition gets slack delta / 2. The resulting total delta is
// checked to be <= delta.
absl::StatusOr<Accounting> Account(const SgdConfig& config, AnalysisKind kind,
                                   double delta);

// Noise multiplier whose epsilon under `kind` is within 1e-3 relative of
// `target_epsilon`. Bisects over log(sigma) in [1e-3, 1e7] using the
// monotonicity of epsilon in 1/sigma; the returned sigma never exceeds the
// target by more than the tolerance.
absl::StatusOr<double> CalibrateNoiseMultiplier(double target_epsilon,
                                                AnalysisKind kind,
                                                const SgdConfig& config,
                                                double delta);

inline constexpr double kMinCalibrationSigma = 1e-3;
inline constexpr double kMaxCalibrationSigma = 1e7;

}  // namespace dpaudit

#endif  // DPAUDIT_ACCOUNTANT_H_
