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

#include "dpaudit/oracle.h"

#include <algorithm>
#include <cmath>
#include <limits>
#include <numeric>

#include "absl/strings/ascii.h"
#include "absl/strings/numbers.h"
#include "absl/strings/str_cat.h"
#include "absl/strings/str_format.h"
#include "absl/strings/str_split.h"
#include "dpaudit/bounds.h"
#include "dpaudit/dataset.h"

namespace dpaudit {
namespace {

constexpr double kInf = std::numeric_limits<double>::infinity();

absl::Status CheckDistribution(const std::vector<double>& p,
                               absl::string_view name) {
  double sum = 0.0;
  for (double x : p) {
    if (!(x >= 0) || !std::isfinite(x)) {
      return absl::InvalidArgumentError(
          absl::StrCat(name, " has an invalid probability ", x));
    }
    sum += x;
  }
  if (std::abs(sum - 1.0) > kOracleTolerance) {
    return absl::InvalidArgumentError(
        absl::StrFormat("%s sums to %.17g, not 1", name, sum));
  }
  return absl::OkStatus();
}

double ExactPureEpsilon(const std::vector<double>& p_in,
                        const std::vector<double>& p_out) {
  double eps = 0.0;
  for (size_t i = 0; i < p_in.size(); ++i) {
    if (p_in[i] == 0 && p_out[i] == 0) continue;
    if (p_in[i] == 0 || p_out[i] == 0) return kInf;
    eps = std::max(eps, std::abs(std::log(p_in[i] / p_out[i])));
  }
  return eps;
}

std::string PointName(const RocPoint& p) {
  return absl::StrFormat("(fpr=%.17g, tpr=%.17g, ratio=%g)", p.fpr, p.tpr,
                         p.threshold);
}

bool IsCorner(const RocPoint& p) {
  return (p.fpr == 0 && p.tpr == 0) || (p.fpr == 1 && p.tpr == 1);
}

}  // namespace

absl::StatusOr<FiniteMechanism> FiniteMechanism::Create(
    std::vector<std::string> outputs, std::vector<double> p_in,
    std::vector<double> p_out, PrivacyBudget declared) {
  if (outputs.empty() || p_in.size() != outputs.size() ||
      p_out.size() != outputs.size()) {
    return absl::InvalidArgumentError(
        "mechanism needs one P_in and one P_out entry per output");
  }
  if (absl::Status s = CheckDistribution(p_in, "P_in"); !s.ok()) return s;
  if (absl::Status s = CheckDistribution(p_out, "P_out"); !s.ok()) return s;
  if (absl::Status s = declared.Validate(); !s.ok()) return s;
  return FiniteMechanism(std::move(outputs), std::move(p_in), std::move(p_out),
                         declared);
}

absl::StatusOr<FiniteMechanism> FiniteMechanism::WithExactPureBudget(
    std::vector<std::string> outputs, std::vector<double> p_in,
    std::vector<double> p_out) {
  const double eps = p_in.size() == p_out.size() ? ExactPureEpsilon(p_in, p_out)
                                                 : 0.0;
  return Create(std::move(outputs), std::move(p_in), std::move(p_out),
                PrivacyBudget{eps, 0.0});
}

absl::StatusOr<FiniteMechanism> FiniteMechanism::RandomizedResponse(double p) {
  if (!(p > 0.5 && p < 1.0)) {
    return absl::InvalidArgumentError(
        absl::StrCat("randomized response needs p in (0.5, 1), got ", p));
  }
  return Create({"1", "0"}, {p, 1 - p}, {1 - p, p},
                PrivacyBudget{std::log(p / (1 - p)), 0.0});
}

FiniteMechanism FiniteMechanism::Random(int outputs, RandomStream& stream) {
  auto draw = [&] {
    std::vector<double> p(outputs);
    double sum = 0.0;
    for (double& x : p) {
      x = 0.05 + stream.NextUniform();
      sum += x;
    }
    for (double& x : p) x /= sum;
    // Renormalising can leave the sum 1 ulp off; fold the residue into the
    // last entry.
    p.back() = 1.0 - std::accumulate(p.begin(), p.end() - 1, 0.0);
    return p;
  };
  std::vector<std::string> names(outputs);
  for (int i = 0; i < outputs; ++i) names[i] = absl::StrCat(i);
  std::vector<double> p_in = draw();
  std::vector<double> p_out = draw();
  const double eps = ExactPureEpsilon(p_in, p_out);
  return FiniteMechanism(std::move(names), std::move(p_in), std::move(p_out),
                         PrivacyBudget{eps, 0.0});
}

double RequiredDelta(const FiniteMechanism& m, double epsilon) {
  const double scale = std::exp(epsilon);
  double forward = 0.0, backward = 0.0;
  for (size_t i = 0; i < m.size(); ++i) {
    forward += std::max(0.0, m.p_in()[i] - scale * m.p_out()[i]);
    backward += std::max(0.0, m.p_out()[i] - scale * m.p_in()[i]);
  }
  return std::max(forward, backward);
}

absl::Status VerifyDeclaredBudget(const FiniteMechanism& m) {
  if (std::isinf(m.declared().epsilon)) return absl::OkStatus();
  const double required = RequiredDelta(m, m.declared().epsilon);
  if (required > m.declared().delta + kOracleTolerance) {
    return absl::FailedPreconditionError(absl::StrFormat(
        "declared budget (%.17g, %.17g) is unsound: delta must be at least "
        "%.17g",
        m.declared().epsilon, m.declared().delta, required));
  }
  return absl::OkStatus();
}

RocCurve ExactRoc(const FiniteMechanism& m) {
  struct Entry {
    size_t index;
    double ratio;  // -1 marks outputs impossible under both distributions
  };
  std::vector<Entry> entries;
  entries.reserve(m.size());
  for (size_t i = 0; i < m.size(); ++i) {
    const double in = m.p_in()[i];
    const double out = m.p_out()[i];
    double ratio;
    if (in == 0 && out == 0) {
      ratio = -1.0;
    } else if (out == 0) {
      ratio = kInf;
    } else {
      ratio = in / out;
    }
    entries.push_back({i, ratio});
  }
  std::stable_sort(entries.begin(), entries.end(),
                   [](const Entry& a, const Entry& b) { return a.ratio > b.ratio; });

  RocCurve curve;
  curve.points.push_back({kInf, 0.0, 0.0});
  double tpr = 0.0, fpr = 0.0;
  for (const Entry& e : entries) {
    tpr += m.p_in()[e.index];
    fpr += m.p_out()[e.index];
    curve.points.push_back({e.ratio, std::min(fpr, 1.0), std::min(tpr, 1.0)});
  }
  // The totals are 1 up to rounding; pin the accept-all corner exactly.
  curve.points.back().fpr = 1.0;
  curve.points.back().tpr = 1.0;
  return curve;
}

absl::StatusOr<TprBoundReport> VerifyTprBound(const FiniteMechanism& m) {
  TprBoundReport report;
  report.declared_budget_consistent = VerifyDeclaredBudget(m).ok();
  const RocCurve curve = ExactRoc(m);
  report.max_slack = -kInf;
  report.min_slack = kInf;
  for (const RocPoint& p : curve.points) {
    const double slack = TprUpperBound(p.fpr, m.declared()) - p.tpr;
    ++report.points_checked;
    if (slack < -kOracleTolerance) {
      return absl::FailedPreconditionError(absl::StrFormat(
          "TPR bound violated at %s: bound %.17g < tpr under declared budget "
          "(%.17g, %.17g)",
          PointName(p), TprUpperBound(p.fpr, m.declared()),
          m.declared().epsilon, m.declared().delta));
    }
    report.max_slack = std::max(report.max_slack, slack);
    report.min_slack = std::min(report.min_slack, slack);
    if (!IsCorner(p) &&
        (!report.min_interior_slack || slack < *report.min_interior_slack)) {
      report.min_interior_slack = slack;
      report.tightest_interior_point = p;
    }
  }
  return report;
}

absl::StatusOr<AdvantageBoundReport> VerifyAdvantageBound(
    const FiniteMechanism& m) {
  const RocCurve curve = ExactRoc(m);
  const BestAdvantage best = ComputeBestAdvantage(curve);
  AdvantageBoundReport report;
  report.best_advantage = best.advantage;
  report.bound = AdvantageUpperBound(m.declared());
  report.gap = report.bound - report.best_advantage;
  report.best_point = {best.threshold, best.fpr, best.tpr};
  if (report.gap < -kOracleTolerance) {
    return absl::FailedPreconditionError(absl::StrFormat(
        "advantage bound violated: best advantage %.17g at %s exceeds bound "
        "%.17g for declared budget (%.17g, %.17g)",
        report.best_advantage, PointName(report.best_point), report.bound,
        m.declared().epsilon, m.declared().delta));
  }
  return report;
}

absl::StatusOr<FiniteMechanism> ParseMechanismCsv(
    std::string_view content_in, std::optional<PrivacyBudget> declared) {
  const absl::string_view content(content_in.data(), content_in.size());
  std::vector<std::string> outputs;
  std::vector<double> p_in, p_out;
  int64_t line_no = 0;
  for (absl::string_view line : absl::StrSplit(content, '\n')) {
    ++line_no;
    line = absl::StripAsciiWhitespace(line);
    if (line.empty()) continue;
    std::vector<absl::string_view> fields = absl::StrSplit(line, ',');
    double in = 0, out = 0;
    const bool parsed = fields.size() == 3 &&
                        absl::SimpleAtod(absl::StripAsciiWhitespace(fields[1]), &in) &&
                        absl::SimpleAtod(absl::StripAsciiWhitespace(fields[2]), &out);
    if (!parsed) {
      if (outputs.empty() && line_no == 1) continue;  // header
      return absl::InvalidArgumentError(absl::StrCat(
          "line ", line_no, ": expected 'output_id,p_in,p_out', got '", line,
          "'"));
    }
    outputs.emplace_back(absl::StripAsciiWhitespace(fields[0]));
    p_in.push_back(in);
    p_out.push_back(out);
  }
  if (outputs.empty()) {
    return absl::InvalidArgumentError("mechanism table has no rows");
  }
  if (declared.has_value()) {
    return FiniteMechanism::Create(std::move(outputs), std::move(p_in),
                                   std::move(p_out), *declared);
  }
  return FiniteMechanism::WithExactPureBudget(std::move(outputs),
                                              std::move(p_in), std::move(p_out));
}

absl::StatusOr<FiniteMechanism> LoadMechanismCsv(
    const std::string& path, std::optional<PrivacyBudget> declared) {
  absl::StatusOr<std::string> content = ReadFile(path);
  if (!content.ok()) return content.status();
  return ParseMechanismCsv(*content, declared);
}

OracleSuiteResult RunOracleSuite(uint64_t seed, int random_mechanisms) {
  OracleSuiteResult result;
  auto check = [&result](const FiniteMechanism& m, const std::string& name) {
    ++result.mechanisms;
    absl::StatusOr<TprBoundReport> tpr = VerifyTprBound(m);
    if (!tpr.ok()) {
      ++result.tpr_bound_failures;
      result.failures.push_back(absl::StrCat(name, ": ", tpr.status().message()));
    }
    absl::StatusOr<AdvantageBoundReport> adv = VerifyAdvantageBound(m);
    if (!adv.ok()) {
      ++result.advantage_bound_failures;
      result.failures.push_back(absl::StrCat(name, ": ", adv.status().message()));
    }
    return tpr;
  };

  for (int step = 0; step <= 8; ++step) {
    const double p = 0.55 + 0.05 * step;
    absl::StatusOr<FiniteMechanism> rr = FiniteMechanism::RandomizedResponse(p);
    if (!rr.ok()) {
      result.failures.push_back(std::string(rr.status().message()));
      ++result.tpr_bound_failures;
      continue;
    }
    absl::StatusOr<TprBoundReport> report =
        check(*rr, absl::StrFormat("randomized response p=%.2f", p));
    if (step == 4 && report.ok() && report->min_interior_slack) {
      result.rr_interior_slack = *report->min_interior_slack;
    }
  }
  RandomStream stream(seed);
  for (int i = 0; i < random_mechanisms; ++i) {
    RandomStream child = stream.Split(static_cast<uint64_t>(i));
    (void)check(FiniteMechanism::Random(8, child),
                absl::StrCat("random mechanism ", i));
  }
  return result;
}

}  // namespace dpaudit
