// Copyright 2026 The SecAgg Audit Authors
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

#include "secagg_audit/gaussian_mechanism.h"

#include <algorithm>
#include <cmath>
#include <limits>

#include "absl/status/status.h"
#include "absl/strings/str_cat.h"
#include "secagg_audit/special_functions.h"

namespace secagg_audit {

double GaussianDelta(double epsilon, double sensitivity) {
  const double d = std::abs(sensitivity);
  if (d == 0.0) return 0.0;
  const double log_a = StdNormalLogCdf(0.5 * d - epsilon / d);
  const double log_b = StdNormalLogCdf(-0.5 * d - epsilon / d);
  if (log_a == -std::numeric_limits<double>::infinity()) return 0.0;
  const double delta = std::exp(log_a) * -std::expm1(epsilon + log_b - log_a);
  return std::clamp(delta, 0.0, 1.0);
}

absl::StatusOr<double> GaussianEpsilonForDelta(double delta,
                                               double sensitivity) {
  if (!(sensitivity > 0.0) || !std::isfinite(sensitivity)) {
    return absl::InvalidArgumentError(absl::StrCat(
        "sensitivity must be positive and finite, got ", sensitivity));
  }
  if (!(delta > 0.0 && delta <= 1.0)) {
    return absl::InvalidArgumentError(
        absl::StrCat("delta must lie in (0, 1], got ", delta));
  }
  constexpr double kBoundarySlack = 1e-6;
  const double delta_at_zero = GaussianDelta(0.0, sensitivity);
  if (delta >= delta_at_zero) {
    if (delta <= delta_at_zero + kBoundarySlack) return 0.0;
    return absl::InvalidArgumentError(absl::StrCat(
        "delta ", delta, " exceeds the largest attainable value ",
        delta_at_zero, " for sensitivity ", sensitivity));
  }
  double lo = 0.0;
  double hi = 1.0;
  while (GaussianDelta(hi, sensitivity) > delta) {
    lo = hi;
    hi *= 2.0;
    if (hi > 1e12) {
      return absl::InternalError("failed to bracket epsilon for delta");
    }
  }
  for (int i = 0; i < 200; ++i) {
    const double mid = 0.5 * (lo + hi);
    if (mid <= lo || mid >= hi) break;
    if (GaussianDelta(mid, sensitivity) > delta) {
      lo = mid;
    } else {
      hi = mid;
    }
  }
  return hi;
}

double GaussianTradeoff(double alpha, double sensitivity) {
  if (alpha <= 0.0) return 1.0;
  if (alpha >= 1.0) return 0.0;
  const double d = std::abs(sensitivity);
  if (d == 0.0) return 1.0 - alpha;
  // Phi^{-1}(1 - alpha) = -Phi^{-1}(alpha), which keeps precision for small
  // alpha.
  const double z = *StdNormalQuantile(alpha);
  return StdNormalCdf(-z - d);
}

RocPoint AnalyticRoc(double theta, double sensitivity) {
  const double d = std::abs(sensitivity);
  if (d == 0.0) {
    // The statistic is identically 0.
    const double fpr = theta >= 0.0 ? 1.0 : 0.0;
    return {fpr, 1.0 - fpr};
  }
  const double eta = GaussianLossMean(d);
  // The standard deviation sqrt(2 eta) equals d.
  return {StdNormalCdf((theta - eta) / d), StdNormalCdf((-theta - eta) / d)};
}

absl::StatusOr<double> L2BallSensitivity(double radius, int64_t dim,
                                         const NoiseModel& model) {
  if (!(radius > 0.0) || !std::isfinite(radius)) {
    return absl::InvalidArgumentError(
        absl::StrCat("radius must be positive, got ", radius));
  }
  if (dim != model.dim()) {
    return absl::InvalidArgumentError(absl::StrCat(
        "dimension ", dim, " does not match the noise model (", model.dim(),
        ")"));
  }
  absl::StatusOr<double> lambda = MinEigenvalue(model);
  if (!lambda.ok()) return lambda.status();
  return 2.0 * radius * std::sqrt(static_cast<double>(dim) / *lambda);
}

double SensitivityLowerBound(int64_t dim, int64_t n_others) {
  return 2.0 * std::sqrt(static_cast<double>(dim) /
                         static_cast<double>(n_others));
}

absl::StatusOr<LdpCurve> GaussianLdpCurve(
    double sensitivity, const std::vector<double>& epsilon_grid) {
  LdpCurve curve;
  curve.points.reserve(epsilon_grid.size());
  for (double eps : epsilon_grid) {
    curve.points.push_back({eps, GaussianDelta(eps, sensitivity)});
  }
  absl::Status status = ValidateLdpCurve(curve, 1e-15);
  if (!status.ok()) return status;
  return curve;
}

}  // namespace secagg_audit
