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

// Closed-form privacy of the correlated Gaussian mechanism z = x + y with
// y ~ N(mu, Sigma). Everything is a function of the Mahalanobis sensitivity
// Delta = max over input pairs of |x - x'|_{Sigma^{-1}}.

#ifndef SECAGG_AUDIT_GAUSSIAN_MECHANISM_H_
#define SECAGG_AUDIT_GAUSSIAN_MECHANISM_H_

#include <cstdint>
#include <vector>

#include "absl/status/statusor.h"
#include "secagg_audit/curves.h"
#include "secagg_audit/linalg_stats.h"

namespace secagg_audit {

// Optimal delta at `epsilon`:
//   Phi(D/2 - eps/D) - e^eps Phi(-D/2 - eps/D),
// evaluated in log space. Returns 0 when sensitivity == 0. Negative
// sensitivities are treated by magnitude.
double GaussianDelta(double epsilon, double sensitivity);

// Smallest epsilon >= 0 with GaussianDelta(epsilon) <= delta, by bisection.
// Deltas at or within 1e-6 above GaussianDelta(0) map to 0; larger ones, and
// delta outside (0, 1], are InvalidArgument. Requires sensitivity > 0.
absl::StatusOr<double> GaussianEpsilonForDelta(double delta,
                                               double sensitivity);

// Minimum false-negative rate at false-positive rate `alpha` when testing
// N(x, Sigma) against N(x', Sigma): Phi(Phi^{-1}(1 - alpha) - sensitivity).
// alpha is clamped to [0, 1]; sensitivity 0 gives 1 - alpha.
double GaussianTradeoff(double alpha, double sensitivity);

// Mean of the privacy-loss variable, which is N(eta, 2 eta).
inline double GaussianLossMean(double sensitivity) {
  return 0.5 * sensitivity * sensitivity;
}

struct RocPoint {
  double fpr = 0.0;
  double fnr = 0.0;
};

// Error rates of the likelihood-ratio test that rejects x when the log
// likelihood ratio ln N(z; x) / N(z; x') is <= theta.
RocPoint AnalyticRoc(double theta, double sensitivity);

// Sensitivity over the l2 ball {|x| <= radius * sqrt(dim)}:
// 2 * radius * sqrt(dim / lambda_min).
absl::StatusOr<double> L2BallSensitivity(double radius, int64_t dim,
                                         const NoiseModel& model);

// 2 sqrt(dim / n_others): no l2-ball sensitivity can be smaller when the noise
// is the sum of n_others updates from the unit-radius ball.
double SensitivityLowerBound(int64_t dim, int64_t n_others);

// GaussianDelta sampled over `epsilon_grid`.
absl::StatusOr<LdpCurve> GaussianLdpCurve(
    double sensitivity, const std::vector<double>& epsilon_grid);

}  // namespace secagg_audit

#endif  // SECAGG_AUDIT_GAUSSIAN_MECHANISM_H_
