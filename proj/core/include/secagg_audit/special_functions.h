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

// Scalar special functions shared by the accounting and auditing code. All
// functions are pure and reentrant.

#ifndef SECAGG_AUDIT_SPECIAL_FUNCTIONS_H_
#define SECAGG_AUDIT_SPECIAL_FUNCTIONS_H_

#include <cstdint>

#include "absl/status/statusor.h"

namespace secagg_audit {

// Largest n accepted by ShiftedIrwinHallPdf. The alternating sum loses
// accuracy to cancellation beyond this; use a Gaussian surrogate instead.
inline constexpr int kMaxIrwinHallTerms = 40;

// CDF of the standard normal distribution. Relative accuracy is close to
// machine precision in the lower tail; values below ~1e-308 flush to zero.
double StdNormalCdf(double x);

// ln Phi(x), accurate for arbitrarily negative x (no underflow).
double StdNormalLogCdf(double x);

// Inverse of StdNormalCdf. Returns InvalidArgument unless 0 < p < 1.
absl::StatusOr<double> StdNormalQuantile(double p);

// Density of the sum of n independent Uniform[-1/2, 1/2] variables, i.e. the
// Irwin-Hall law shifted to zero mean. Requires 1 <= n <= kMaxIrwinHallTerms.
absl::StatusOr<double> ShiftedIrwinHallPdf(int n, double y);

// Log-density of Gamma(shape, scale = 1). Returns -infinity outside the
// support (y < 0, and y == 0 when shape > 1).
double GammaLogPdf(int shape, double y);

// Regularized incomplete beta function I_x(a, b), evaluated by continued
// fraction. Requires a, b > 0; x is clamped to [0, 1].
double RegularizedIncompleteBeta(double x, double a, double b);

// Quantile of Beta(a, b): the x with I_x(a, b) = p. Uses the closed form when
// a == 1 or b == 1 and bisection otherwise.
absl::StatusOr<double> BetaQuantile(double p, double a, double b);

// Upper end of the two-sided Clopper-Pearson interval at confidence 1 - gamma
// for a binomial proportion with `failures` out of `trials`:
// B(1 - gamma/2; failures + 1, trials - failures), and 1 when every trial
// failed.
absl::StatusOr<double> ClopperPearsonUpper(int64_t failures, int64_t trials,
                                           double gamma);

}  // namespace secagg_audit

#endif  // SECAGG_AUDIT_SPECIAL_FUNCTIONS_H_
