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

#include "secagg_audit/special_functions.h"

#include <cmath>
#include <limits>

#include "absl/status/status.h"
#include "absl/strings/str_cat.h"

namespace secagg_audit {
namespace {

constexpr double kSqrt2 = 1.41421356237309504880;
constexpr double kLogSqrt2Pi = 0.91893853320467274178;

// ln of the standard normal density.
double StdNormalLogPdf(double x) { return -0.5 * x * x - kLogSqrt2Pi; }

// Neumaier's variant of Kahan summation.
class CompensatedSum {
 public:
  void Add(double value) {
    const double t = sum_ + value;
    if (std::abs(sum_) >= std::abs(value)) {
      compensation_ += (sum_ - t) + value;
    } else {
      compensation_ += (value - t) + sum_;
    }
    sum_ = t;
  }
  double Result() const { return sum_ + compensation_; }

 private:
  double sum_ = 0.0;
  double compensation_ = 0.0;
};

// Continued fraction for the incomplete beta function (modified Lentz).
double BetaContinuedFraction(double a, double b, double x) {
  constexpr int kMaxIterations = 100000;
  constexpr double kEpsilon = 1e-16;
  constexpr double kTiny = 1e-300;

  const double qab = a + b;
  const double qap = a + 1.0;
  const double qam = a - 1.0;
  double c = 1.0;
  double d = 1.0 - qab * x / qap;
  if (std::abs(d) < kTiny) d = kTiny;
  d = 1.0 / d;
  double h = d;
  for (int m = 1; m <= kMaxIterations; ++m) {
    const double m2 = 2.0 * m;
    double aa = m * (b - m) * x / ((qam + m2) * (a + m2));
    d = 1.0 + aa * d;
    if (std::abs(d) < kTiny) d = kTiny;
    c = 1.0 + aa / c;
    if (std::abs(c) < kTiny) c = kTiny;
    d = 1.0 / d;
    h *= d * c;
    aa = -(a + m) * (qab + m) * x / ((a + m2) * (qap + m2));
    d = 1.0 + aa * d;
    if (std::abs(d) < kTiny) d = kTiny;
    c = 1.0 + aa / c;
    if (std::abs(c) < kTiny) c = kTiny;
    d = 1.0 / d;
    const double delta = d * c;
    h *= delta;
    if (std::abs(delta - 1.0) < kEpsilon) break;
  }
  return h;
}

// Acklam's rational approximation of the normal quantile for p <= 0.5.
double AcklamLowerQuantile(double p) {
  static constexpr double a[] = {-3.969683028665376e+01, 2.209460984245205e+02,
                                 -2.759285104469687e+02, 1.383577518672690e+02,
                                 -3.066479806614716e+01, 2.506628277459239e+00};
  static constexpr double b[] = {-5.447609879822406e+01, 1.615858368580409e+02,
                                 -1.556989798598866e+02, 6.680131188771972e+01,
                                 -1.328068155288572e+01};
  static constexpr double c[] = {-7.784894002430293e-03, -3.223964580411365e-01,
                                 -2.400758277161838e+00, -2.549732539343734e+00,
                                 4.374664141464968e+00,  2.938163982698783e+00};
  static constexpr double d[] = {7.784695709041462e-03, 3.224671290700398e-01,
                                 2.445134137142996e+00, 3.754408661907416e+00};
  constexpr double kLowBreak = 0.02425;
  if (p < kLowBreak) {
    const double q = std::sqrt(-2.0 * std::log(p));
    return (((((c[0] * q + c[1]) * q + c[2]) * q + c[3]) * q + c[4]) * q +
            c[5]) /
           ((((d[0] * q + d[1]) * q + d[2]) * q + d[3]) * q + 1.0);
  }
  const double q = p - 0.5;
  const double r = q * q;
  return (((((a[0] * r + a[1]) * r + a[2]) * r + a[3]) * r + a[4]) * r +
          a[5]) *
         q /
         (((((b[0] * r + b[1]) * r + b[2]) * r + b[3]) * r + b[4]) * r + 1.0);
}

}  // namespace

double StdNormalCdf(double x) {
  if (x < 0) return 0.5 * std::erfc(-x / kSqrt2);
  return 1.0 - 0.5 * std::erfc(x / kSqrt2);
}

double StdNormalLogCdf(double x) {
  if (std::isnan(x)) return x;
  if (x > 0) return std::log1p(-0.5 * std::erfc(x / kSqrt2));
  if (x > -35.0) return std::log(0.5 * std::erfc(-x / kSqrt2));
  if (std::isinf(x)) return -std::numeric_limits<double>::infinity();
  // Mills ratio by its continued fraction, evaluated bottom-up.
  const double t = -x;
  double f = t;
  for (int k = 80; k >= 1; --k) f = t + k / f;
  return StdNormalLogPdf(x) - std::log(f);
}

absl::StatusOr<double> StdNormalQuantile(double p) {
  if (!(p > 0.0 && p < 1.0)) {
    return absl::InvalidArgumentError(
        absl::StrCat("normal quantile requires 0 < p < 1, got ", p));
  }
  if (p > 0.5) {
    // 1 - p is exact here.
    absl::StatusOr<double> mirrored = StdNormalQuantile(1.0 - p);
    if (!mirrored.ok()) return mirrored.status();
    return -*mirrored;
  }
  if (p == 0.5) return 0.0;
  double x = AcklamLowerQuantile(p);
  // Halley steps on Phi(x) - p, with the Mills ratio taken in log space so
  // that far-tail probabilities do not overflow.
  for (int i = 0; i < 3; ++i) {
    const double log_cdf = StdNormalLogCdf(x);
    const double u = -std::expm1(std::log(p) - log_cdf) *
                     std::exp(log_cdf - StdNormalLogPdf(x));
    const double step = u / (1.0 + 0.5 * x * u);
    x -= step;
    if (std::abs(step) <= 1e-16 * std::max(1.0, std::abs(x))) break;
  }
  return x;
}

absl::StatusOr<double> ShiftedIrwinHallPdf(int n, double y) {
  if (n < 1 || n > kMaxIrwinHallTerms) {
    return absl::InvalidArgumentError(
        absl::StrCat("Irwin-Hall order must be in [1, ", kMaxIrwinHallTerms,
                     "], got ", n));
  }
  if (std::isnan(y)) return absl::InvalidArgumentError("y is NaN");
  // The density is symmetric; evaluating from the nearer edge keeps the
  // alternating sum short where the density is small.
  const double x = 0.5 * n - std::abs(y);
  if (x < 0) return 0.0;
  if (n == 1) return 1.0;
  if (x == 0) return 0.0;

  double factorial = 1.0;  // (n-1)!
  for (int i = 2; i < n; ++i) factorial *= i;
  CompensatedSum sum;
  double binomial = 1.0;  // C(n, k), exact in double for n <= 40
  for (int k = 0; k <= n && k < x; ++k) {
    if (k > 0) binomial = binomial * (n - k + 1) / k;
    const double term = binomial * std::pow(x - k, n - 1) / factorial;
    sum.Add((k % 2 == 0) ? term : -term);
  }
  return std::max(0.0, sum.Result());
}

double GammaLogPdf(int shape, double y) {
  constexpr double kNegInf = -std::numeric_limits<double>::infinity();
  if (y < 0 || std::isnan(y)) return kNegInf;
  if (y == 0) return shape == 1 ? 0.0 : kNegInf;
  return (shape - 1) * std::log(y) - y - std::lgamma(static_cast<double>(shape));
}

double RegularizedIncompleteBeta(double x, double a, double b) {
  if (x <= 0) return 0.0;
  if (x >= 1) return 1.0;
  const double log_front = std::lgamma(a + b) - std::lgamma(a) -
                           std::lgamma(b) + a * std::log(x) +
                           b * std::log1p(-x);
  if (x < (a + 1.0) / (a + b + 2.0)) {
    return std::exp(log_front) * BetaContinuedFraction(a, b, x) / a;
  }
  return 1.0 - std::exp(log_front) * BetaContinuedFraction(b, a, 1.0 - x) / b;
}

absl::StatusOr<double> BetaQuantile(double p, double a, double b) {
  if (!(p > 0.0 && p < 1.0)) {
    return absl::InvalidArgumentError(
        absl::StrCat("beta quantile requires 0 < p < 1, got ", p));
  }
  if (!(a > 0.0 && b > 0.0) || std::isinf(a) || std::isinf(b)) {
    return absl::InvalidArgumentError(
        absl::StrCat("beta shapes must be positive and finite, got (", a, ", ",
                     b, ")"));
  }
  if (a == 1.0) return -std::expm1(std::log1p(-p) / b);
  if (b == 1.0) return std::exp(std::log(p) / a);

  double lo = 0.0;
  double hi = 1.0;
  for (int i = 0; i < 2000; ++i) {
    const double mid = 0.5 * (lo + hi);
    if (mid <= lo || mid >= hi) break;
    if (RegularizedIncompleteBeta(mid, a, b) < p) {
      lo = mid;
    } else {
      hi = mid;
    }
    if (hi - lo <= 1e-17 * hi) break;
  }
  return 0.5 * (lo + hi);
}

absl::StatusOr<double> ClopperPearsonUpper(int64_t failures, int64_t trials,
                                           double gamma) {
  if (trials < 1) {
    return absl::InvalidArgumentError(
        absl::StrCat("Clopper-Pearson needs at least one trial, got ", trials));
  }
  if (failures < 0 || failures > trials) {
    return absl::InvalidArgumentError(absl::StrCat(
        "failure count ", failures, " outside [0, ", trials, "]"));
  }
  if (!(gamma > 0.0 && gamma < 1.0)) {
    return absl::InvalidArgumentError(
        absl::StrCat("gamma must lie in (0, 1), got ", gamma));
  }
  if (failures == trials) return 1.0;
  return BetaQuantile(1.0 - 0.5 * gamma, static_cast<double>(failures + 1),
                      static_cast<double>(trials - failures));
}

}  // namespace secagg_audit
