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

// Sampled privacy curves and their CSV form.

#ifndef SECAGG_AUDIT_CURVES_H_
#define SECAGG_AUDIT_CURVES_H_

#include <string>
#include <vector>

#include "absl/status/status.h"
#include "absl/status/statusor.h"

namespace secagg_audit {

struct LdpPoint {
  double epsilon = 0.0;
  double delta = 0.0;
};

// delta(epsilon) sampled at strictly increasing epsilon.
struct LdpCurve {
  std::vector<LdpPoint> points;
};

// Checks strictly increasing epsilon, delta in [0, 1] and delta
// nonincreasing (up to `slack`).
absl::Status ValidateLdpCurve(const LdpCurve& curve, double slack = 0.0);

// `count` evenly spaced values from 0 to epsilon_max inclusive.
inline constexpr int kDefaultEpsilonGridPoints = 201;
absl::StatusOr<std::vector<double>> UniformEpsilonGrid(
    double epsilon_max, int count = kDefaultEpsilonGridPoints);

// Header "epsilon,delta".
absl::Status WriteLdpCurveCsv(const LdpCurve& curve, const std::string& path);
absl::StatusOr<LdpCurve> ReadLdpCurveCsv(const std::string& path);

// One operating point of a membership test. `threshold` is the test's
// likelihood-ratio cutoff; fpr and fnr may be point estimates or upper
// confidence bounds depending on the producer.
struct TradeoffPoint {
  double threshold = 0.0;
  double fpr = 0.0;
  double fnr = 0.0;
};

struct TradeoffCurve {
  std::vector<TradeoffPoint> points;
};

// Header "theta,fpr_upper,fnr_upper".
absl::Status WriteTradeoffCurveCsv(const TradeoffCurve& curve,
                                   const std::string& path);
absl::StatusOr<TradeoffCurve> ReadTradeoffCurveCsv(const std::string& path);

}  // namespace secagg_audit

#endif  // SECAGG_AUDIT_CURVES_H_
