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

#include "secagg_audit/curves.h"

#include <cmath>

#include "absl/strings/str_cat.h"
#include "secagg_audit/csv.h"

namespace secagg_audit {

absl::Status ValidateLdpCurve(const LdpCurve& curve, double slack) {
  for (size_t i = 0; i < curve.points.size(); ++i) {
    const LdpPoint& p = curve.points[i];
    if (!(p.delta >= 0.0 && p.delta <= 1.0)) {
      return absl::InvalidArgumentError(
          absl::StrCat("delta ", p.delta, " at index ", i, " outside [0, 1]"));
    }
    if (i == 0) continue;
    const LdpPoint& q = curve.points[i - 1];
    if (!(p.epsilon > q.epsilon)) {
      return absl::InvalidArgumentError(
          absl::StrCat("epsilon not strictly increasing at index ", i));
    }
    if (p.delta > q.delta + slack) {
      return absl::InvalidArgumentError(
          absl::StrCat("delta increases at index ", i, ": ", q.delta, " -> ",
                       p.delta));
    }
  }
  return absl::OkStatus();
}

absl::StatusOr<std::vector<double>> UniformEpsilonGrid(double epsilon_max,
                                                       int count) {
  if (!(epsilon_max > 0.0) || !std::isfinite(epsilon_max)) {
    return absl::InvalidArgumentError(
        absl::StrCat("epsilon_max must be positive, got ", epsilon_max));
  }
  if (count < 2) {
    return absl::InvalidArgumentError(
        absl::StrCat("an epsilon grid needs >= 2 points, got ", count));
  }
  std::vector<double> grid(count);
  for (int i = 0; i < count; ++i) {
    grid[i] = epsilon_max * static_cast<double>(i) / (count - 1);
  }
  return grid;
}

absl::Status WriteLdpCurveCsv(const LdpCurve& curve, const std::string& path) {
  std::vector<std::vector<double>> rows;
  rows.reserve(curve.points.size());
  for (const LdpPoint& p : curve.points) rows.push_back({p.epsilon, p.delta});
  return WriteNumericCsv(path, {"epsilon", "delta"}, rows);
}

absl::StatusOr<LdpCurve> ReadLdpCurveCsv(const std::string& path) {
  absl::StatusOr<std::vector<std::vector<double>>> rows =
      ReadNumericCsv(path, {"epsilon", "delta"});
  if (!rows.ok()) return rows.status();
  LdpCurve curve;
  for (const auto& row : *rows) curve.points.push_back({row[0], row[1]});
  return curve;
}

absl::Status WriteTradeoffCurveCsv(const TradeoffCurve& curve,
                                   const std::string& path) {
  std::vector<std::vector<double>> rows;
  rows.reserve(curve.points.size());
  for (const TradeoffPoint& p : curve.points) {
    rows.push_back({p.threshold, p.fpr, p.fnr});
  }
  return WriteNumericCsv(path, {"theta", "fpr_upper", "fnr_upper"}, rows);
}

absl::StatusOr<TradeoffCurve> ReadTradeoffCurveCsv(const std::string& path) {
  absl::StatusOr<std::vector<std::vector<double>>> rows =
      ReadNumericCsv(path, {"theta", "fpr_upper", "fnr_upper"});
  if (!rows.ok()) return rows.status();
  TradeoffCurve curve;
  for (const auto& row : *rows) curve.points.push_back({row[0], row[1], row[2]});
  return curve;
}

}  // namespace secagg_audit
