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

#include "secagg_audit/audit_report_io.h"

#include <cmath>
#include <filesystem>
#include <limits>
#include <system_error>

#include "absl/strings/str_cat.h"
#include "json.hpp"
#include "secagg_audit/csv.h"
#include "secagg_audit/curves.h"
#include "secagg_audit/status_macros.h"

namespace secagg_audit {
namespace {

using nlohmann::json;

json VectorToJson(const UpdateVector& v) {
  json out = json::array();
  for (Eigen::Index i = 0; i < v.size(); ++i) out.push_back(v[i]);
  return out;
}

UpdateVector VectorFromJson(const json& j) {
  UpdateVector v(static_cast<Eigen::Index>(j.size()));
  for (size_t i = 0; i < j.size(); ++i) v[i] = j[i].get<double>();
  return v;
}

json FiniteOrNull(double value) {
  return std::isfinite(value) ? json(value) : json(nullptr);
}

double NullAsNegInf(const json& j) {
  return j.is_null() ? -std::numeric_limits<double>::infinity()
                     : j.get<double>();
}

}  // namespace

std::string ReportToJson(const AuditReport& report) {
  json doc;
  doc["seed"] = report.seed;
  doc["gamma"] = report.gamma;
  doc["null_trials"] = report.null_trials;
  doc["alternative_trials"] = report.alternative_trials;
  json thresholds = json::array();
  for (const ThresholdResult& t : report.thresholds) {
    thresholds.push_back({{"theta", t.threshold},
                          {"false_positives", t.false_positives},
                          {"false_negatives", t.false_negatives},
                          {"fpr_upper", t.fpr_upper},
                          {"fnr_upper", t.fnr_upper}});
  }
  doc["thresholds"] = std::move(thresholds);
  json epsilons = json::array();
  for (const EpsilonResult& e : report.epsilons) {
    epsilons.push_back({{"delta", e.delta},
                        {"epsilon_audited", e.epsilon_audited},
                        {"epsilon_cap", FiniteOrNull(e.epsilon_cap)},
                        {"best_threshold", e.best_threshold},
                        {"at_cap", e.at_cap}});
  }
  doc["epsilons"] = std::move(epsilons);
  doc["pair_first"] = VectorToJson(report.pair_first);
  doc["pair_second"] = VectorToJson(report.pair_second);
  doc["estimated_sensitivity"] = report.estimated_sensitivity;
  doc["degenerate_pair"] = report.degenerate_pair;
  doc["dim"] = report.dim;
  doc["n_others"] = report.n_others;
  doc["sensitivity_lower_bound"] = report.sensitivity_lower_bound;
  return doc.dump(2) + "\n";
}

absl::StatusOr<AuditReport> ReportFromJson(const std::string& text) {
  const json doc = json::parse(text, nullptr, /*allow_exceptions=*/false);
  if (doc.is_discarded() || !doc.is_object()) {
    return absl::InvalidArgumentError("audit report is not a JSON object");
  }
  AuditReport report;
  try {
    report.seed = doc.at("seed").get<uint64_t>();
    report.gamma = doc.at("gamma").get<double>();
    report.null_trials = doc.at("null_trials").get<int64_t>();
    report.alternative_trials = doc.at("alternative_trials").get<int64_t>();
    for (const json& t : doc.at("thresholds")) {
      report.thresholds.push_back({t.at("theta").get<double>(),
                                   t.at("false_positives").get<int64_t>(),
                                   t.at("false_negatives").get<int64_t>(),
                                   t.at("fpr_upper").get<double>(),
                                   t.at("fnr_upper").get<double>()});
    }
    for (const json& e : doc.at("epsilons")) {
      report.epsilons.push_back({e.at("delta").get<double>(),
                                 e.at("epsilon_audited").get<double>(),
                                 NullAsNegInf(e.at("epsilon_cap")),
                                 e.at("best_threshold").get<double>(),
                                 e.at("at_cap").get<bool>()});
    }
    report.pair_first = VectorFromJson(doc.at("pair_first"));
    report.pair_second = VectorFromJson(doc.at("pair_second"));
    report.estimated_sensitivity =
        doc.at("estimated_sensitivity").get<double>();
    report.degenerate_pair = doc.at("degenerate_pair").get<bool>();
    report.dim = doc.at("dim").get<int64_t>();
    report.n_others = doc.at("n_others").get<int64_t>();
    report.sensitivity_lower_bound =
        doc.at("sensitivity_lower_bound").get<double>();
  } catch (const json::exception& e) {
    return absl::InvalidArgumentError(
        absl::StrCat("malformed audit report: ", std::string(e.what())));
  }
  return report;
}

absl::Status WriteEpsilonCsv(const std::vector<EpsilonResult>& rows,
                             const std::string& path) {
  std::vector<std::vector<double>> table;
  for (const EpsilonResult& e : rows) {
    table.push_back({e.delta, e.epsilon_audited, e.epsilon_cap});
  }
  return WriteNumericCsv(path, {"delta", "epsilon_audited", "epsilon_cap"},
                         table);
}

absl::StatusOr<std::vector<EpsilonResult>> ReadEpsilonCsv(
    const std::string& path) {
  ASSIGN_OR_RETURN(
      const auto table,
      ReadNumericCsv(path, {"delta", "epsilon_audited", "epsilon_cap"}));
  std::vector<EpsilonResult> rows;
  for (const auto& r : table) {
    EpsilonResult e;
    e.delta = r[0];
    e.epsilon_audited = r[1];
    e.epsilon_cap = r[2];
    rows.push_back(e);
  }
  return rows;
}

absl::Status WriteReportFiles(const AuditReport& report,
                              const std::string& dir) {
  std::error_code ec;
  std::filesystem::create_directories(dir, ec);
  if (ec) {
    return absl::UnavailableError(absl::StrCat(
        "cannot create output directory ", dir, ": ", ec.message()));
  }
  const std::filesystem::path base(dir);
  RETURN_IF_ERROR(WriteStringToFile((base / kReportJsonName).string(),
                                    ReportToJson(report)));
  RETURN_IF_ERROR(WriteTradeoffCurveCsv(report.Curve(),
                                        (base / kTradeoffCsvName).string()));
  return WriteEpsilonCsv(report.epsilons, (base / kEpsilonCsvName).string());
}

}  // namespace secagg_audit
