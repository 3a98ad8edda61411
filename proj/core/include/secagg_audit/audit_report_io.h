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

#ifndef SECAGG_AUDIT_AUDIT_REPORT_IO_H_
#define SECAGG_AUDIT_AUDIT_REPORT_IO_H_

#include <string>
#include <vector>

#include "absl/status/status.h"
#include "absl/status/statusor.h"
#include "secagg_audit/auditor.h"

namespace secagg_audit {

// File names written by WriteReportFiles.
inline constexpr char kReportJsonName[] = "report.json";
inline constexpr char kTradeoffCsvName[] = "tradeoff.csv";
inline constexpr char kEpsilonCsvName[] = "epsilon.csv";

// JSON document with one field per AuditReport member. A cap of -inf (no
// auditable epsilon at that delta) is written as null.
std::string ReportToJson(const AuditReport& report);
absl::StatusOr<AuditReport> ReportFromJson(const std::string& text);

// `delta,epsilon_audited,epsilon_cap` table.
absl::Status WriteEpsilonCsv(const std::vector<EpsilonResult>& rows,
                             const std::string& path);
absl::StatusOr<std::vector<EpsilonResult>> ReadEpsilonCsv(
    const std::string& path);

// Writes report.json, tradeoff.csv and epsilon.csv into `dir` (created if
// missing).
absl::Status WriteReportFiles(const AuditReport& report,
                              const std::string& dir);

}  // namespace secagg_audit

#endif  // SECAGG_AUDIT_AUDIT_REPORT_IO_H_
