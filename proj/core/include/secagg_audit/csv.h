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

// Minimal CSV reading and writing: a header row followed by data rows,
// comma separated, with RFC 4180 double-quote escaping.

#ifndef SECAGG_AUDIT_CSV_H_
#define SECAGG_AUDIT_CSV_H_

#include <string>
#include <string_view>
#include <vector>

#include "absl/status/status.h"
#include "absl/status/statusor.h"

namespace secagg_audit {

struct CsvTable {
  std::vector<std::string> header;
  std::vector<std::vector<std::string>> rows;
  // 1-based line number in the source text of each row, for error messages.
  std::vector<int> row_lines;

  // Position of `name` in the header, or NotFound.
  absl::StatusOr<int> ColumnIndex(std::string_view name) const;
};

// Parses CSV text. Every row must have as many fields as the header; errors
// name the offending line.
absl::StatusOr<CsvTable> ParseCsv(std::string_view text);

absl::StatusOr<CsvTable> ReadCsvFile(const std::string& path);

// Shortest-round-trip-safe formatting ("%.17g").
std::string FormatDouble(double value);

// Writes a header and numeric rows. Fails with InvalidArgument when a row
// width disagrees with the header, and with Unavailable on I/O failure.
absl::Status WriteNumericCsv(const std::string& path,
                             const std::vector<std::string>& header,
                             const std::vector<std::vector<double>>& rows);

// Reads a CSV whose cells all parse as doubles ("inf", "-inf" accepted).
absl::StatusOr<std::vector<std::vector<double>>> ReadNumericCsv(
    const std::string& path, const std::vector<std::string>& expected_header);

// Reads a whole file into memory. NotFound if the file does not exist,
// Unavailable if it exists but cannot be read.
absl::StatusOr<std::string> ReadFileToString(const std::string& path);

// Writes `contents` to `path`, replacing any existing file.
absl::Status WriteStringToFile(const std::string& path,
                               std::string_view contents);

}  // namespace secagg_audit

#endif  // SECAGG_AUDIT_CSV_H_
