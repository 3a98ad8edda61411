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

#include "secagg_audit/csv.h"

#include <cstdio>
#include <filesystem>
#include <fstream>
#include <sstream>

#include "absl/strings/numbers.h"
#include "absl/strings/str_cat.h"
#include "absl/strings/str_join.h"

namespace secagg_audit {

absl::StatusOr<int> CsvTable::ColumnIndex(std::string_view name) const {
  for (size_t i = 0; i < header.size(); ++i) {
    if (header[i] == name) return static_cast<int>(i);
  }
  return absl::NotFoundError(absl::StrCat("no column named '", std::string(name), "'"));
}

absl::StatusOr<CsvTable> ParseCsv(std::string_view text) {
  CsvTable table;
  std::vector<std::string> record;
  std::string field;
  bool in_quotes = false;
  bool field_was_quoted = false;
  int line = 1;
  int record_line = 1;

  auto finish_record = [&]() -> absl::Status {
    record.push_back(std::move(field));
    field.clear();
    field_was_quoted = false;
    // Skip blank lines.
    if (record.size() == 1 && record[0].empty()) {
      record.clear();
      return absl::OkStatus();
    }
    if (table.header.empty()) {
      table.header = std::move(record);
    } else {
      if (record.size() != table.header.size()) {
        return absl::InvalidArgumentError(absl::StrCat(
            "line ", record_line, ": expected ", table.header.size(),
            " fields, found ", record.size()));
      }
      table.rows.push_back(std::move(record));
      table.row_lines.push_back(record_line);
    }
    record.clear();
    return absl::OkStatus();
  };

  for (size_t i = 0; i < text.size(); ++i) {
    const char c = text[i];
    if (in_quotes) {
      if (c == '"') {
        if (i + 1 < text.size() && text[i + 1] == '"') {
          field.push_back('"');
          ++i;
        } else {
          in_quotes = false;
        }
      } else {
        if (c == '\n') ++line;
        field.push_back(c);
      }
      continue;
    }
    switch (c) {
      case '"':
        if (!field.empty() || field_was_quoted) {
          return absl::InvalidArgumentError(
              absl::StrCat("line ", line, ": stray quote inside a field"));
        }
        in_quotes = true;
        field_was_quoted = true;
        break;
      case ',':
        record.push_back(std::move(field));
        field.clear();
        field_was_quoted = false;
        break;
      case '\r':
        break;
      case '\n': {
        absl::Status status = finish_record();
        if (!status.ok()) return status;
        ++line;
        record_line = line;
        break;
      }
      default:
        field.push_back(c);
    }
  }
  if (in_quotes) {
    return absl::InvalidArgumentError(
        absl::StrCat("line ", record_line, ": unterminated quoted field"));
  }
  if (!field.empty() || !record.empty() || field_was_quoted) {
    absl::Status status = finish_record();
    if (!status.ok()) return status;
  }
  if (table.header.empty()) {
    return absl::InvalidArgumentError("CSV input has no header row");
  }
  return table;
}

absl::StatusOr<std::string> ReadFileToString(const std::string& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) {
    std::error_code ec;
    if (!std::filesystem::exists(path, ec)) {
      return absl::NotFoundError(absl::StrCat("no such file: ", path));
    }
    return absl::UnavailableError(absl::StrCat("cannot open ", path));
  }
  std::ostringstream buffer;
  buffer << in.rdbuf();
  if (in.bad()) return absl::UnavailableError(absl::StrCat("cannot read ", path));
  return buffer.str();
}

absl::Status WriteStringToFile(const std::string& path,
                               std::string_view contents) {
  std::ofstream out(path, std::ios::binary | std::ios::trunc);
  if (!out) {
    return absl::UnavailableError(absl::StrCat("cannot open ", path,
                                               " for writing"));
  }
  out.write(contents.data(), static_cast<std::streamsize>(contents.size()));
  out.close();
  if (!out) return absl::UnavailableError(absl::StrCat("cannot write ", path));
  return absl::OkStatus();
}

absl::StatusOr<CsvTable> ReadCsvFile(const std::string& path) {
  absl::StatusOr<std::string> text = ReadFileToString(path);
  if (!text.ok()) return text.status();
  absl::StatusOr<CsvTable> table = ParseCsv(*text);
  if (!table.ok()) {
    return absl::Status(table.status().code(),
                        absl::StrCat(path, ": ", table.status().message()));
  }
  return table;
}

std::string FormatDouble(double value) {
  char buffer[32];
  std::snprintf(buffer, sizeof(buffer), "%.17g", value);
  return buffer;
}

absl::Status WriteNumericCsv(const std::string& path,
                             const std::vector<std::string>& header,
                             const std::vector<std::vector<double>>& rows) {
  std::string out = absl::StrJoin(header, ",");
  out.push_back('\n');
  for (const std::vector<double>& row : rows) {
    if (row.size() != header.size()) {
      return absl::InvalidArgumentError(absl::StrCat(
          "row has ", row.size(), " values but the header has ",
          header.size()));
    }
    for (size_t j = 0; j < row.size(); ++j) {
      if (j > 0) out.push_back(',');
      out += FormatDouble(row[j]);
    }
    out.push_back('\n');
  }
  return WriteStringToFile(path, out);
}

absl::StatusOr<std::vector<std::vector<double>>> ReadNumericCsv(
    const std::string& path, const std::vector<std::string>& expected_header) {
  absl::StatusOr<CsvTable> table = ReadCsvFile(path);
  if (!table.ok()) return table.status();
  if (!expected_header.empty() && table->header != expected_header) {
    return absl::InvalidArgumentError(
        absl::StrCat(path, ": header is '", absl::StrJoin(table->header, ","),
                     "', expected '", absl::StrJoin(expected_header, ","),
                     "'"));
  }
  std::vector<std::vector<double>> values;
  values.reserve(table->rows.size());
  for (size_t r = 0; r < table->rows.size(); ++r) {
    std::vector<double> row;
    row.reserve(table->rows[r].size());
    for (const std::string& cell : table->rows[r]) {
      double v;
      if (!absl::SimpleAtod(cell, &v)) {
        return absl::InvalidArgumentError(
            absl::StrCat(path, ": line ", table->row_lines[r],
                         ": cannot parse '", cell, "' as a number"));
      }
      row.push_back(v);
    }
    values.push_back(std::move(row));
  }
  return values;
}

}  // namespace secagg_audit
