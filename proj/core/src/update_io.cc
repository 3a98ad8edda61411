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

#include "secagg_audit/update_io.h"

#include <bit>
#include <cstdint>
#include <cstring>
#include <limits>
#include <vector>

#include "absl/strings/str_cat.h"
#include "secagg_audit/csv.h"

namespace secagg_audit {
namespace {

constexpr char kMagic[4] = {'S', 'A', 'U', 'D'};

void AppendU32(std::string& out, uint32_t v) {
  for (int i = 0; i < 4; ++i) out.push_back(static_cast<char>((v >> (8 * i)) & 0xff));
}

void AppendU64(std::string& out, uint64_t v) {
  for (int i = 0; i < 8; ++i) out.push_back(static_cast<char>((v >> (8 * i)) & 0xff));
}

uint64_t LoadLittleEndian(const std::string& bytes, size_t offset, int width) {
  uint64_t v = 0;
  for (int i = 0; i < width; ++i) {
    v |= static_cast<uint64_t>(static_cast<unsigned char>(bytes[offset + i]))
         << (8 * i);
  }
  return v;
}

}  // namespace

std::string EncodeUpdateMatrix(const UpdateMatrix& updates) {
  std::string out(kMagic, 4);
  out.reserve(kUpdateFileHeaderBytes + 8 * updates.size());
  AppendU32(out, static_cast<uint32_t>(updates.rows()));
  AppendU32(out, static_cast<uint32_t>(updates.cols()));
  AppendU32(out, 0);
  for (Eigen::Index r = 0; r < updates.rows(); ++r) {
    for (Eigen::Index c = 0; c < updates.cols(); ++c) {
      AppendU64(out, std::bit_cast<uint64_t>(updates(r, c)));
    }
  }
  return out;
}

absl::StatusOr<UpdateMatrix> DecodeUpdateMatrix(const std::string& bytes) {
  if (bytes.size() < kUpdateFileHeaderBytes ||
      std::memcmp(bytes.data(), kMagic, 4) != 0) {
    return absl::DataLossError("not an update matrix (bad magic)");
  }
  const uint64_t rows = LoadLittleEndian(bytes, 4, 4);
  const uint64_t cols = LoadLittleEndian(bytes, 8, 4);
  const uint64_t expected = kUpdateFileHeaderBytes + 8 * rows * cols;
  if (bytes.size() != expected) {
    return absl::DataLossError(absl::StrCat(
        "update matrix of ", rows, "x", cols, " needs ", expected,
        " bytes, found ", bytes.size()));
  }
  UpdateMatrix updates(rows, cols);
  size_t offset = kUpdateFileHeaderBytes;
  for (uint64_t r = 0; r < rows; ++r) {
    for (uint64_t c = 0; c < cols; ++c, offset += 8) {
      updates(r, c) = std::bit_cast<double>(LoadLittleEndian(bytes, offset, 8));
    }
  }
  return updates;
}

absl::Status WriteUpdateMatrix(const std::string& path,
                               const UpdateMatrix& updates) {
  if (updates.rows() > std::numeric_limits<uint32_t>::max() ||
      updates.cols() > std::numeric_limits<uint32_t>::max()) {
    return absl::InvalidArgumentError("update matrix too large for the format");
  }
  return WriteStringToFile(path, EncodeUpdateMatrix(updates));
}

absl::StatusOr<UpdateMatrix> ReadUpdateMatrix(const std::string& path) {
  absl::StatusOr<std::string> bytes = ReadFileToString(path);
  if (!bytes.ok()) return bytes.status();
  absl::StatusOr<UpdateMatrix> updates = DecodeUpdateMatrix(*bytes);
  if (!updates.ok()) {
    return absl::Status(updates.status().code(),
                        absl::StrCat(path, ": ", updates.status().message()));
  }
  return updates;
}

absl::Status WriteUpdateMatrixCsv(const std::string& path,
                                  const UpdateMatrix& updates) {
  std::vector<std::string> header;
  for (Eigen::Index c = 0; c < updates.cols(); ++c) {
    header.push_back(absl::StrCat("x", c));
  }
  std::vector<std::vector<double>> rows(updates.rows());
  for (Eigen::Index r = 0; r < updates.rows(); ++r) {
    rows[r].resize(updates.cols());
    for (Eigen::Index c = 0; c < updates.cols(); ++c) rows[r][c] = updates(r, c);
  }
  return WriteNumericCsv(path, header, rows);
}

absl::StatusOr<UpdateMatrix> ReadUpdateMatrixCsv(const std::string& path) {
  absl::StatusOr<std::vector<std::vector<double>>> rows =
      ReadNumericCsv(path, {});
  if (!rows.ok()) return rows.status();
  if (rows->empty()) return UpdateMatrix(0, 0);
  UpdateMatrix updates(rows->size(), (*rows)[0].size());
  for (size_t r = 0; r < rows->size(); ++r) {
    for (size_t c = 0; c < (*rows)[r].size(); ++c) updates(r, c) = (*rows)[r][c];
  }
  return updates;
}

}  // namespace secagg_audit
