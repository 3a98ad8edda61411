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

// File formats for populations of model updates.
//
// Binary layout (all integers and floats little-endian):
//   bytes 0-3    magic "SAUD"
//   bytes 4-7    u32 row count
//   bytes 8-11   u32 column count
//   bytes 12-15  u32 reserved, written as 0
//   then rows * cols f64 values, row-major.

#ifndef SECAGG_AUDIT_UPDATE_IO_H_
#define SECAGG_AUDIT_UPDATE_IO_H_

#include <string>

#include "absl/status/status.h"
#include "absl/status/statusor.h"
#include "secagg_audit/linalg_stats.h"

namespace secagg_audit {

inline constexpr size_t kUpdateFileHeaderBytes = 16;

std::string EncodeUpdateMatrix(const UpdateMatrix& updates);
absl::StatusOr<UpdateMatrix> DecodeUpdateMatrix(const std::string& bytes);

absl::Status WriteUpdateMatrix(const std::string& path,
                               const UpdateMatrix& updates);
absl::StatusOr<UpdateMatrix> ReadUpdateMatrix(const std::string& path);

// CSV with header x0,x1,...; one update per row.
absl::Status WriteUpdateMatrixCsv(const std::string& path,
                                  const UpdateMatrix& updates);
absl::StatusOr<UpdateMatrix> ReadUpdateMatrixCsv(const std::string& path);

}  // namespace secagg_audit

#endif  // SECAGG_AUDIT_UPDATE_IO_H_
