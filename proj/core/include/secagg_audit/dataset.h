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

// Labelled tabular data for the federated-learning simulator.

#ifndef SECAGG_AUDIT_DATASET_H_
#define SECAGG_AUDIT_DATASET_H_

#include <cstdint>
#include <string>
#include <vector>

#include "Eigen/Dense"
#include "absl/status/status.h"
#include "absl/status/statusor.h"

namespace secagg_audit {

using FeatureMatrix =
    Eigen::Matrix<double, Eigen::Dynamic, Eigen::Dynamic, Eigen::RowMajor>;

struct Dataset {
  FeatureMatrix features;   // one sample per row
  std::vector<int> labels;  // in [0, num_classes)
  int num_classes = 0;

  int64_t size() const { return static_cast<int64_t>(labels.size()); }
  int num_features() const { return static_cast<int>(features.cols()); }
};

// Checks N >= 1, matching row and label counts, label range and finiteness.
absl::Status ValidateDataset(const Dataset& ds);

enum class Normalization { kNone, kZScore, kMinMax };

absl::StatusOr<Normalization> ParseNormalization(const std::string& name);

struct CsvSchema {
  std::string label_column;
  // Feature columns in order. Empty means every column except the label.
  std::vector<std::string> feature_columns;
  Normalization normalization = Normalization::kNone;
  // Accepted label strings; label i maps to class i. Empty means the sorted
  // distinct values found in the file.
  std::vector<std::string> label_values;
};

// Parses a CSV with a header row. Normalization statistics are computed over
// the whole file; a constant column normalizes to all zeros. Errors carry the
// offending line number.
absl::StatusOr<Dataset> ParseCsvDataset(const std::string& text,
                                        const CsvSchema& schema);
absl::StatusOr<Dataset> LoadCsvDataset(const std::string& path,
                                       const CsvSchema& schema);

// Gaussian blobs: class c has mean (separation / sqrt(2)) * e_c, so any two
// class means are `separation` apart, and identity covariance. Rows are
// grouped by class. Requires features >= classes >= 2.
absl::StatusOr<Dataset> SynthDataset(int classes, int features,
                                     int per_class_count, double separation,
                                     uint64_t seed);

// Fraction of each class in `indices` (all rows when empty).
std::vector<double> ClassProportions(const Dataset& ds,
                                     const std::vector<int64_t>& indices);

}  // namespace secagg_audit

#endif  // SECAGG_AUDIT_DATASET_H_
