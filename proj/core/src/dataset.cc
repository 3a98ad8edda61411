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

#include "secagg_audit/dataset.h"

#include <algorithm>
#include <cmath>
#include <map>
#include <random>

#include "absl/strings/numbers.h"
#include "absl/strings/str_cat.h"
#include "absl/strings/str_join.h"
#include "secagg_audit/csv.h"
#include "secagg_audit/random.h"

namespace secagg_audit {
namespace {

void NormalizeColumns(Normalization mode, FeatureMatrix& x) {
  if (mode == Normalization::kNone) return;
  const double n = static_cast<double>(x.rows());
  for (Eigen::Index j = 0; j < x.cols(); ++j) {
    auto col = x.col(j);
    if (mode == Normalization::kZScore) {
      const double mean = col.mean();
      const double var = (col.array() - mean).square().sum() / n;
      const double sd = std::sqrt(var);
      if (sd > 0.0) {
        col = (col.array() - mean) / sd;
      } else {
        col.setZero();
      }
    } else {
      const double lo = col.minCoeff();
      const double hi = col.maxCoeff();
      if (hi > lo) {
        col = (col.array() - lo) / (hi - lo);
      } else {
        col.setZero();
      }
    }
  }
}

// Distinct label strings, numerically ordered when they are all integers.
std::vector<std::string> SortedLabels(const std::vector<std::string>& raw) {
  std::vector<std::string> distinct(raw);
  std::sort(distinct.begin(), distinct.end());
  distinct.erase(std::unique(distinct.begin(), distinct.end()),
                 distinct.end());
  bool all_integers = true;
  for (const std::string& s : distinct) {
    int64_t v;
    if (!absl::SimpleAtoi(s, &v)) all_integers = false;
  }
  if (all_integers) {
    std::sort(distinct.begin(), distinct.end(),
              [](const std::string& a, const std::string& b) {
                int64_t va = 0;
                int64_t vb = 0;
                (void)absl::SimpleAtoi(a, &va);
                (void)absl::SimpleAtoi(b, &vb);
                return va < vb;
              });
  }
  return distinct;
}

}  // namespace

absl::Status ValidateDataset(const Dataset& ds) {
  if (ds.size() < 1) return absl::InvalidArgumentError("dataset is empty");
  if (ds.features.rows() != ds.size()) {
    return absl::InvalidArgumentError(
        absl::StrCat("dataset has ", ds.features.rows(), " feature rows but ",
                     ds.size(), " labels"));
  }
  if (ds.num_classes < 2) {
    return absl::InvalidArgumentError(
        absl::StrCat("need at least 2 classes, got ", ds.num_classes));
  }
  for (int64_t i = 0; i < ds.size(); ++i) {
    if (ds.labels[i] < 0 || ds.labels[i] >= ds.num_classes) {
      return absl::InvalidArgumentError(absl::StrCat(
          "label ", ds.labels[i], " of row ", i, " outside [0, ",
          ds.num_classes, ")"));
    }
  }
  if (!ds.features.allFinite()) {
    return absl::InvalidArgumentError("dataset has non-finite features");
  }
  return absl::OkStatus();
}

absl::StatusOr<Normalization> ParseNormalization(const std::string& name) {
  if (name == "none") return Normalization::kNone;
  if (name == "zscore") return Normalization::kZScore;
  if (name == "minmax") return Normalization::kMinMax;
  return absl::InvalidArgumentError(absl::StrCat(
      "unknown normalization '", name, "'; expected none, zscore or minmax"));
}

absl::StatusOr<Dataset> ParseCsvDataset(const std::string& text,
                                        const CsvSchema& schema) {
  absl::StatusOr<CsvTable> table = ParseCsv(text);
  if (!table.ok()) return table.status();
  absl::StatusOr<int> label_col = table->ColumnIndex(schema.label_column);
  if (!label_col.ok()) {
    return absl::InvalidArgumentError(absl::StrCat(
        "label column '", schema.label_column, "' not in the header"));
  }
  std::vector<int> feature_cols;
  std::vector<std::string> feature_names = schema.feature_columns;
  if (feature_names.empty()) {
    for (size_t j = 0; j < table->header.size(); ++j) {
      if (static_cast<int>(j) != *label_col) {
        feature_names.push_back(table->header[j]);
      }
    }
  }
  for (const std::string& name : feature_names) {
    absl::StatusOr<int> col = table->ColumnIndex(name);
    if (!col.ok()) {
      return absl::InvalidArgumentError(
          absl::StrCat("feature column '", name, "' not in the header"));
    }
    feature_cols.push_back(*col);
  }
  if (feature_cols.empty()) {
    return absl::InvalidArgumentError("no feature columns");
  }
  if (table->rows.empty()) {
    return absl::InvalidArgumentError("CSV has a header but no data rows");
  }

  std::vector<std::string> raw_labels;
  raw_labels.reserve(table->rows.size());
  for (const auto& row : table->rows) raw_labels.push_back(row[*label_col]);
  const std::vector<std::string> label_values =
      schema.label_values.empty() ? SortedLabels(raw_labels)
                                  : schema.label_values;
  if (label_values.size() < 2) {
    return absl::InvalidArgumentError(absl::StrCat(
        "label column must take at least 2 values, found ",
        label_values.size()));
  }
  std::map<std::string, int> label_index;
  for (size_t i = 0; i < label_values.size(); ++i) {
    label_index.emplace(label_values[i], static_cast<int>(i));
  }

  Dataset ds;
  ds.num_classes = static_cast<int>(label_values.size());
  ds.features.resize(static_cast<Eigen::Index>(table->rows.size()),
                     static_cast<Eigen::Index>(feature_cols.size()));
  ds.labels.resize(table->rows.size());
  for (size_t r = 0; r < table->rows.size(); ++r) {
    const int line = table->row_lines[r];
    auto it = label_index.find(raw_labels[r]);
    if (it == label_index.end()) {
      return absl::InvalidArgumentError(
          absl::StrCat("line ", line, ": unknown label '", raw_labels[r],
                       "' (expected one of ",
                       absl::StrJoin(label_values, ", "), ")"));
    }
    ds.labels[r] = it->second;
    for (size_t j = 0; j < feature_cols.size(); ++j) {
      const std::string& cell = table->rows[r][feature_cols[j]];
      double v;
      if (!absl::SimpleAtod(cell, &v) || !std::isfinite(v)) {
        return absl::InvalidArgumentError(absl::StrCat(
            "line ", line, ": column '", feature_names[j], "': cannot parse '",
            cell, "' as a finite number"));
      }
      ds.features(static_cast<Eigen::Index>(r), static_cast<Eigen::Index>(j)) =
          v;
    }
  }
  NormalizeColumns(schema.normalization, ds.features);
  return ds;
}

absl::StatusOr<Dataset> LoadCsvDataset(const std::string& path,
                                       const CsvSchema& schema) {
  absl::StatusOr<std::string> text = ReadFileToString(path);
  if (!text.ok()) return text.status();
  absl::StatusOr<Dataset> ds = ParseCsvDataset(*text, schema);
  if (!ds.ok()) {
    return absl::Status(ds.status().code(),
                        absl::StrCat(path, ": ", ds.status().message()));
  }
  return ds;
}

absl::StatusOr<Dataset> SynthDataset(int classes, int features,
                                     int per_class_count, double separation,
                                     uint64_t seed) {
  if (classes < 2 || features < classes || per_class_count < 1) {
    return absl::InvalidArgumentError(absl::StrCat(
        "synthetic data needs classes >= 2, features >= classes and a "
        "positive per-class count; got classes=",
        classes, ", features=", features, ", count=", per_class_count));
  }
  if (!(separation >= 0.0) || !std::isfinite(separation)) {
    return absl::InvalidArgumentError(
        absl::StrCat("separation must be finite and >= 0, got ", separation));
  }
  Rng rng = MakeRng(seed, Stream::kSynthData, 0);
  std::normal_distribution<double> normal;
  const double offset = separation / std::sqrt(2.0);
  Dataset ds;
  ds.num_classes = classes;
  const int64_t n = static_cast<int64_t>(classes) * per_class_count;
  ds.features.resize(n, features);
  ds.labels.resize(n);
  int64_t row = 0;
  for (int c = 0; c < classes; ++c) {
    for (int i = 0; i < per_class_count; ++i, ++row) {
      for (int j = 0; j < features; ++j) ds.features(row, j) = normal(rng);
      ds.features(row, c) += offset;
      ds.labels[row] = c;
    }
  }
  return ds;
}

std::vector<double> ClassProportions(const Dataset& ds,
                                     const std::vector<int64_t>& indices) {
  std::vector<double> counts(ds.num_classes, 0.0);
  double total = 0.0;
  if (indices.empty()) {
    for (int label : ds.labels) counts[label] += 1.0;
    total = static_cast<double>(ds.size());
  } else {
    for (int64_t i : indices) counts[ds.labels[i]] += 1.0;
    total = static_cast<double>(indices.size());
  }
  if (total > 0.0) {
    for (double& c : counts) c /= total;
  }
  return counts;
}

}  // namespace secagg_audit
