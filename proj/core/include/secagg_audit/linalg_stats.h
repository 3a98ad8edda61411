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

// Dense linear algebra on model updates: Gaussian noise models, whitening,
// Mahalanobis distances, eigenvalue bounds and a normality diagnostic.

#ifndef SECAGG_AUDIT_LINALG_STATS_H_
#define SECAGG_AUDIT_LINALG_STATS_H_

#include <cstdint>
#include <optional>
#include <vector>

#include "Eigen/Dense"
#include "absl/status/statusor.h"

namespace secagg_audit {

// One client's flattened model update.
using UpdateVector = Eigen::VectorXd;

// A set of updates stored one per row.
using UpdateMatrix = Eigen::MatrixXd;

// Mean and covariance of the noise that hides a client's update, together
// with the lower Cholesky factor L of covariance + shrinkage * I. Immutable
// once built, so it can be shared between threads.
class NoiseModel {
 public:
  // Factorizes covariance + shrinkage * I. Fails with FailedPrecondition if
  // the regularized matrix is not numerically positive definite.
  static absl::StatusOr<NoiseModel> FromMoments(Eigen::VectorXd mean,
                                                Eigen::MatrixXd covariance,
                                                double shrinkage);

  int dim() const { return static_cast<int>(mean_.size()); }
  const Eigen::VectorXd& mean() const { return mean_; }
  const Eigen::MatrixXd& covariance() const { return covariance_; }
  const Eigen::MatrixXd& chol_lower() const { return chol_lower_; }
  double shrinkage() const { return shrinkage_; }

  // L^{-1} v without dimension checks.
  Eigen::VectorXd WhitenUnchecked(const Eigen::VectorXd& v) const;

  // Applies L^{-1} to every row of `rows`.
  absl::StatusOr<UpdateMatrix> WhitenRows(const UpdateMatrix& rows) const;

 private:
  NoiseModel(Eigen::VectorXd mean, Eigen::MatrixXd covariance,
             Eigen::MatrixXd chol_lower, double shrinkage)
      : mean_(std::move(mean)),
        covariance_(std::move(covariance)),
        chol_lower_(std::move(chol_lower)),
        shrinkage_(shrinkage) {}

  Eigen::VectorXd mean_;
  Eigen::MatrixXd covariance_;
  Eigen::MatrixXd chol_lower_;
  double shrinkage_;
};

// Default ridge added before factorization: 1e-6 * trace(covariance) / d.
double DefaultShrinkage(const Eigen::MatrixXd& covariance);

// Fits a noise model for the sum of `scale` iid updates from per-client
// samples (one per row): mean = scale * sample mean, covariance = scale *
// unbiased sample covariance. Without an explicit shrinkage the default ridge
// is used.
absl::StatusOr<NoiseModel> EstimateNoiseModel(
    const UpdateMatrix& samples, int64_t scale,
    std::optional<double> shrinkage = std::nullopt);

// sqrt((a - b)^T (Sigma + rho I)^{-1} (a - b)) by a triangular solve.
absl::StatusOr<double> Mahalanobis(const NoiseModel& model,
                                   const UpdateVector& a,
                                   const UpdateVector& b);

// L^{-1} v.
absl::StatusOr<UpdateVector> Whiten(const NoiseModel& model,
                                    const UpdateVector& v);

// Smallest eigenvalue of covariance + shrinkage * I by inverse power
// iteration. Fails with an Internal error if the iteration cap is hit.
absl::StatusOr<double> MinEigenvalue(const NoiseModel& model);

struct CoordinateDiagnostic {
  double mean = 0.0;
  double stddev = 0.0;
  double skewness = 0.0;
  double excess_kurtosis = 0.0;
  // Kolmogorov-Smirnov distance between the standardized sample and N(0, 1).
  double ks_distance = 0.0;
  // Set when the coordinate has (numerically) zero variance; the shape
  // statistics are then reported as 0.
  bool degenerate = false;
};

struct GaussianityReport {
  int64_t sample_count = 0;
  std::vector<CoordinateDiagnostic> coordinates;
  bool any_degenerate = false;
  double max_abs_skewness = 0.0;
  double max_abs_excess_kurtosis = 0.0;
  double max_ks_distance = 0.0;
};

// Per-coordinate moments and normality statistics of the samples (one per
// row). Requires at least kMinDiagnosticSamples rows. No verdict is made;
// callers compare the statistics against their own thresholds.
inline constexpr int64_t kMinDiagnosticSamples = 100;
absl::StatusOr<GaussianityReport> GaussianityDiagnostic(
    const UpdateMatrix& samples);

}  // namespace secagg_audit

#endif  // SECAGG_AUDIT_LINALG_STATS_H_
