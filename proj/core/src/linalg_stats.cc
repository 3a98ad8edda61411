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

#include "secagg_audit/linalg_stats.h"

#include <algorithm>
#include <cmath>
#include <limits>
#include <vector>

#include "absl/status/status.h"
#include "absl/strings/str_cat.h"
#include "secagg_audit/random.h"
#include "secagg_audit/special_functions.h"

namespace secagg_audit {
namespace {

absl::Status CheckDim(const NoiseModel& model, const Eigen::VectorXd& v,
                      const char* what) {
  if (v.size() != model.dim()) {
    return absl::InvalidArgumentError(absl::StrCat(
        what, " has dimension ", v.size(), " but the noise model has ",
        model.dim()));
  }
  return absl::OkStatus();
}

}  // namespace

absl::StatusOr<NoiseModel> NoiseModel::FromMoments(Eigen::VectorXd mean,
                                                   Eigen::MatrixXd covariance,
                                                   double shrinkage) {
  const Eigen::Index d = mean.size();
  if (d < 1) return absl::InvalidArgumentError("noise model needs d >= 1");
  if (covariance.rows() != d || covariance.cols() != d) {
    return absl::InvalidArgumentError(
        absl::StrCat("covariance is ", covariance.rows(), "x",
                     covariance.cols(), " but the mean has dimension ", d));
  }
  if (!(shrinkage >= 0.0) || !std::isfinite(shrinkage)) {
    return absl::InvalidArgumentError(
        absl::StrCat("shrinkage must be finite and >= 0, got ", shrinkage));
  }
  if (!mean.allFinite() || !covariance.allFinite()) {
    return absl::InvalidArgumentError("noise model moments are not finite");
  }
  // Symmetrize to remove rounding asymmetry from the estimator.
  covariance = 0.5 * (covariance + covariance.transpose()).eval();

  Eigen::MatrixXd regularized = covariance;
  regularized.diagonal().array() += shrinkage;
  Eigen::LLT<Eigen::MatrixXd> llt(regularized);
  if (llt.info() != Eigen::Success) {
    return absl::FailedPreconditionError(
        "covariance + shrinkage*I is not positive definite; increase the "
        "shrinkage");
  }
  Eigen::MatrixXd lower = llt.matrixL();
  const double max_diag = regularized.diagonal().maxCoeff();
  const double min_pivot_sq = lower.diagonal().array().square().minCoeff();
  if (!(min_pivot_sq > 1e-14 * max_diag)) {
    return absl::FailedPreconditionError(absl::StrCat(
        "covariance + shrinkage*I is numerically singular (smallest squared "
        "pivot ",
        min_pivot_sq, " vs largest diagonal ", max_diag,
        "); increase the shrinkage"));
  }
  return NoiseModel(std::move(mean), std::move(covariance), std::move(lower),
                    shrinkage);
}

Eigen::VectorXd NoiseModel::WhitenUnchecked(const Eigen::VectorXd& v) const {
  return chol_lower_.triangularView<Eigen::Lower>().solve(v);
}

absl::StatusOr<UpdateMatrix> NoiseModel::WhitenRows(
    const UpdateMatrix& rows) const {
  if (rows.cols() != dim()) {
    return absl::InvalidArgumentError(absl::StrCat(
        "rows have dimension ", rows.cols(), " but the noise model has ",
        dim()));
  }
  Eigen::MatrixXd columns = rows.transpose();
  chol_lower_.triangularView<Eigen::Lower>().solveInPlace(columns);
  return UpdateMatrix(columns.transpose());
}

double DefaultShrinkage(const Eigen::MatrixXd& covariance) {
  if (covariance.rows() == 0) return 0.0;
  return 1e-6 * covariance.trace() / static_cast<double>(covariance.rows());
}

absl::StatusOr<NoiseModel> EstimateNoiseModel(const UpdateMatrix& samples,
                                              int64_t scale,
                                              std::optional<double> shrinkage) {
  if (samples.rows() < 2) {
    return absl::InvalidArgumentError(absl::StrCat(
        "need at least 2 samples to estimate a covariance, got ",
        samples.rows()));
  }
  if (samples.cols() < 1) {
    return absl::InvalidArgumentError("samples have dimension 0");
  }
  if (scale < 1) {
    return absl::InvalidArgumentError(
        absl::StrCat("scale must be positive, got ", scale));
  }
  if (!samples.allFinite()) {
    return absl::InvalidArgumentError("samples contain non-finite entries");
  }
  const double count = static_cast<double>(samples.rows());
  const Eigen::VectorXd sample_mean = samples.colwise().mean().transpose();
  const Eigen::MatrixXd centered = samples.rowwise() - sample_mean.transpose();
  Eigen::MatrixXd covariance(samples.cols(), samples.cols());
  covariance.setZero();
  covariance.selfadjointView<Eigen::Lower>().rankUpdate(
      centered.transpose(), 1.0 / (count - 1.0));
  covariance = covariance.selfadjointView<Eigen::Lower>();
  const double s = static_cast<double>(scale);
  covariance *= s;
  const double rho = shrinkage.has_value() ? *shrinkage
                                           : DefaultShrinkage(covariance);
  return NoiseModel::FromMoments(s * sample_mean, std::move(covariance), rho);
}

absl::StatusOr<double> Mahalanobis(const NoiseModel& model,
                                   const UpdateVector& a,
                                   const UpdateVector& b) {
  if (absl::Status s = CheckDim(model, a, "first vector"); !s.ok()) return s;
  if (absl::Status s = CheckDim(model, b, "second vector"); !s.ok()) return s;
  return model.WhitenUnchecked(a - b).norm();
}

absl::StatusOr<UpdateVector> Whiten(const NoiseModel& model,
                                    const UpdateVector& v) {
  if (absl::Status s = CheckDim(model, v, "vector"); !s.ok()) return s;
  return model.WhitenUnchecked(v);
}

absl::StatusOr<double> MinEigenvalue(const NoiseModel& model) {
  constexpr int kMaxIterations = 20000;
  constexpr double kRelativeTolerance = 1e-15;
  const Eigen::Index d = model.dim();
  const auto lower = model.chol_lower().triangularView<Eigen::Lower>();
  const auto upper = model.chol_lower().transpose().triangularView<Eigen::Upper>();

  // A fixed pseudo-random start avoids being orthogonal to the target
  // eigenvector for structured matrices.
  Rng rng(0x5eed);
  std::normal_distribution<double> normal;
  Eigen::VectorXd v(d);
  for (Eigen::Index i = 0; i < d; ++i) v[i] = normal(rng);
  v.normalize();

  double previous = std::numeric_limits<double>::infinity();
  for (int iter = 0; iter < kMaxIterations; ++iter) {
    // w = A^{-1} v with A = L L^T.
    Eigen::VectorXd w = upper.solve(lower.solve(v));
    const double vw = v.dot(w);
    const double norm = w.norm();
    if (!(vw > 0.0) || !std::isfinite(norm)) {
      return absl::InternalError("inverse iteration broke down");
    }
    // Rayleigh quotient of A at w / |w|, computed as |L^T w|^2 / |w|^2.
    const Eigen::VectorXd lt_w = model.chol_lower().transpose() * w;
    const double rayleigh = lt_w.squaredNorm() / (norm * norm);
    v = w / norm;
    if (std::abs(previous - rayleigh) <= kRelativeTolerance * rayleigh) {
      return rayleigh;
    }
    previous = rayleigh;
  }
  return absl::InternalError(absl::StrCat(
      "inverse iteration for the smallest eigenvalue did not converge in ",
      kMaxIterations, " iterations"));
}

absl::StatusOr<GaussianityReport> GaussianityDiagnostic(
    const UpdateMatrix& samples) {
  if (samples.rows() < kMinDiagnosticSamples) {
    return absl::InvalidArgumentError(absl::StrCat(
        "the normality diagnostic needs at least ", kMinDiagnosticSamples,
        " samples, got ", samples.rows()));
  }
  if (!samples.allFinite()) {
    return absl::InvalidArgumentError("samples contain non-finite entries");
  }
  const Eigen::Index n = samples.rows();
  const double count = static_cast<double>(n);
  GaussianityReport report;
  report.sample_count = n;
  report.coordinates.reserve(samples.cols());
  std::vector<double> z(n);
  for (Eigen::Index j = 0; j < samples.cols(); ++j) {
    CoordinateDiagnostic diag;
    const auto column = samples.col(j);
    diag.mean = column.mean();
    double m2 = 0.0;
    for (Eigen::Index i = 0; i < n; ++i) {
      const double c = column[i] - diag.mean;
      m2 += c * c;
    }
    diag.stddev = std::sqrt(m2 / (count - 1.0));
    m2 /= count;
    const double scale = std::max(1.0, std::abs(diag.mean));
    if (!(diag.stddev > 1e-13 * scale)) {
      diag.degenerate = true;
      report.any_degenerate = true;
      report.coordinates.push_back(diag);
      continue;
    }
    const double sd_pop = std::sqrt(m2);
    double m3 = 0.0;
    double m4 = 0.0;
    for (Eigen::Index i = 0; i < n; ++i) {
      const double u = (column[i] - diag.mean) / sd_pop;
      m3 += u * u * u;
      m4 += u * u * u * u;
      z[i] = (column[i] - diag.mean) / diag.stddev;
    }
    diag.skewness = m3 / count;
    diag.excess_kurtosis = m4 / count - 3.0;
    std::sort(z.begin(), z.end());
    double ks = 0.0;
    for (Eigen::Index i = 0; i < n; ++i) {
      const double cdf = StdNormalCdf(z[i]);
      ks = std::max(ks, std::max((i + 1) / count - cdf, cdf - i / count));
    }
    diag.ks_distance = ks;
    report.max_abs_skewness =
        std::max(report.max_abs_skewness, std::abs(diag.skewness));
    report.max_abs_excess_kurtosis = std::max(
        report.max_abs_excess_kurtosis, std::abs(diag.excess_kurtosis));
    report.max_ks_distance = std::max(report.max_ks_distance, ks);
    report.coordinates.push_back(diag);
  }
  return report;
}

}  // namespace secagg_audit
