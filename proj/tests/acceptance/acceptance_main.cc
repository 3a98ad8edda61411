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

// Acceptance suite: one PASS/FAIL line per criterion, nonzero exit if any
// criterion fails. Oracles here are computed independently of the library
// wherever the criterion allows it.

#include <algorithm>
#include <chrono>
#include <cmath>
#include <cstdint>
#include <cstdio>
#include <functional>
#include <limits>
#include <random>
#include <string>
#include <utility>
#include <vector>

#include "Eigen/Cholesky"
#include "Eigen/Core"
#include "absl/status/status.h"
#include "absl/status/statusor.h"
#include "absl/strings/str_format.h"
#include "secagg_audit/auditor.h"
#include "secagg_audit/curves.h"
#include "secagg_audit/dataset.h"
#include "secagg_audit/fl_sim.h"
#include "secagg_audit/gaussian_mechanism.h"
#include "secagg_audit/linalg_stats.h"
#include "secagg_audit/plrv_accounting.h"
#include "secagg_audit/special_functions.h"

namespace secagg_audit {
namespace {

constexpr double kInf = std::numeric_limits<double>::infinity();

struct Verdict {
  bool pass = false;
  std::string detail;
};

Verdict Fail(const absl::Status& status) { return {false, status.ToString()}; }

template <typename T>
T Unwrap(absl::StatusOr<T> value, absl::Status* error) {
  if (!value.ok()) {
    if (error->ok()) *error = value.status();
    return T{};
  }
  return *std::move(value);
}

// ------------------------------------------------------------------- AC1

Verdict GaussianCurveMatchesMonteCarlo() {
  constexpr int64_t kSamples = 10'000'000;
  Eigen::Matrix2d cov;
  cov << 2.0, 1.2, 1.2, 1.0;
  const Eigen::Matrix2d chol = cov.llt().matrixL();
  const Eigen::Matrix2d precision = cov.inverse();
  // The worst-case direction of an l2 ball is the least-variance eigenvector;
  // any direction works for a fixed Mahalanobis length.
  const Eigen::Vector2d direction(0.6, -1.0);
  const double unit_length = std::sqrt(direction.dot(precision * direction));
  const std::vector<double> epsilons = {0.0, 1.0, 2.0, 5.0};

  double worst_z = 0.0;
  std::string worst_at;
  bool pass = true;
  std::mt19937_64 rng(20260101);
  std::normal_distribution<double> normal;
  for (double sens : {0.5, 1.0, 2.0, 5.0}) {
    const Eigen::Vector2d x0(0.3, -0.7);
    const Eigen::Vector2d x1 = x0 + direction * (sens / unit_length);
    std::vector<double> sum(epsilons.size(), 0.0), sum_sq(epsilons.size(), 0.0);
    for (int64_t s = 0; s < kSamples; ++s) {
      const Eigen::Vector2d g(normal(rng), normal(rng));
      const Eigen::Vector2d z = x0 + chol * g;
      const Eigen::Vector2d r0 = z - x0;
      const Eigen::Vector2d r1 = z - x1;
      const double loss =
          0.5 * (r1.dot(precision * r1) - r0.dot(precision * r0));
      for (size_t e = 0; e < epsilons.size(); ++e) {
        const double v = std::max(0.0, 1.0 - std::exp(epsilons[e] - loss));
        sum[e] += v;
        sum_sq[e] += v * v;
      }
    }
    for (size_t e = 0; e < epsilons.size(); ++e) {
      const double n = static_cast<double>(kSamples);
      const double mean = sum[e] / n;
      const double var = std::max(0.0, sum_sq[e] / n - mean * mean);
      const double se = std::sqrt(var / (n - 1.0));
      const double gap = std::abs(GaussianDelta(epsilons[e], sens) - mean);
      if (gap > 3.0 * se + 1e-15) pass = false;
      const double z = se > 0.0 ? gap / se : (gap > 1e-15 ? kInf : 0.0);
      if (z > worst_z) {
        worst_z = z;
        worst_at = absl::StrFormat("eps=%g sens=%g", epsilons[e], sens);
      }
    }
  }
  return {pass, absl::StrFormat("16 points, 1e7 samples each, worst %.2f SE at %s",
                                worst_z, worst_at)};
}

// ------------------------------------------------------------- AC2, AC3

Verdict ReferenceCaseMatchesSurrogate(ReferenceCase which, int n,
                                      const std::vector<int>& dims,
                                      double tolerance) {
  absl::Status error;
  const std::vector<double> grid = Unwrap(UniformEpsilonGrid(10.0, 201), &error);
  if (!error.ok()) return Fail(error);
  std::vector<LdpCurve> curves;
  std::string gaps;
  bool pass = true;
  for (int d : dims) {
    const LdpCurve plrv = Unwrap(ReferenceCaseCurve(which, n, d, grid), &error);
    const double sens = Unwrap(ReferenceCaseGaussianSensitivity(which, n, d), &error);
    const LdpCurve gauss = Unwrap(GaussianLdpCurve(sens, grid), &error);
    if (!error.ok()) return Fail(error);
    double gap = 0.0;
    for (size_t i = 0; i < grid.size(); ++i) {
      gap = std::max(gap, std::abs(plrv.points[i].delta - gauss.points[i].delta));
    }
    if (!(gap <= tolerance)) pass = false;
    gaps += absl::StrFormat("%sd=%d gap %.4f", gaps.empty() ? "" : ", ", d, gap);
    curves.push_back(plrv);
  }
  // Strict growth in d wherever the curves are not numerically zero.
  int compared = 0;
  for (size_t k = 1; k < curves.size(); ++k) {
    for (size_t i = 0; i < grid.size(); ++i) {
      const double lower = curves[k - 1].points[i].delta;
      const double upper = curves[k].points[i].delta;
      if (upper < 1e-12) continue;
      ++compared;
      if (!(upper > lower)) {
        pass = false;
        gaps += absl::StrFormat("; not increasing at eps=%g", grid[i]);
        break;
      }
    }
  }
  gaps += absl::StrFormat("; delta(eps) increasing in d at %d grid points", compared);
  return {pass, gaps};
}

// ------------------------------------------------------------------- AC4

Verdict AuditabilityFloor() {
  absl::Status error;
  const double floor = Unwrap(ClopperPearsonUpper(0, 5000, 0.05), &error);
  const double cap = Unwrap(MaxAuditableEpsilon(0.0, 5000, 0.05), &error);
  if (!error.ok()) return Fail(error);
  const double closed_form = 1.0 - std::pow(0.025, 1.0 / 5000.0);
  const bool pass = std::abs(floor - 7.37504e-4) <= 1e-9 &&
                    std::abs(floor - closed_form) <= 1e-15 &&
                    std::abs(cap - 7.2116) <= 1e-3;
  return {pass, absl::StrFormat("floor %.9g (closed form %.9g), eps cap %.6f",
                                floor, closed_form, cap)};
}

// ------------------------------------------------------------------- AC5

// Lower convex hull of {(P(S), 1 - Q(S))} over all subsets S of the support,
// enumerated in Gray-code order. The running sums are recomputed every 1024
// steps so drift stays far below the comparison tolerance.
class EnumeratedTradeoff {
 public:
  EnumeratedTradeoff(const std::vector<double>& p, const std::vector<double>& q) {
    const size_t m = p.size();
    std::vector<std::pair<double, double>> points;
    points.reserve(size_t{1} << m);
    points.emplace_back(0.0, 1.0);
    std::vector<bool> in(m, false);
    double alpha = 0.0, q_in = 0.0;
    for (uint64_t g = 1; g < (uint64_t{1} << m); ++g) {
      const size_t bit = static_cast<size_t>(__builtin_ctzll(g));
      in[bit] = !in[bit];
      if ((g & 1023) == 0) {
        alpha = q_in = 0.0;
        for (size_t i = 0; i < m; ++i) {
          if (in[i]) {
            alpha += p[i];
            q_in += q[i];
          }
        }
      } else {
        const double sign = in[bit] ? 1.0 : -1.0;
        alpha += sign * p[bit];
        q_in += sign * q[bit];
      }
      points.emplace_back(alpha, 1.0 - q_in);
    }
    std::sort(points.begin(), points.end());
    for (const auto& pt : points) {
      if (!hull_.empty() && pt.first == hull_.back().first) continue;
      while (hull_.size() >= 2) {
        const auto& a = hull_[hull_.size() - 2];
        const auto& b = hull_.back();
        const double cross = (b.first - a.first) * (pt.second - a.second) -
                             (b.second - a.second) * (pt.first - a.first);
        if (cross > 0.0) break;
        hull_.pop_back();
      }
      hull_.push_back(pt);
    }
    const auto lowest = std::min_element(
        hull_.begin(), hull_.end(),
        [](const auto& a, const auto& b) { return a.second < b.second; });
    hull_.erase(lowest + 1, hull_.end());
  }

  double operator()(double alpha) const {
    if (alpha <= hull_.front().first) return hull_.front().second;
    for (size_t i = 1; i < hull_.size(); ++i) {
      if (alpha <= hull_[i].first) {
        const auto& a = hull_[i - 1];
        const auto& b = hull_[i];
        return a.second + (b.second - a.second) * (alpha - a.first) / (b.first - a.first);
      }
    }
    return hull_.back().second;
  }

 private:
  std::vector<std::pair<double, double>> hull_;
};

Verdict HockeyStickTradeoffIdentity() {
  std::mt19937_64 rng(55);
  std::uniform_int_distribution<int> support(2, 20);
  std::gamma_distribution<double> weight(0.6);
  std::bernoulli_distribution zero(0.1);
  double worst = 0.0;
  for (int trial = 0; trial < 100; ++trial) {
    const size_t m = static_cast<size_t>(support(rng));
    std::vector<double> p(m), q(m);
    double p_sum = 0.0, q_sum = 0.0;
    for (size_t i = 0; i < m; ++i) {
      p[i] = zero(rng) ? 0.0 : weight(rng) + 1e-4;
      q[i] = zero(rng) ? 0.0 : weight(rng) + 1e-4;
      p_sum += p[i];
      q_sum += q[i];
    }
    if (p_sum == 0.0 || q_sum == 0.0) {
      p[0] = q[m - 1] = 1.0;
      p_sum = std::max(p_sum, 1.0);
      q_sum = std::max(q_sum, 1.0);
    }
    for (size_t i = 0; i < m; ++i) {
      p[i] /= p_sum;
      q[i] /= q_sum;
    }
    const EnumeratedTradeoff tradeoff(p, q);
    for (double eps : {0.0, 0.5, 1.0, 3.0}) {
      const absl::StatusOr<double> direct = HockeyStickDiscrete(p, q, eps);
      if (!direct.ok()) return Fail(direct.status());
      // F_P(-eps) = P(ln(q/p) <= -eps) = P(ln(p/q) >= eps).
      double f = 0.0;
      for (size_t i = 0; i < m; ++i) {
        if (p[i] == 0.0) continue;
        const double loss = q[i] == 0.0 ? kInf : std::log(p[i] / q[i]);
        if (loss >= eps) f += p[i];
      }
      const double via_tradeoff = f - std::exp(eps) * tradeoff(1.0 - f);
      worst = std::max(worst, std::abs(*direct - via_tradeoff));
    }
  }
  return {worst <= 1e-12,
          absl::StrFormat("100 pairs x 4 eps, max |difference| %.3g", worst)};
}

// ------------------------------------------------------------------- AC6

Eigen::MatrixXd RandomCovariance(int d, std::mt19937_64& rng) {
  std::normal_distribution<double> normal;
  Eigen::MatrixXd a(d, d);
  for (int i = 0; i < d; ++i) {
    for (int j = 0; j < d; ++j) a(i, j) = normal(rng);
  }
  return a * a.transpose() / d + 0.1 * Eigen::MatrixXd::Identity(d, d);
}

// Three-sigma delta-method slack on ln((1 - delta - a) / b) for binomial
// rate estimates a and b.
double EpsilonSlack(double fpr, double fnr, double delta, int64_t n0, int64_t n1) {
  const auto slack = [&](double num_rate, int64_t num_n, double den_rate, int64_t den_n) {
    const double num = 1.0 - delta - num_rate;
    if (num <= 0.0) return 0.0;
    const double s_num = std::sqrt(num_rate * (1 - num_rate) / num_n) / num;
    const double s_den = std::sqrt(den_rate * (1 - den_rate) / den_n) / den_rate;
    return 3.0 * std::hypot(s_num, s_den);
  };
  return std::max(slack(fpr, n0, fnr, n1), slack(fnr, n1, fpr, n0));
}

Verdict AuditorIsSound() {
  constexpr int kDim = 20;
  std::mt19937_64 rng(66);
  std::uniform_real_distribution<double> coord(-1.0, 1.0);
  bool pass = true;
  std::string detail;
  for (double sens : {1.0, 3.0}) {
    absl::Status error;
    const absl::StatusOr<NoiseModel> built =
        NoiseModel::FromMoments(Eigen::VectorXd::Zero(kDim), RandomCovariance(kDim, rng), 0.0);
    if (!built.ok()) return Fail(built.status());
    const NoiseModel& noise = *built;
    Eigen::VectorXd x0(kDim), dir(kDim);
    for (int i = 0; i < kDim; ++i) {
      x0(i) = coord(rng);
      dir(i) = coord(rng);
    }
    const double length = Unwrap(Mahalanobis(noise, Eigen::VectorXd::Zero(kDim), dir), &error);
    if (!error.ok()) return Fail(error);
    const Eigen::VectorXd x1 = x0 + dir * (sens / length);
    AuditConfig cfg;
    cfg.trials = 10'000;
    cfg.seed = 606;
    cfg.deltas = {0.1, 0.01};
    const AuditReport report = Unwrap(AuditGaussianMechanism(x0, x1, noise, cfg), &error);
    if (!error.ok()) return Fail(error);
    for (const EpsilonResult& e : report.epsilons) {
      const double truth = Unwrap(GaussianEpsilonForDelta(e.delta, sens), &error);
      if (!error.ok()) return Fail(error);
      double slack = 0.0;
      for (const ThresholdResult& t : report.thresholds) {
        if (t.threshold == e.best_threshold) {
          slack = EpsilonSlack(t.fpr_upper, t.fnr_upper, e.delta, report.null_trials,
                               report.alternative_trials);
          break;
        }
      }
      if (e.epsilon_audited > truth + slack) pass = false;
      detail += absl::StrFormat("%ssens=%g delta=%g audited %.3f <= %.3f + %.3f",
                                detail.empty() ? "" : "; ", sens, e.delta,
                                e.epsilon_audited, truth, slack);
    }
    int below = 0;
    for (const ThresholdResult& t : report.thresholds) {
      const double sigma = std::sqrt(t.fnr_upper * (1 - t.fnr_upper) /
                                     static_cast<double>(report.alternative_trials));
      if (t.fnr_upper < GaussianTradeoff(t.fpr_upper, sens) - 3.0 * sigma) ++below;
    }
    if (below > 0) pass = false;
    detail += absl::StrFormat("; %d of %d curve points below the optimal curve", below,
                              static_cast<int>(report.thresholds.size()));
  }
  return {pass, detail};
}

// ------------------------------------------------------------------- AC7

struct FederatedAudit {
  double min_max_error = 1.0;
  bool both_small = false;
  double epsilon_at_tenth = 0.0;
};

absl::StatusOr<FederatedAudit> RunFederatedAudit(int features) {
  constexpr int kClasses = 2;
  absl::StatusOr<Dataset> ds = SynthDataset(kClasses, features, 15000, 1.0, 11);
  if (!ds.ok()) return ds.status();
  const GlobalModel model = GlobalModel::RandomNormal(kClasses, features, 0.01, 11);
  RoundConfig round;
  round.partition.clients = 60;
  round.train.learning_rate = 0.01;
  round.train.batch_size = 64;
  AuditConfig cfg;
  cfg.trials = 1000;
  cfg.population_samples = 2000;
  cfg.pair_search_samples = 500;
  cfg.seed = 3;
  cfg.deltas = {0.1};
  absl::StatusOr<AuditReport> report = FullAudit(*ds, model, round, cfg);
  if (!report.ok()) return report.status();
  FederatedAudit out;
  for (const ThresholdResult& t : report->thresholds) {
    out.min_max_error = std::min(out.min_max_error, std::max(t.fpr_upper, t.fnr_upper));
  }
  out.both_small = out.min_max_error <= 0.05;
  out.epsilon_at_tenth = report->epsilons.front().epsilon_audited;
  return out;
}

Verdict EndToEndFederatedAudit() {
  std::string detail;
  bool pass = true;
  double previous = -kInf;
  // 2 classes: model dimension 2F + 2 gives 10, 50 and 210.
  for (int features : {4, 24, 104}) {
    absl::StatusOr<FederatedAudit> audit = RunFederatedAudit(features);
    if (!audit.ok()) return Fail(audit.status());
    const int64_t dim = ModelDim(2, features);
    detail += absl::StrFormat("%sd=%d eps(0.1)=%.3f", detail.empty() ? "" : ", ", dim,
                              audit->epsilon_at_tenth);
    if (audit->epsilon_at_tenth < previous) pass = false;
    previous = audit->epsilon_at_tenth;
    if (features == 104) {
      pass = pass && audit->both_small && audit->epsilon_at_tenth > 3.0;
      detail += absl::StrFormat(" min max(FPR,FNR) bound %.4f", audit->min_max_error);
    }
  }
  return {pass, detail};
}

// ------------------------------------------------------------------- AC8

Verdict UniformSumsLookGaussian() {
  constexpr int64_t kTerms = 2000;
  constexpr int kDim = 3;
  constexpr int64_t kReplicas = 10'000;
  std::mt19937_64 rng(88);
  std::uniform_real_distribution<double> unit(-0.5, 0.5);
  const double scale = 1.0 / std::sqrt(static_cast<double>(kTerms) / 12.0);
  UpdateMatrix sums(kReplicas, kDim);
  for (int64_t r = 0; r < kReplicas; ++r) {
    for (int j = 0; j < kDim; ++j) {
      double total = 0.0;
      for (int64_t t = 0; t < kTerms; ++t) total += unit(rng);
      sums(r, j) = total * scale;
    }
  }
  const absl::StatusOr<GaussianityReport> report = GaussianityDiagnostic(sums);
  if (!report.ok()) return Fail(report.status());
  const bool pass = !report->any_degenerate && report->max_abs_skewness < 0.1 &&
                    report->max_abs_excess_kurtosis < 0.2 && report->max_ks_distance < 0.02;
  return {pass, absl::StrFormat("max |skew| %.4f, max |excess kurtosis| %.4f, max KS %.4f",
                                report->max_abs_skewness, report->max_abs_excess_kurtosis,
                                report->max_ks_distance)};
}

// ------------------------------------------------------------------- AC9

Verdict GradientMatchesFiniteDifferences() {
  std::mt19937_64 rng(99);
  std::uniform_int_distribution<int> classes_dist(2, 5), features_dist(1, 6), rows_dist(1, 30);
  std::normal_distribution<double> normal;
  double worst = 0.0;
  for (int instance = 0; instance < 50; ++instance) {
    const int classes = classes_dist(rng);
    const int features = features_dist(rng);
    const int rows = rows_dist(rng);
    Dataset ds;
    ds.num_classes = classes;
    ds.features.resize(rows, features);
    std::uniform_int_distribution<int> label(0, classes - 1);
    for (int r = 0; r < rows; ++r) {
      for (int f = 0; f < features; ++f) ds.features(r, f) = normal(rng);
      ds.labels.push_back(label(rng));
    }
    GlobalModel model = GlobalModel::Zeros(classes, features);
    for (int64_t i = 0; i < model.dim(); ++i) model.weights(i) = normal(rng);
    std::vector<int64_t> shard(static_cast<size_t>(rows));
    for (int r = 0; r < rows; ++r) shard[static_cast<size_t>(r)] = r;

    // One full-batch SGD step recovers the gradient used by local training.
    TrainConfig train;
    train.learning_rate = 1e-2;
    train.batch_size = rows;
    train.epochs = 1;
    absl::StatusOr<UpdateVector> update = LocalUpdate(model, ds, shard, train);
    if (!update.ok()) return Fail(update.status());
    const Eigen::VectorXd analytic = -*update / train.learning_rate;

    Eigen::VectorXd numeric(model.dim());
    constexpr double kStep = 1e-5;
    for (int64_t i = 0; i < model.dim(); ++i) {
      Eigen::VectorXd plus = model.weights, minus = model.weights;
      plus(i) += kStep;
      minus(i) -= kStep;
      const absl::StatusOr<double> up = SoftmaxCrossEntropy(plus, classes, ds, shard, nullptr);
      const absl::StatusOr<double> down =
          SoftmaxCrossEntropy(minus, classes, ds, shard, nullptr);
      if (!up.ok()) return Fail(up.status());
      if (!down.ok()) return Fail(down.status());
      numeric(i) = (*up - *down) / (2.0 * kStep);
    }
    const double relative = (analytic - numeric).norm() / std::max(numeric.norm(), 1e-300);
    worst = std::max(worst, relative);
  }
  return {worst <= 1e-5, absl::StrFormat("50 instances, max relative error %.3g", worst)};
}

// ------------------------------------------------------------------ AC10

Verdict SensitivityRespectsLowerBound() {
  std::mt19937_64 rng(1010);
  std::uniform_int_distribution<int> dim_dist(1, 30);
  std::uniform_int_distribution<int> n_dist(2, 5000);
  std::normal_distribution<double> normal;
  std::uniform_real_distribution<double> row_norm(0.2, 2.0);
  double tightest = kInf;
  int cases = 0;
  while (cases < 50) {
    const int d = dim_dist(rng);
    const int n = n_dist(rng);
    // Updates x = A u with u uniform on [-1/2, 1/2]^d. Every row of A has
    // l1 norm at most 2, so |x_i| <= 1 and |x| <= sqrt(d).
    Eigen::MatrixXd a(d, d);
    for (int i = 0; i < d; ++i) {
      for (int j = 0; j < d; ++j) a(i, j) = normal(rng);
      a.row(i) *= row_norm(rng) / a.row(i).lpNorm<1>();
    }
    const Eigen::MatrixXd cov = static_cast<double>(n) * a * a.transpose() / 12.0;
    const absl::StatusOr<NoiseModel> model =
        NoiseModel::FromMoments(Eigen::VectorXd::Zero(d), cov, 0.0);
    if (!model.ok()) continue;  // singular draw
    const absl::StatusOr<double> sens = L2BallSensitivity(1.0, d, *model);
    if (!sens.ok()) continue;
    ++cases;
    const double bound = SensitivityLowerBound(d, n);
    if (!(*sens >= bound)) {
      return {false, absl::StrFormat("d=%d n=%d: %.6g < %.6g", d, n, *sens, bound)};
    }
    tightest = std::min(tightest, *sens / bound);
  }
  return {true, absl::StrFormat("50 cases, smallest ratio to the bound %.4f", tightest)};
}

// ----------------------------------------------------------------- driver

struct Criterion {
  const char* id;
  const char* name;
  double time_limit_seconds;  // 0 means no limit
  std::function<Verdict()> run;
};

}  // namespace
}  // namespace secagg_audit

int main() {
  using secagg_audit::Criterion;
  using secagg_audit::ReferenceCase;
  using secagg_audit::Verdict;
  const std::vector<Criterion> criteria = {
      {"AC1", "Gaussian curve vs Monte-Carlo hockey-stick", 60.0,
       secagg_audit::GaussianCurveMatchesMonteCarlo},
      {"AC2", "uniform n=20 optimal curve vs Gaussian surrogate", 300.0,
       [] {
         return secagg_audit::ReferenceCaseMatchesSurrogate(ReferenceCase::kUniform, 20,
                                                            {10, 20, 40}, 0.02);
       }},
      {"AC3", "exponential n=300 optimal curve vs Gaussian surrogate", 300.0,
       [] {
         return secagg_audit::ReferenceCaseMatchesSurrogate(ReferenceCase::kExponential,
                                                            300, {100, 200}, 0.03);
       }},
      {"AC4", "auditability floor and epsilon cap", 0.0, secagg_audit::AuditabilityFloor},
      {"AC5", "hockey-stick via trade-off function", 0.0,
       secagg_audit::HockeyStickTradeoffIdentity},
      {"AC6", "auditor soundness on a known Gaussian mechanism", 120.0,
       secagg_audit::AuditorIsSound},
      {"AC7", "end-to-end federated audit", 900.0, secagg_audit::EndToEndFederatedAudit},
      {"AC8", "Gaussianity of uniform update sums", 0.0,
       secagg_audit::UniformSumsLookGaussian},
      {"AC9", "local update gradient vs finite differences", 0.0,
       secagg_audit::GradientMatchesFiniteDifferences},
      {"AC10", "l2-ball sensitivity lower bound", 0.0,
       secagg_audit::SensitivityRespectsLowerBound},
  };
  int failures = 0;
  for (const Criterion& c : criteria) {
    const auto start = std::chrono::steady_clock::now();
    Verdict verdict = c.run();
    const double seconds =
        std::chrono::duration<double>(std::chrono::steady_clock::now() - start).count();
    if (c.time_limit_seconds > 0.0 && seconds > c.time_limit_seconds) {
      verdict.pass = false;
      verdict.detail += absl::StrFormat("; exceeded %.0f s", c.time_limit_seconds);
    }
    if (!verdict.pass) ++failures;
    std::printf("%s %s: %s (%s) [%.1f s]\n", c.id, verdict.pass ? "PASS" : "FAIL", c.name,
                verdict.detail.c_str(), seconds);
    std::fflush(stdout);
  }
  std::printf("%d of %zu criteria passed\n", static_cast<int>(criteria.size()) - failures,
              criteria.size());
  return failures == 0 ? 0 : 1;
}
