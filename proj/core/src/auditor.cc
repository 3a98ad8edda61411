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

#include "secagg_audit/auditor.h"

#include <algorithm>
#include <cmath>
#include <limits>
#include <random>

#include "absl/strings/str_cat.h"
#include "secagg_audit/gaussian_mechanism.h"
#include "secagg_audit/special_functions.h"
#include "secagg_audit/status_macros.h"

namespace secagg_audit {
namespace {

Hypothesis HypothesisForTrial(int64_t t) {
  return t % 2 == 0 ? Hypothesis::kNull : Hypothesis::kAlternative;
}

// Linear-interpolation quantile of sorted values.
double SortedQuantile(const std::vector<double>& sorted, double level) {
  const double pos = level * static_cast<double>(sorted.size() - 1);
  const size_t lo = static_cast<size_t>(std::floor(pos));
  if (lo + 1 >= sorted.size()) return sorted.back();
  const double frac = pos - static_cast<double>(lo);
  return sorted[lo] + frac * (sorted[lo + 1] - sorted[lo]);
}

absl::StatusOr<double> UpperBoundOrOne(int64_t failures, int64_t trials,
                                       double gamma) {
  // With no trials of a hypothesis nothing is known about its error rate.
  if (trials == 0) return 1.0;
  return ClopperPearsonUpper(failures, trials, gamma);
}

}  // namespace

absl::StatusOr<WorstCasePair> FindWorstCasePair(const UpdateMatrix& candidates,
                                                const NoiseModel& model) {
  const Eigen::Index m = candidates.rows();
  if (m < 2) {
    return absl::InvalidArgumentError(absl::StrCat(
        "worst-case pair search needs at least 2 candidates, got ", m));
  }
  ASSIGN_OR_RETURN(const UpdateMatrix whitened, model.WhitenRows(candidates));
  // Column i is the whitened candidate i, contiguous in memory.
  const Eigen::MatrixXd columns = whitened.transpose();
  double best = -1.0;
  Eigen::Index best_i = 0;
  Eigen::Index best_j = 1;
  for (Eigen::Index i = 0; i < m; ++i) {
    const auto ci = columns.col(i);
    for (Eigen::Index j = i + 1; j < m; ++j) {
      const double dist2 = (ci - columns.col(j)).squaredNorm();
      if (dist2 > best) {
        best = dist2;
        best_i = i;
        best_j = j;
      }
    }
  }
  WorstCasePair pair;
  pair.first = candidates.row(best_i).transpose();
  pair.second = candidates.row(best_j).transpose();
  pair.first_index = best_i;
  pair.second_index = best_j;
  pair.sensitivity = std::sqrt(std::max(0.0, best));
  pair.degenerate = pair.sensitivity == 0.0;
  return pair;
}

absl::StatusOr<LlrTest> LlrTest::Create(const UpdateVector& x0,
                                        const UpdateVector& x0_prime,
                                        const NoiseModel& model) {
  ASSIGN_OR_RETURN(Eigen::VectorXd w_null, Whiten(model, x0 + model.mean()));
  if (x0_prime.size() != x0.size()) {
    return absl::InvalidArgumentError(absl::StrCat(
        "pair members differ in dimension: ", x0.size(), " vs ",
        x0_prime.size()));
  }
  ASSIGN_OR_RETURN(Eigen::VectorXd w_alt,
                   Whiten(model, x0_prime + model.mean()));
  return LlrTest(model, std::move(w_null), std::move(w_alt));
}

double LlrTest::Evaluate(const UpdateVector& z) const {
  const Eigen::VectorXd wz = model_.WhitenUnchecked(z);
  return 0.5 * ((wz - w_alt_).squaredNorm() - (wz - w_null_).squaredNorm());
}

absl::StatusOr<double> LlrStatistic(const UpdateVector& z,
                                    const UpdateVector& x0,
                                    const UpdateVector& x0_prime,
                                    const NoiseModel& model) {
  ASSIGN_OR_RETURN(LlrTest test, LlrTest::Create(x0, x0_prime, model));
  if (z.size() != model.dim()) {
    return absl::InvalidArgumentError(absl::StrCat(
        "observation has dimension ", z.size(), ", expected ", model.dim()));
  }
  return test.Evaluate(z);
}

absl::Status ValidateAuditConfig(const AuditConfig& cfg) {
  if (cfg.trials < 1) {
    return absl::InvalidArgumentError(
        absl::StrCat("trials must be >= 1, got ", cfg.trials));
  }
  if (!(cfg.gamma > 0.0 && cfg.gamma < 1.0)) {
    return absl::InvalidArgumentError(
        absl::StrCat("gamma must lie in (0, 1), got ", cfg.gamma));
  }
  for (double delta : cfg.deltas) {
    if (!(delta >= 0.0 && delta < 1.0)) {
      return absl::InvalidArgumentError(
          absl::StrCat("delta must lie in [0, 1), got ", delta));
    }
  }
  if (cfg.threshold_levels < 1) {
    return absl::InvalidArgumentError(absl::StrCat(
        "threshold_levels must be >= 1, got ", cfg.threshold_levels));
  }
  if (cfg.pilot_trials < 0) {
    return absl::InvalidArgumentError(
        absl::StrCat("pilot_trials must be >= 0, got ", cfg.pilot_trials));
  }
  if (cfg.population_samples < 2 || cfg.pair_search_samples < 2) {
    return absl::InvalidArgumentError(absl::StrCat(
        "population_samples and pair_search_samples must be >= 2, got ",
        cfg.population_samples, " and ", cfg.pair_search_samples));
  }
  return absl::OkStatus();
}

int64_t NullTrials(const AuditConfig& cfg) {
  return cfg.split == TrialSplit::kHalfPerHypothesis ? (cfg.trials + 1) / 2
                                                     : cfg.trials;
}

int64_t AlternativeTrials(const AuditConfig& cfg) {
  return cfg.split == TrialSplit::kHalfPerHypothesis ? cfg.trials / 2
                                                     : cfg.trials;
}

absl::StatusOr<std::vector<double>> PilotThresholds(
    const MechanismSampler& sampler, const LlrTest& test,
    const AuditConfig& cfg) {
  RETURN_IF_ERROR(ValidateAuditConfig(cfg));
  const int64_t pilot = cfg.pilot_trials > 0
                            ? cfg.pilot_trials
                            : std::max<int64_t>(100, cfg.trials / 10);
  std::vector<double> stats;
  stats.reserve(pilot);
  for (int64_t t = 0; t < pilot; ++t) {
    Rng rng = MakeRng(cfg.seed, Stream::kPilot, static_cast<uint64_t>(t));
    ASSIGN_OR_RETURN(UpdateVector z, sampler(HypothesisForTrial(t), rng));
    if (z.size() != test.model().dim()) {
      return absl::InvalidArgumentError(absl::StrCat(
          "sampler produced dimension ", z.size(), ", expected ",
          test.model().dim()));
    }
    stats.push_back(test.Evaluate(z));
  }
  std::sort(stats.begin(), stats.end());
  std::vector<double> thresholds(cfg.threshold_levels);
  for (int k = 0; k < cfg.threshold_levels; ++k) {
    const double level =
        cfg.threshold_levels == 1
            ? 0.5
            : static_cast<double>(k) / (cfg.threshold_levels - 1);
    thresholds[k] = SortedQuantile(stats, level);
  }
  return thresholds;
}

absl::StatusOr<AuditCounts> RunAudit(
    const MechanismSampler& sampler, const LlrTest& test,
    const AuditConfig& cfg,
    const std::optional<std::vector<double>>& thresholds) {
  RETURN_IF_ERROR(ValidateAuditConfig(cfg));
  AuditCounts counts;
  if (thresholds.has_value()) {
    if (thresholds->empty()) {
      return absl::InvalidArgumentError("threshold grid is empty");
    }
    counts.thresholds = *thresholds;
  } else {
    ASSIGN_OR_RETURN(counts.thresholds, PilotThresholds(sampler, test, cfg));
  }
  counts.null_trials = NullTrials(cfg);
  counts.alternative_trials = AlternativeTrials(cfg);
  const int64_t total = counts.null_trials + counts.alternative_trials;

  std::vector<double> null_stats;
  std::vector<double> alt_stats;
  null_stats.reserve(counts.null_trials);
  alt_stats.reserve(counts.alternative_trials);
  for (int64_t t = 0; t < total; ++t) {
    const Hypothesis h = HypothesisForTrial(t);
    Rng rng = MakeRng(cfg.seed, Stream::kTrials, static_cast<uint64_t>(t));
    ASSIGN_OR_RETURN(UpdateVector z, sampler(h, rng));
    if (z.size() != test.model().dim()) {
      return absl::InvalidArgumentError(absl::StrCat(
          "sampler produced dimension ", z.size(), ", expected ",
          test.model().dim()));
    }
    (h == Hypothesis::kNull ? null_stats : alt_stats).push_back(
        test.Evaluate(z));
  }
  std::sort(null_stats.begin(), null_stats.end());
  std::sort(alt_stats.begin(), alt_stats.end());
  for (double theta : counts.thresholds) {
    const int64_t fp =
        std::upper_bound(null_stats.begin(), null_stats.end(), theta) -
        null_stats.begin();
    const int64_t alt_at_or_below =
        std::upper_bound(alt_stats.begin(), alt_stats.end(), theta) -
        alt_stats.begin();
    counts.false_positives.push_back(fp);
    counts.false_negatives.push_back(
        static_cast<int64_t>(alt_stats.size()) - alt_at_or_below);
  }
  return counts;
}

absl::StatusOr<TradeoffCurve> ConfidenceTradeoff(const AuditCounts& counts,
                                                 double gamma) {
  if (counts.false_positives.size() != counts.thresholds.size() ||
      counts.false_negatives.size() != counts.thresholds.size()) {
    return absl::InvalidArgumentError("count vectors do not match thresholds");
  }
  TradeoffCurve curve;
  for (size_t k = 0; k < counts.thresholds.size(); ++k) {
    ASSIGN_OR_RETURN(const double fpr,
                     UpperBoundOrOne(counts.false_positives[k],
                                     counts.null_trials, gamma));
    ASSIGN_OR_RETURN(const double fnr,
                     UpperBoundOrOne(counts.false_negatives[k],
                                     counts.alternative_trials, gamma));
    curve.points.push_back({counts.thresholds[k], fpr, fnr});
  }
  return curve;
}

absl::StatusOr<double> AuditedEpsilon(double fpr_upper, double fnr_upper,
                                      double delta) {
  if (!(fpr_upper > 0.0 && fpr_upper <= 1.0) ||
      !(fnr_upper > 0.0 && fnr_upper <= 1.0)) {
    return absl::InvalidArgumentError(absl::StrCat(
        "error-rate bounds must lie in (0, 1], got ", fpr_upper, " and ",
        fnr_upper));
  }
  if (!(delta >= 0.0 && delta < 1.0)) {
    return absl::InvalidArgumentError(
        absl::StrCat("delta must lie in [0, 1), got ", delta));
  }
  const double a = 1.0 - delta - fpr_upper;
  const double b = 1.0 - delta - fnr_upper;
  if (a <= 0.0 && b <= 0.0) {
    return absl::FailedPreconditionError(absl::StrCat(
        "error rates (", fpr_upper, ", ", fnr_upper,
        ") are too large to certify anything at delta ", delta));
  }
  const double ratio = std::max(a / fnr_upper, b / fpr_upper);
  return std::max(0.0, std::log(ratio));
}

absl::StatusOr<double> MaxAuditableEpsilon(double delta,
                                           int64_t trials_per_hypothesis,
                                           double gamma) {
  if (!(delta >= 0.0 && delta < 1.0)) {
    return absl::InvalidArgumentError(
        absl::StrCat("delta must lie in [0, 1), got ", delta));
  }
  ASSIGN_OR_RETURN(const double floor,
                   ClopperPearsonUpper(0, trials_per_hypothesis, gamma));
  const double numerator = 1.0 - delta - floor;
  if (numerator <= 0.0) return -std::numeric_limits<double>::infinity();
  return std::log(numerator / floor);
}

TradeoffCurve AuditReport::Curve() const {
  TradeoffCurve curve;
  for (const ThresholdResult& t : thresholds) {
    curve.points.push_back({t.threshold, t.fpr_upper, t.fnr_upper});
  }
  return curve;
}

absl::StatusOr<AuditReport> SummarizeAudit(const AuditCounts& counts,
                                           const AuditConfig& cfg) {
  RETURN_IF_ERROR(ValidateAuditConfig(cfg));
  ASSIGN_OR_RETURN(const TradeoffCurve curve,
                   ConfidenceTradeoff(counts, cfg.gamma));
  AuditReport report;
  report.seed = cfg.seed;
  report.gamma = cfg.gamma;
  report.null_trials = counts.null_trials;
  report.alternative_trials = counts.alternative_trials;
  for (size_t k = 0; k < curve.points.size(); ++k) {
    report.thresholds.push_back({counts.thresholds[k],
                                 counts.false_positives[k],
                                 counts.false_negatives[k],
                                 curve.points[k].fpr, curve.points[k].fnr});
  }
  const int64_t cap_trials =
      std::max(counts.null_trials, counts.alternative_trials);
  for (double delta : cfg.deltas) {
    EpsilonResult result;
    result.delta = delta;
    ASSIGN_OR_RETURN(result.epsilon_cap,
                     MaxAuditableEpsilon(delta, cap_trials, cfg.gamma));
    result.epsilon_audited = 0.0;
    result.best_threshold =
        report.thresholds.empty() ? 0.0 : report.thresholds[0].threshold;
    for (const ThresholdResult& t : report.thresholds) {
      absl::StatusOr<double> eps =
          AuditedEpsilon(t.fpr_upper, t.fnr_upper, delta);
      // Thresholds with no attack power certify nothing.
      const double value = eps.ok() ? *eps : 0.0;
      if (value > result.epsilon_audited) {
        result.epsilon_audited = value;
        result.best_threshold = t.threshold;
      }
    }
    result.at_cap = result.epsilon_audited >= result.epsilon_cap;
    report.epsilons.push_back(result);
  }
  return report;
}

MechanismSampler MakeGaussianMechanismSampler(UpdateVector x0,
                                              UpdateVector x0_prime,
                                              NoiseModel noise) {
  return [x0 = std::move(x0), x0_prime = std::move(x0_prime),
          noise = std::move(noise)](
             Hypothesis h, Rng& rng) -> absl::StatusOr<UpdateVector> {
    std::normal_distribution<double> normal;
    Eigen::VectorXd xi(noise.dim());
    for (Eigen::Index i = 0; i < xi.size(); ++i) xi[i] = normal(rng);
    const UpdateVector& x = h == Hypothesis::kNull ? x0 : x0_prime;
    return UpdateVector(x + noise.mean() +
                        noise.chol_lower().triangularView<Eigen::Lower>() * xi);
  };
}

MechanismSampler MakeFederatedSampler(const Dataset& ds,
                                      const GlobalModel& model,
                                      const RoundConfig& round,
                                      UpdateVector x0, UpdateVector x0_prime) {
  // The dataset is captured by reference and must outlive the sampler.
  return [&ds, model, round, x0 = std::move(x0),
          x0_prime = std::move(x0_prime)](
             Hypothesis h, Rng& rng) -> absl::StatusOr<UpdateVector> {
    const uint64_t round_seed = rng();
    ASSIGN_OR_RETURN(UpdateVector others,
                     SampleOthersSum(ds, model, round, round_seed,
                                     Stream::kTrials, 0));
    const UpdateVector& x = h == Hypothesis::kNull ? x0 : x0_prime;
    if (others.size() != x.size()) {
      return absl::InvalidArgumentError(absl::StrCat(
          "round sum has dimension ", others.size(), ", expected ", x.size()));
    }
    return UpdateVector(x + others);
  };
}

absl::StatusOr<AuditReport> AuditGaussianMechanism(const UpdateVector& x0,
                                                   const UpdateVector& x0_prime,
                                                   const NoiseModel& noise,
                                                   const AuditConfig& cfg) {
  RETURN_IF_ERROR(ValidateAuditConfig(cfg));
  ASSIGN_OR_RETURN(LlrTest test, LlrTest::Create(x0, x0_prime, noise));
  const MechanismSampler sampler =
      MakeGaussianMechanismSampler(x0, x0_prime, noise);
  ASSIGN_OR_RETURN(const AuditCounts counts, RunAudit(sampler, test, cfg));
  ASSIGN_OR_RETURN(AuditReport report, SummarizeAudit(counts, cfg));
  report.pair_first = x0;
  report.pair_second = x0_prime;
  ASSIGN_OR_RETURN(report.estimated_sensitivity,
                   Mahalanobis(noise, x0, x0_prime));
  report.degenerate_pair = report.estimated_sensitivity == 0.0;
  report.dim = noise.dim();
  return report;
}

absl::StatusOr<AuditReport> FullAudit(const Dataset& ds,
                                      const GlobalModel& model,
                                      const RoundConfig& round,
                                      const AuditConfig& cfg) {
  RETURN_IF_ERROR(ValidateAuditConfig(cfg));
  RETURN_IF_ERROR(ValidateDataset(ds));
  RETURN_IF_ERROR(ValidatePartitionConfig(round.partition));
  if (model.num_classes != ds.num_classes ||
      model.num_features != ds.num_features() ||
      model.dim() != ModelDim(model.num_classes, model.num_features)) {
    return absl::InvalidArgumentError(absl::StrCat(
        "model shape (", model.num_classes, " classes, ", model.num_features,
        " features) does not match the data (", ds.num_classes, ", ",
        ds.num_features(), ")"));
  }
  const int64_t n_others = round.partition.clients - 1;

  ASSIGN_OR_RETURN(const UpdateMatrix population,
                   SampleUpdatePopulation(ds, model, round,
                                          cfg.population_samples, cfg.seed));
  ASSIGN_OR_RETURN(const NoiseModel noise,
                   EstimateNoiseModel(population, n_others));

  UpdateMatrix candidates(cfg.pair_search_samples, model.dim());
  for (int64_t k = 0; k < cfg.pair_search_samples; ++k) {
    ASSIGN_OR_RETURN(UpdateVector u,
                     SampleClientUpdate(ds, model, round, cfg.seed,
                                        Stream::kPairSearch,
                                        static_cast<uint64_t>(k)));
    candidates.row(k) = u.transpose();
  }
  ASSIGN_OR_RETURN(const WorstCasePair pair,
                   FindWorstCasePair(candidates, noise));
  ASSIGN_OR_RETURN(LlrTest test, LlrTest::Create(pair.first, pair.second, noise));
  const MechanismSampler sampler =
      MakeFederatedSampler(ds, model, round, pair.first, pair.second);
  ASSIGN_OR_RETURN(const AuditCounts counts, RunAudit(sampler, test, cfg));
  ASSIGN_OR_RETURN(AuditReport report, SummarizeAudit(counts, cfg));
  report.pair_first = pair.first;
  report.pair_second = pair.second;
  report.estimated_sensitivity = pair.sensitivity;
  report.degenerate_pair = pair.degenerate;
  report.dim = model.dim();
  report.n_others = n_others;
  report.sensitivity_lower_bound = SensitivityLowerBound(model.dim(), n_others);
  return report;
}

absl::StatusOr<AuditReport> AverageReports(
    const std::vector<AuditReport>& reports) {
  if (reports.empty()) return absl::InvalidArgumentError("no reports");
  const AuditReport& first = reports.front();
  for (const AuditReport& r : reports) {
    if (r.thresholds.size() != first.thresholds.size() ||
        r.epsilons.size() != first.epsilons.size()) {
      return absl::InvalidArgumentError(
          "reports disagree in threshold or delta grid size");
    }
  }
  const double count = static_cast<double>(reports.size());
  AuditReport avg = first;
  for (size_t k = 0; k < avg.thresholds.size(); ++k) {
    double theta = 0.0, fpr = 0.0, fnr = 0.0, fp = 0.0, fn = 0.0;
    for (const AuditReport& r : reports) {
      theta += r.thresholds[k].threshold;
      fpr += r.thresholds[k].fpr_upper;
      fnr += r.thresholds[k].fnr_upper;
      fp += static_cast<double>(r.thresholds[k].false_positives);
      fn += static_cast<double>(r.thresholds[k].false_negatives);
    }
    avg.thresholds[k] = {theta / count, std::llround(fp / count),
                         std::llround(fn / count), fpr / count, fnr / count};
  }
  for (size_t k = 0; k < avg.epsilons.size(); ++k) {
    double eps = 0.0;
    double theta = 0.0;
    bool all_at_cap = true;
    for (const AuditReport& r : reports) {
      eps += r.epsilons[k].epsilon_audited;
      theta += r.epsilons[k].best_threshold;
      all_at_cap = all_at_cap && r.epsilons[k].at_cap;
    }
    avg.epsilons[k].epsilon_audited = eps / count;
    avg.epsilons[k].best_threshold = theta / count;
    avg.epsilons[k].at_cap = all_at_cap;
  }
  double sensitivity = 0.0;
  for (const AuditReport& r : reports) sensitivity += r.estimated_sensitivity;
  avg.estimated_sensitivity = sensitivity / count;
  return avg;
}

}  // namespace secagg_audit
