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

// Membership-inference audit of the "sum of other clients" mechanism.
//
// A challenger submits one of two updates (x0 or x0'); the attacker sees
// z = submitted + y, where y is the sum of the other clients' updates, and
// runs a Gaussian likelihood-ratio test. Repeating the game yields error
// counts, exact binomial upper bounds on both error rates, and from those a
// certified lower bound on the mechanism's epsilon at each delta.

#ifndef SECAGG_AUDIT_AUDITOR_H_
#define SECAGG_AUDIT_AUDITOR_H_

#include <cstdint>
#include <functional>
#include <optional>
#include <vector>

#include "absl/status/status.h"
#include "absl/status/statusor.h"
#include "secagg_audit/curves.h"
#include "secagg_audit/dataset.h"
#include "secagg_audit/fl_sim.h"
#include "secagg_audit/linalg_stats.h"
#include "secagg_audit/random.h"

namespace secagg_audit {

struct WorstCasePair {
  UpdateVector first;
  UpdateVector second;
  int64_t first_index = 0;
  int64_t second_index = 0;
  // Mahalanobis distance between the two under the noise model.
  double sensitivity = 0.0;
  // True when every candidate pair is at distance 0.
  bool degenerate = false;
};

// Exhaustive search for the candidate pair (rows of `candidates`) farthest
// apart in the whitened space. Ties go to the lexicographically smallest
// (i, j) with i < j.
absl::StatusOr<WorstCasePair> FindWorstCasePair(const UpdateMatrix& candidates,
                                                const NoiseModel& model);

// Log-likelihood ratio ln N(z - x0; mu, Sigma) / N(z - x0'; mu, Sigma),
// evaluated through whitened norms.
absl::StatusOr<double> LlrStatistic(const UpdateVector& z,
                                    const UpdateVector& x0,
                                    const UpdateVector& x0_prime,
                                    const NoiseModel& model);

// The same statistic with the pair pre-whitened, for repeated evaluation.
class LlrTest {
 public:
  static absl::StatusOr<LlrTest> Create(const UpdateVector& x0,
                                        const UpdateVector& x0_prime,
                                        const NoiseModel& model);
  double Evaluate(const UpdateVector& z) const;
  const NoiseModel& model() const { return model_; }

 private:
  LlrTest(NoiseModel model, Eigen::VectorXd w_null, Eigen::VectorXd w_alt)
      : model_(std::move(model)),
        w_null_(std::move(w_null)),
        w_alt_(std::move(w_alt)) {}

  NoiseModel model_;
  Eigen::VectorXd w_null_;  // L^{-1}(x0 + mu)
  Eigen::VectorXd w_alt_;   // L^{-1}(x0' + mu)
};

// Which update the challenger submits. The test's null hypothesis is kNull
// (x0); rejecting it on a kNull trial is a false positive, and accepting it
// on a kAlternative trial is a false negative.
enum class Hypothesis { kNull, kAlternative };

// Produces one observation z for the given hypothesis. Must depend only on
// the hypothesis and the generator.
using MechanismSampler =
    std::function<absl::StatusOr<UpdateVector>(Hypothesis, Rng&)>;

enum class TrialSplit {
  // trials / 2 per hypothesis (rounded up for the null).
  kHalfPerHypothesis,
  // `trials` per hypothesis.
  kFullPerHypothesis,
};

struct AuditConfig {
  int64_t trials = 5000;
  double gamma = 0.05;
  std::vector<double> deltas = {0.0, 1e-3, 1e-2, 1e-1};
  // Thresholds are this many evenly spaced quantiles of pilot statistics.
  int threshold_levels = 101;
  // Pilot observations used to place the thresholds (0 picks
  // max(100, trials / 10)).
  int64_t pilot_trials = 0;
  // Client updates used to fit the noise model.
  int64_t population_samples = 2000;
  // Client updates searched for the worst-case pair.
  int64_t pair_search_samples = 500;
  uint64_t seed = 1;
  TrialSplit split = TrialSplit::kHalfPerHypothesis;
};

absl::Status ValidateAuditConfig(const AuditConfig& cfg);

// Per-hypothesis trial counts implied by the config.
int64_t NullTrials(const AuditConfig& cfg);
int64_t AlternativeTrials(const AuditConfig& cfg);

struct AuditCounts {
  std::vector<double> thresholds;
  // false_positives[k]: null trials with statistic <= thresholds[k].
  std::vector<int64_t> false_positives;
  // false_negatives[k]: alternative trials with statistic > thresholds[k].
  std::vector<int64_t> false_negatives;
  int64_t null_trials = 0;
  int64_t alternative_trials = 0;
};

// Quantile thresholds from pilot observations drawn on stream kPilot.
absl::StatusOr<std::vector<double>> PilotThresholds(
    const MechanismSampler& sampler, const LlrTest& test,
    const AuditConfig& cfg);

// Plays the game and counts errors at every threshold. Trial t uses stream
// (cfg.seed, kTrials, t) and alternates hypotheses starting with the null.
// Without explicit thresholds, PilotThresholds supplies them.
absl::StatusOr<AuditCounts> RunAudit(
    const MechanismSampler& sampler, const LlrTest& test,
    const AuditConfig& cfg,
    const std::optional<std::vector<double>>& thresholds = std::nullopt);

// Clopper-Pearson upper bounds on both rates at every threshold, each with
// its own hypothesis's trial count.
absl::StatusOr<TradeoffCurve> ConfidenceTradeoff(const AuditCounts& counts,
                                                 double gamma);

// ln max{(1 - delta - fpr) / fnr, (1 - delta - fnr) / fpr}, clamped below at
// 0. FailedPrecondition when both numerators are <= 0.
absl::StatusOr<double> AuditedEpsilon(double fpr_upper, double fnr_upper,
                                      double delta);

// Largest epsilon any audit with `trials_per_hypothesis` trials can certify:
// ln((1 - delta - B) / B) with B = BetaQuantile(1 - gamma/2, 1, trials).
// Returns -infinity when 1 - delta <= B.
absl::StatusOr<double> MaxAuditableEpsilon(double delta,
                                           int64_t trials_per_hypothesis,
                                           double gamma);

struct ThresholdResult {
  double threshold = 0.0;
  int64_t false_positives = 0;
  int64_t false_negatives = 0;
  double fpr_upper = 1.0;
  double fnr_upper = 1.0;
};

struct EpsilonResult {
  double delta = 0.0;
  double epsilon_audited = 0.0;
  double epsilon_cap = 0.0;
  // Threshold that achieved epsilon_audited.
  double best_threshold = 0.0;
  // True when the audited value reached the cap.
  bool at_cap = false;
};

struct AuditReport {
  uint64_t seed = 0;
  double gamma = 0.05;
  int64_t null_trials = 0;
  int64_t alternative_trials = 0;
  std::vector<ThresholdResult> thresholds;
  std::vector<EpsilonResult> epsilons;
  // Worst-case pair and its sensitivity (left empty for audits with a given
  // pair).
  UpdateVector pair_first;
  UpdateVector pair_second;
  double estimated_sensitivity = 0.0;
  bool degenerate_pair = false;
  // Dimension and number of other clients; sensitivity_lower_bound is
  // 2 sqrt(dim / n_others) when both are known, else 0.
  int64_t dim = 0;
  int64_t n_others = 0;
  double sensitivity_lower_bound = 0.0;

  TradeoffCurve Curve() const;
};

// Turns counts into a report: confidence curve, audited epsilon per delta
// (maximized over thresholds) and the cap.
absl::StatusOr<AuditReport> SummarizeAudit(const AuditCounts& counts,
                                           const AuditConfig& cfg);

// z = x_h + mu + L xi with xi ~ N(0, I): the Gaussian mechanism with noise
// model `noise` and inputs (x0, x0').
MechanismSampler MakeGaussianMechanismSampler(UpdateVector x0,
                                              UpdateVector x0_prime,
                                              NoiseModel noise);

// z = x_h + (sum of the other clients' updates in a fresh round).
MechanismSampler MakeFederatedSampler(const Dataset& ds,
                                      const GlobalModel& model,
                                      const RoundConfig& round,
                                      UpdateVector x0, UpdateVector x0_prime);

// Audits a known Gaussian mechanism (noise model and pair given).
absl::StatusOr<AuditReport> AuditGaussianMechanism(const UpdateVector& x0,
                                                   const UpdateVector& x0_prime,
                                                   const NoiseModel& noise,
                                                   const AuditConfig& cfg);

// End-to-end audit of one federated round: fit the noise model on sampled
// client updates (scaled by the number of other clients), pick the
// worst-case pair from a separate sample, then play the game against freshly
// simulated rounds.
absl::StatusOr<AuditReport> FullAudit(const Dataset& ds,
                                      const GlobalModel& model,
                                      const RoundConfig& round,
                                      const AuditConfig& cfg);

// Index-wise average of reports from the same config (used to average over
// several initial models). Pair fields are taken from the first report.
absl::StatusOr<AuditReport> AverageReports(
    const std::vector<AuditReport>& reports);

}  // namespace secagg_audit

#endif  // SECAGG_AUDIT_AUDITOR_H_
