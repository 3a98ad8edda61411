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

// First-round federated averaging with a single softmax layer. The server
// sees only the exact sum of the client updates.

#ifndef SECAGG_AUDIT_FL_SIM_H_
#define SECAGG_AUDIT_FL_SIM_H_

#include <cstdint>
#include <limits>
#include <vector>

#include "Eigen/Dense"
#include "absl/status/status.h"
#include "absl/status/statusor.h"
#include "secagg_audit/dataset.h"
#include "secagg_audit/linalg_stats.h"
#include "secagg_audit/random.h"

namespace secagg_audit {

struct PartitionConfig {
  int clients = 2;
  // Dirichlet concentration; infinity means an even split of every class.
  double concentration = std::numeric_limits<double>::infinity();
  uint64_t seed = 0;
};

absl::Status ValidatePartitionConfig(const PartitionConfig& cfg);

// Splits the row indices of `ds` among the clients. Each client draws class
// proportions from Dirichlet(concentration * 1); every class is then dealt out
// by sequential binomial draws weighted by those proportions. A client left
// empty receives one sample from the currently largest client. The result is
// a disjoint cover of [0, N) with every index list sorted.
absl::StatusOr<std::vector<std::vector<int64_t>>> DirichletPartition(
    const Dataset& ds, const PartitionConfig& cfg);

struct TrainConfig {
  double learning_rate = 0.01;
  int batch_size = 64;
  int epochs = 1;
  uint64_t seed = 0;
};

absl::Status ValidateTrainConfig(const TrainConfig& cfg);

// A single dense layer followed by softmax. `weights` stores the C x F weight
// matrix row by row, then the C biases, so dim() == C * F + C.
struct GlobalModel {
  int num_classes = 0;
  int num_features = 0;
  Eigen::VectorXd weights;

  int64_t dim() const { return weights.size(); }

  static GlobalModel Zeros(int num_classes, int num_features);
  // Entries iid N(0, stddev^2) from stream (seed, kModelInit, index).
  static GlobalModel RandomNormal(int num_classes, int num_features,
                                  double stddev, uint64_t seed,
                                  uint64_t index = 0);
};

inline int64_t ModelDim(int num_classes, int num_features) {
  return static_cast<int64_t>(num_classes) * num_features + num_classes;
}

// Mean softmax cross-entropy over the rows `indices` of `ds` at `weights`
// (layout as in GlobalModel). If `gradient` is non-null it receives the
// gradient of the mean loss with respect to the weights.
absl::StatusOr<double> SoftmaxCrossEntropy(const Eigen::VectorXd& weights,
                                           int num_classes,
                                           const Dataset& ds,
                                           const std::vector<int64_t>& indices,
                                           Eigen::VectorXd* gradient);

// Runs cfg.epochs epochs of mini-batch SGD over the shard (reshuffled each
// epoch from cfg.seed) and returns trained minus initial weights. Fails with
// OutOfRange if the loss becomes non-finite.
absl::StatusOr<UpdateVector> LocalUpdate(const GlobalModel& model,
                                         const Dataset& ds,
                                         const std::vector<int64_t>& shard,
                                         const TrainConfig& cfg);

// Exact coordinate-wise sum with compensated summation.
absl::StatusOr<UpdateVector> SecAggAggregate(
    const std::vector<UpdateVector>& updates);

// What one simulated round needs besides the data and model.
struct RoundConfig {
  PartitionConfig partition;  // partition.seed is ignored; rounds derive it
  TrainConfig train;          // train.seed is ignored; rounds derive it
};

// Update of one randomly chosen client in a freshly partitioned round. The
// result depends only on (master_seed, stream, index).
absl::StatusOr<UpdateVector> SampleClientUpdate(const Dataset& ds,
                                                const GlobalModel& model,
                                                const RoundConfig& round,
                                                uint64_t master_seed,
                                                Stream stream, uint64_t index);

// `count` independent client updates, one per row; row k is
// SampleClientUpdate(..., master_seed, kPopulation, k).
absl::StatusOr<UpdateMatrix> SampleUpdatePopulation(const Dataset& ds,
                                                    const GlobalModel& model,
                                                    const RoundConfig& round,
                                                    int64_t count,
                                                    uint64_t master_seed);

// Sum of the updates of every client except one (chosen at random) in a
// freshly partitioned round, i.e. the noise that hides the excluded client.
absl::StatusOr<UpdateVector> SampleOthersSum(const Dataset& ds,
                                             const GlobalModel& model,
                                             const RoundConfig& round,
                                             uint64_t master_seed,
                                             Stream stream, uint64_t index);

}  // namespace secagg_audit

#endif  // SECAGG_AUDIT_FL_SIM_H_
