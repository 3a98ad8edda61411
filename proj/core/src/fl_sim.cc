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

#include "secagg_audit/fl_sim.h"

#include <algorithm>
#include <cmath>
#include <numeric>
#include <random>

#include "absl/strings/str_cat.h"
#include "secagg_audit/status_macros.h"

namespace secagg_audit {
namespace {

// ln of a Gamma(shape, 1) draw. Shapes below 1 use the boosting identity
// G(a) = G(a + 1) U^{1/a}, kept in log space so tiny shapes do not underflow.
double LogGammaDraw(double shape, Rng& rng) {
  if (shape >= 1.0) {
    return std::log(std::gamma_distribution<double>(shape, 1.0)(rng));
  }
  const double boosted = std::gamma_distribution<double>(shape + 1.0, 1.0)(rng);
  const double u = std::uniform_real_distribution<double>(0.0, 1.0)(rng);
  return std::log(boosted) + std::log(std::max(u, 1e-300)) / shape;
}

std::vector<std::vector<int64_t>> IndicesByClass(const Dataset& ds) {
  std::vector<std::vector<int64_t>> by_class(ds.num_classes);
  for (int64_t i = 0; i < ds.size(); ++i) by_class[ds.labels[i]].push_back(i);
  return by_class;
}

}  // namespace

absl::Status ValidatePartitionConfig(const PartitionConfig& cfg) {
  if (cfg.clients < 2) {
    return absl::InvalidArgumentError(
        absl::StrCat("need at least 2 clients, got ", cfg.clients));
  }
  if (!(cfg.concentration > 0.0)) {
    return absl::InvalidArgumentError(absl::StrCat(
        "concentration must be positive (or infinite), got ",
        cfg.concentration));
  }
  return absl::OkStatus();
}

absl::StatusOr<std::vector<std::vector<int64_t>>> DirichletPartition(
    const Dataset& ds, const PartitionConfig& cfg) {
  RETURN_IF_ERROR(ValidatePartitionConfig(cfg));
  if (cfg.clients > ds.size()) {
    return absl::InvalidArgumentError(absl::StrCat(
        "cannot split ", ds.size(), " samples among ", cfg.clients,
        " clients"));
  }
  Rng rng = MakeRng(cfg.seed, Stream::kPartition, 0);
  std::vector<std::vector<int64_t>> by_class = IndicesByClass(ds);
  for (auto& indices : by_class) std::shuffle(indices.begin(), indices.end(), rng);

  const int k = cfg.clients;
  std::vector<std::vector<int64_t>> parts(k);
  if (std::isinf(cfg.concentration)) {
    // Deal every class round-robin, continuing the rotation across classes so
    // that client sizes also differ by at most one.
    int64_t next = 0;
    for (const auto& indices : by_class) {
      for (int64_t idx : indices) parts[next++ % k].push_back(idx);
    }
  } else {
    const int c = ds.num_classes;
    // log_props(i, j): log of client i's Dirichlet weight on class j.
    Eigen::MatrixXd log_props(k, c);
    for (int i = 0; i < k; ++i) {
      for (int j = 0; j < c; ++j) {
        log_props(i, j) = LogGammaDraw(cfg.concentration, rng);
      }
    }
    for (int j = 0; j < c; ++j) {
      // Relative weight of each client for this class.
      const double top = log_props.col(j).maxCoeff();
      std::vector<double> weight(k);
      for (int i = 0; i < k; ++i) weight[i] = std::exp(log_props(i, j) - top);
      std::vector<double> tail(k + 1, 0.0);
      for (int i = k - 1; i >= 0; --i) tail[i] = tail[i + 1] + weight[i];

      const std::vector<int64_t>& indices = by_class[j];
      int64_t remaining = static_cast<int64_t>(indices.size());
      int64_t cursor = 0;
      for (int i = 0; i < k && remaining > 0; ++i) {
        int64_t take = remaining;
        if (i < k - 1) {
          const double p = tail[i] > 0.0 ? std::min(1.0, weight[i] / tail[i])
                                         : 0.0;
          take = std::binomial_distribution<int64_t>(remaining, p)(rng);
        }
        for (int64_t t = 0; t < take; ++t) {
          parts[i].push_back(indices[cursor++]);
        }
        remaining -= take;
      }
    }
  }
  // Every client gets at least one sample.
  for (int i = 0; i < k; ++i) {
    if (!parts[i].empty()) continue;
    auto largest = std::max_element(
        parts.begin(), parts.end(),
        [](const auto& a, const auto& b) { return a.size() < b.size(); });
    parts[i].push_back(largest->back());
    largest->pop_back();
  }
  for (auto& part : parts) std::sort(part.begin(), part.end());
  return parts;
}

absl::Status ValidateTrainConfig(const TrainConfig& cfg) {
  if (!(cfg.learning_rate > 0.0) || !std::isfinite(cfg.learning_rate)) {
    return absl::InvalidArgumentError(absl::StrCat(
        "learning rate must be positive, got ", cfg.learning_rate));
  }
  if (cfg.batch_size < 1 || cfg.epochs < 1) {
    return absl::InvalidArgumentError(absl::StrCat(
        "batch size and epochs must be positive, got ", cfg.batch_size,
        " and ", cfg.epochs));
  }
  return absl::OkStatus();
}

GlobalModel GlobalModel::Zeros(int num_classes, int num_features) {
  GlobalModel model;
  model.num_classes = num_classes;
  model.num_features = num_features;
  model.weights = Eigen::VectorXd::Zero(ModelDim(num_classes, num_features));
  return model;
}

GlobalModel GlobalModel::RandomNormal(int num_classes, int num_features,
                                      double stddev, uint64_t seed,
                                      uint64_t index) {
  GlobalModel model = Zeros(num_classes, num_features);
  Rng rng = MakeRng(seed, Stream::kModelInit, index);
  std::normal_distribution<double> normal(0.0, stddev);
  for (Eigen::Index i = 0; i < model.weights.size(); ++i) {
    model.weights[i] = normal(rng);
  }
  return model;
}

absl::StatusOr<double> SoftmaxCrossEntropy(const Eigen::VectorXd& weights,
                                           int num_classes,
                                           const Dataset& ds,
                                           const std::vector<int64_t>& indices,
                                           Eigen::VectorXd* gradient) {
  const int c = num_classes;
  const int f = ds.num_features();
  if (c != ds.num_classes) {
    return absl::InvalidArgumentError(absl::StrCat(
        "model has ", c, " classes but the data has ", ds.num_classes));
  }
  if (weights.size() != ModelDim(c, f)) {
    return absl::InvalidArgumentError(absl::StrCat(
        "weights have dimension ", weights.size(), ", expected ",
        ModelDim(c, f)));
  }
  if (indices.empty()) {
    return absl::InvalidArgumentError("loss over an empty set of samples");
  }
  using RowMajorMatrix =
      Eigen::Matrix<double, Eigen::Dynamic, Eigen::Dynamic, Eigen::RowMajor>;
  const Eigen::Map<const RowMajorMatrix> w(weights.data(), c, f);
  const auto b = weights.segment(static_cast<Eigen::Index>(c) * f, c);

  if (gradient != nullptr) gradient->setZero(weights.size());
  double total = 0.0;
  Eigen::VectorXd logits(c);
  for (int64_t idx : indices) {
    if (idx < 0 || idx >= ds.size()) {
      return absl::OutOfRangeError(absl::StrCat("sample index ", idx,
                                                " outside the dataset"));
    }
    const auto x = ds.features.row(idx).transpose();
    logits.noalias() = w * x + b;
    const double top = logits.maxCoeff();
    const double log_norm =
        top + std::log((logits.array() - top).exp().sum());
    const int label = ds.labels[idx];
    total += log_norm - logits[label];
    if (gradient != nullptr) {
      // d loss / d logits = softmax - onehot.
      Eigen::VectorXd residual = (logits.array() - log_norm).exp();
      residual[label] -= 1.0;
      Eigen::Map<RowMajorMatrix> gw(gradient->data(), c, f);
      gw.noalias() += residual * x.transpose();
      gradient->segment(static_cast<Eigen::Index>(c) * f, c) += residual;
    }
  }
  const double count = static_cast<double>(indices.size());
  if (gradient != nullptr) *gradient /= count;
  return total / count;
}

absl::StatusOr<UpdateVector> LocalUpdate(const GlobalModel& model,
                                         const Dataset& ds,
                                         const std::vector<int64_t>& shard,
                                         const TrainConfig& cfg) {
  RETURN_IF_ERROR(ValidateTrainConfig(cfg));
  if (shard.empty()) {
    return absl::InvalidArgumentError("local update on an empty shard");
  }
  Eigen::VectorXd weights = model.weights;
  Eigen::VectorXd gradient(weights.size());
  std::vector<int64_t> order = shard;
  std::vector<int64_t> batch;
  batch.reserve(cfg.batch_size);
  for (int epoch = 0; epoch < cfg.epochs; ++epoch) {
    Rng rng = MakeRng(cfg.seed, Stream::kTraining, epoch);
    std::shuffle(order.begin(), order.end(), rng);
    for (size_t start = 0; start < order.size(); start += cfg.batch_size) {
      const size_t stop = std::min(order.size(), start + cfg.batch_size);
      batch.assign(order.begin() + start, order.begin() + stop);
      ASSIGN_OR_RETURN(const double loss,
                       SoftmaxCrossEntropy(weights, model.num_classes, ds,
                                           batch, &gradient));
      if (!std::isfinite(loss) || !gradient.allFinite()) {
        return absl::OutOfRangeError(absl::StrCat(
            "training loss became non-finite in epoch ", epoch));
      }
      weights.noalias() -= cfg.learning_rate * gradient;
    }
  }
  return UpdateVector(weights - model.weights);
}

absl::StatusOr<UpdateVector> SecAggAggregate(
    const std::vector<UpdateVector>& updates) {
  if (updates.empty()) {
    return absl::InvalidArgumentError("nothing to aggregate");
  }
  const Eigen::Index d = updates.front().size();
  for (size_t i = 1; i < updates.size(); ++i) {
    if (updates[i].size() != d) {
      return absl::InvalidArgumentError(absl::StrCat(
          "update ", i, " has dimension ", updates[i].size(), ", expected ",
          d));
    }
  }
  // Neumaier summation per coordinate.
  Eigen::VectorXd sum = Eigen::VectorXd::Zero(d);
  Eigen::VectorXd compensation = Eigen::VectorXd::Zero(d);
  for (const UpdateVector& u : updates) {
    for (Eigen::Index j = 0; j < d; ++j) {
      const double t = sum[j] + u[j];
      if (std::abs(sum[j]) >= std::abs(u[j])) {
        compensation[j] += (sum[j] - t) + u[j];
      } else {
        compensation[j] += (u[j] - t) + sum[j];
      }
      sum[j] = t;
    }
  }
  return UpdateVector(sum + compensation);
}

namespace {

// Partitions afresh for one round and returns the shards plus an RNG for the
// rest of the round's choices.
absl::StatusOr<std::vector<std::vector<int64_t>>> PartitionRound(
    const Dataset& ds, const RoundConfig& round, Rng& rng) {
  PartitionConfig partition = round.partition;
  partition.seed = rng();
  return DirichletPartition(ds, partition);
}

}  // namespace

absl::StatusOr<UpdateVector> SampleClientUpdate(const Dataset& ds,
                                                const GlobalModel& model,
                                                const RoundConfig& round,
                                                uint64_t master_seed,
                                                Stream stream, uint64_t index) {
  Rng rng = MakeRng(master_seed, stream, index);
  ASSIGN_OR_RETURN(auto shards, PartitionRound(ds, round, rng));
  const int client = std::uniform_int_distribution<int>(
      0, static_cast<int>(shards.size()) - 1)(rng);
  TrainConfig train = round.train;
  train.seed = rng();
  return LocalUpdate(model, ds, shards[client], train);
}

absl::StatusOr<UpdateMatrix> SampleUpdatePopulation(const Dataset& ds,
                                                    const GlobalModel& model,
                                                    const RoundConfig& round,
                                                    int64_t count,
                                                    uint64_t master_seed) {
  if (count < 1) {
    return absl::InvalidArgumentError(
        absl::StrCat("population size must be positive, got ", count));
  }
  UpdateMatrix population(count, model.dim());
  for (int64_t k = 0; k < count; ++k) {
    ASSIGN_OR_RETURN(UpdateVector u,
                     SampleClientUpdate(ds, model, round, master_seed,
                                        Stream::kPopulation,
                                        static_cast<uint64_t>(k)));
    population.row(k) = u.transpose();
  }
  return population;
}

absl::StatusOr<UpdateVector> SampleOthersSum(const Dataset& ds,
                                             const GlobalModel& model,
                                             const RoundConfig& round,
                                             uint64_t master_seed,
                                             Stream stream, uint64_t index) {
  Rng rng = MakeRng(master_seed, stream, index);
  ASSIGN_OR_RETURN(auto shards, PartitionRound(ds, round, rng));
  const int excluded = std::uniform_int_distribution<int>(
      0, static_cast<int>(shards.size()) - 1)(rng);
  std::vector<UpdateVector> updates;
  updates.reserve(shards.size() - 1);
  for (int i = 0; i < static_cast<int>(shards.size()); ++i) {
    TrainConfig train = round.train;
    train.seed = rng();
    if (i == excluded) continue;
    ASSIGN_OR_RETURN(UpdateVector u, LocalUpdate(model, ds, shards[i], train));
    updates.push_back(std::move(u));
  }
  return SecAggAggregate(updates);
}

}  // namespace secagg_audit
