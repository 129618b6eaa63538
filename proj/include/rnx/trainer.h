// Copyright 2026 The rnx Authors
//
// Licensed under the Apache License, Version 2.0 (the "License");
// you may not use this file except in compliance with the License.
// You may obtain a copy of the License at
//
//      http://www.apache.org/licenses/LICENSE-2.0
//
// Unless required by applicable law or agreed to in writing, software
// distributed under the License is distributed on an "AS IS" BASIS,
// WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
// See the License for the specific language governing permissions and
// limitations under the License.

#ifndef RNX_TRAINER_H_
#define RNX_TRAINER_H_

#include <cstdint>
#include <functional>
#include <random>
#include <vector>

#include <Eigen/Core>

#include "rnx/adam.h"
#include "rnx/backprop.h"
#include "rnx/dataset.h"
#include "rnx/neural.h"

namespace rnx {

struct TrainConfig {
  int epochs = 120;
  int steps_per_epoch = 8;
  AdamConfig adam;  // learning rate 0.001
  std::size_t sequence_len = 500;
  std::size_t batch_sequences = 32;
  double grad_clip_norm = 5.0;
  LossConfig loss;  // gamma 0.5, VAD weight 0.5
  std::uint64_t seed = 0;
  // 1: the whole batch in one pass (sequential contract). More: the batch
  // is cut into fixed shards of kShardSequences that run on a thread pool
  // and are reduced in shard order, so results do not depend on the count.
  int threads = 1;
};

inline constexpr std::size_t kShardSequences = 8;

struct TrainLogEntry {
  int epoch = 0;  // 1-based
  int step = 0;   // 1-based within the epoch
  double loss = 0.0;
  double grad_norm = 0.0;
};

using TrainLogger = std::function<void(const TrainLogEntry&)>;

// Network-ready copy of a dataset: features standardized with `stats` in
// extended mode, one column per frame.
struct PreparedData {
  Eigen::MatrixXd features;
  Eigen::MatrixXd gains;
  Eigen::RowVectorXd vad;

  std::size_t frames() const { return static_cast<std::size_t>(features.cols()); }
};

PreparedData PrepareData(const FeatureDataset& dataset, FeatureMode mode,
                         const FeatureStats& stats);

// Sequences of `length` frames starting at each of `starts`.
SequenceBatch MakeBatch(const PreparedData& data,
                        std::span<const std::size_t> starts, std::size_t length);

// Standardization statistics of a dataset: computed from the extra columns
// in extended mode, identity in reference mode.
FeatureStats DatasetStats(const FeatureDataset& dataset);

// Mean per-frame loss over the whole dataset, cut into consecutive
// non-overlapping sequences of `sequence_len` frames (the tail is dropped
// unless the dataset is shorter than one sequence).
double EvaluateLoss(const NetworkModel& model, const FeatureDataset& dataset,
                    std::size_t sequence_len, const LossConfig& loss);

// Gradients of one batch under the configured shard schedule, unclipped.
BackwardResult BatchGradients(const NetworkModel& model,
                              const SequenceBatch& batch,
                              const TrainConfig& config);

// epochs x steps_per_epoch Adam steps, each on batch_sequences random
// contiguous sequences. The returned model carries the dataset statistics
// and float-rounded parameters.
NetworkModel Train(const FeatureDataset& dataset, const TrainConfig& config,
                   FeatureMode mode, const TrainLogger& log = {});

}  // namespace rnx

#endif  // RNX_TRAINER_H_
