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

#include "rnx/trainer.h"

#include <algorithm>
#include <exception>
#include <mutex>
#include <thread>

namespace rnx {
namespace {

SequenceBatch Slice(const SequenceBatch& batch, std::size_t first,
                    std::size_t count) {
  SequenceBatch out;
  const auto f = static_cast<Eigen::Index>(first);
  const auto c = static_cast<Eigen::Index>(count);
  for (std::size_t t = 0; t < batch.steps(); ++t) {
    out.features.push_back(batch.features[t].middleCols(f, c));
    out.gains.push_back(batch.gains[t].middleCols(f, c));
    out.vad.push_back(batch.vad[t].segment(f, c));
  }
  return out;
}

}  // namespace

PreparedData PrepareData(const FeatureDataset& dataset, FeatureMode mode,
                         const FeatureStats& stats) {
  if (dataset.feature_dim() != FeatureDim(mode)) {
    throw Error("dataset has feature_dim " + std::to_string(dataset.feature_dim()) +
                " but mode " + ModeName(mode) + " needs " +
                std::to_string(FeatureDim(mode)));
  }
  const auto n = static_cast<Eigen::Index>(dataset.frames());
  const auto fdim = static_cast<Eigen::Index>(dataset.feature_dim());
  PreparedData d;
  d.features.resize(fdim, n);
  d.gains.resize(kNumBands, n);
  d.vad.resize(n);
  std::vector<double> row(dataset.feature_dim());
  for (Eigen::Index i = 0; i < n; ++i) {
    const auto f = dataset.Features(static_cast<std::size_t>(i));
    std::copy(f.begin(), f.end(), row.begin());
    if (mode == FeatureMode::kExtended) StandardizeExtras(row, stats);
    for (Eigen::Index j = 0; j < fdim; ++j) d.features(j, i) = row[j];
    const auto g = dataset.Gains(static_cast<std::size_t>(i));
    for (std::size_t b = 0; b < kNumBands; ++b) d.gains(b, i) = g[b];
    d.vad(i) = dataset.Vad(static_cast<std::size_t>(i));
  }
  return d;
}

SequenceBatch MakeBatch(const PreparedData& data,
                        std::span<const std::size_t> starts, std::size_t length) {
  SequenceBatch batch;
  const auto b = static_cast<Eigen::Index>(starts.size());
  for (std::size_t t = 0; t < length; ++t) {
    Eigen::MatrixXd f(data.features.rows(), b);
    Eigen::MatrixXd g(kNumBands, b);
    Eigen::RowVectorXd v(b);
    for (Eigen::Index j = 0; j < b; ++j) {
      const std::size_t col = starts[j] + t;
      if (col >= data.frames()) throw Error("sequence runs past the dataset");
      const auto c = static_cast<Eigen::Index>(col);
      f.col(j) = data.features.col(c);
      g.col(j) = data.gains.col(c);
      v(j) = data.vad(c);
    }
    batch.features.push_back(std::move(f));
    batch.gains.push_back(std::move(g));
    batch.vad.push_back(std::move(v));
  }
  return batch;
}

FeatureStats DatasetStats(const FeatureDataset& dataset) {
  if (dataset.mode() != FeatureMode::kExtended) return FeatureStats{};
  const auto columns = dataset.ExtraColumns();
  return ComputeStats(columns);
}

double EvaluateLoss(const NetworkModel& model, const FeatureDataset& dataset,
                    std::size_t sequence_len, const LossConfig& loss) {
  if (dataset.empty()) throw Error("empty dataset");
  const PreparedData data = PrepareData(dataset, model.mode, model.stats);
  const std::size_t len = std::min(sequence_len, data.frames());
  std::vector<std::size_t> starts;
  for (std::size_t s = 0; s + len <= data.frames(); s += len) starts.push_back(s);
  return ForwardLoss(model, MakeBatch(data, starts, len), loss);
}

BackwardResult BatchGradients(const NetworkModel& model,
                              const SequenceBatch& batch,
                              const TrainConfig& config) {
  const double scale = 1.0 / static_cast<double>(batch.frames());
  if (config.threads <= 1 || batch.batch() <= kShardSequences) {
    return BackwardTbptt(model, batch, config.loss, scale);
  }
  const std::size_t shards = (batch.batch() + kShardSequences - 1) / kShardSequences;
  std::vector<BackwardResult> partial(shards);
  std::vector<std::exception_ptr> errors(shards);
  std::size_t next = 0;
  std::mutex mu;
  auto worker = [&] {
    for (;;) {
      std::size_t s;
      {
        std::lock_guard<std::mutex> lock(mu);
        if (next >= shards) return;
        s = next++;
      }
      try {
        const std::size_t first = s * kShardSequences;
        const std::size_t count = std::min(kShardSequences, batch.batch() - first);
        partial[s] = BackwardTbptt(model, Slice(batch, first, count), config.loss, scale);
      } catch (...) {
        errors[s] = std::current_exception();
      }
    }
  };
  std::vector<std::thread> pool;
  const int n_threads = std::min<int>(config.threads, static_cast<int>(shards));
  for (int i = 0; i < n_threads; ++i) pool.emplace_back(worker);
  for (std::thread& t : pool) t.join();
  for (const auto& e : errors) {
    if (e) std::rethrow_exception(e);
  }
  BackwardResult total;
  total.gradients = ZerosLike(model);
  for (const BackwardResult& p : partial) {
    total.loss += p.loss;
    AccumulateGradients(total.gradients, p.gradients);
  }
  return total;
}

NetworkModel Train(const FeatureDataset& dataset, const TrainConfig& config,
                   FeatureMode mode, const TrainLogger& log) {
  if (dataset.empty()) throw Error("train: empty dataset");
  if (dataset.feature_dim() != FeatureDim(mode)) {
    throw Error("train: dimension mismatch: dataset has feature_dim " +
                std::to_string(dataset.feature_dim()) + ", mode " + ModeName(mode) +
                " expects " + std::to_string(FeatureDim(mode)));
  }
  if (config.epochs < 0 || config.steps_per_epoch <= 0 ||
      config.sequence_len == 0 || config.batch_sequences == 0 ||
      !(config.adam.learning_rate > 0.0) || !(config.loss.gamma > 0.0) ||
      config.loss.gamma > 1.0) {
    throw Error("train: invalid configuration");
  }
  NetworkModel model = InitWeights(config.seed, mode);
  model.stats = DatasetStats(dataset);
  RoundToFloat(model);

  const PreparedData data = PrepareData(dataset, mode, model.stats);
  const std::size_t len = std::min(config.sequence_len, data.frames());
  std::mt19937_64 rng(config.seed + 0x9e3779b97f4a7c15ULL);
  std::uniform_int_distribution<std::size_t> start_dist(0, data.frames() - len);
  AdamState adam;
  std::vector<std::size_t> starts(config.batch_sequences);

  for (int epoch = 1; epoch <= config.epochs; ++epoch) {
    for (int step = 1; step <= config.steps_per_epoch; ++step) {
      for (std::size_t& s : starts) s = start_dist(rng);
      const SequenceBatch batch = MakeBatch(data, starts, len);
      BackwardResult r = BatchGradients(model, batch, config);
      const double norm = ClipGradients(r.gradients, config.grad_clip_norm);
      AdamUpdate(model, r.gradients, adam, config.adam);
      if (log) log({epoch, step, r.loss, norm});
    }
  }
  RoundToFloat(model);
  return model;
}

}  // namespace rnx
