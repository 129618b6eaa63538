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

#ifndef RNX_BACKPROP_H_
#define RNX_BACKPROP_H_

#include <vector>

#include <Eigen/Core>

#include "rnx/neural.h"

namespace rnx {

// B sequences of T frames each, stored time-major: column j of every
// matrix belongs to sequence j. Features are network inputs (extra trio
// already standardized in extended mode).
struct SequenceBatch {
  std::vector<Eigen::MatrixXd> features;  // T x (feature_dim x B)
  std::vector<Eigen::MatrixXd> gains;     // T x (22 x B), -1 sentinels allowed
  std::vector<Eigen::RowVectorXd> vad;    // T x (1 x B)

  std::size_t steps() const { return features.size(); }
  std::size_t batch() const {
    return features.empty() ? 0 : static_cast<std::size_t>(features[0].cols());
  }
  std::size_t frames() const { return steps() * batch(); }
};

struct LossConfig {
  double gamma = 0.5;
  double vad_weight = 0.5;
};

struct BackwardResult {
  // Sum of per-frame losses times `scale`; with the default scale this is
  // the mean loss per frame.
  double loss = 0.0;
  NetworkModel gradients;
};

// Mean per-frame loss of the batch, hidden states zeroed at t = 0.
double ForwardLoss(const NetworkModel& model, const SequenceBatch& batch,
                   const LossConfig& config);

// Exact gradients of scale * sum_frames loss by backpropagation through
// time. scale <= 0 means 1 / batch.frames(). Throws on non-finite values.
BackwardResult BackwardTbptt(const NetworkModel& model,
                             const SequenceBatch& batch,
                             const LossConfig& config, double scale = 0.0);

double GradientNorm(const NetworkModel& gradients);

// Rescales to at most `max_norm` (global L2). Returns the norm before.
double ClipGradients(NetworkModel& gradients, double max_norm);

// out += weight * g, tensor by tensor.
void AccumulateGradients(NetworkModel& out, const NetworkModel& g,
                         double weight = 1.0);

}  // namespace rnx

#endif  // RNX_BACKPROP_H_
