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

#ifndef RNX_ADAM_H_
#define RNX_ADAM_H_

#include <cstdint>
#include <span>
#include <vector>

#include "rnx/neural.h"

namespace rnx {

struct AdamConfig {
  double learning_rate = 0.001;
  double beta1 = 0.9;
  double beta2 = 0.999;
  double epsilon = 1e-8;
};

struct AdamState {
  std::vector<double> first_moment;
  std::vector<double> second_moment;
  std::int64_t step = 0;
};

// One bias-corrected Adam step on a flat parameter vector. The moment
// buffers are sized on first use.
void AdamUpdate(std::span<double> params, std::span<const double> grads,
                AdamState& state, const AdamConfig& config);

// Same, over every tensor of a model with gradients shaped like it.
void AdamUpdate(NetworkModel& model, const NetworkModel& gradients,
                AdamState& state, const AdamConfig& config);

}  // namespace rnx

#endif  // RNX_ADAM_H_
