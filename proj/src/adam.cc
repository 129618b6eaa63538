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

#include "rnx/adam.h"

#include <cmath>

namespace rnx {

void AdamUpdate(std::span<double> params, std::span<const double> grads,
                AdamState& state, const AdamConfig& config) {
  if (params.size() != grads.size()) throw Error("adam: shape mismatch");
  if (state.first_moment.empty() && state.step == 0) {
    state.first_moment.assign(params.size(), 0.0);
    state.second_moment.assign(params.size(), 0.0);
  }
  if (state.first_moment.size() != params.size() ||
      state.second_moment.size() != params.size()) {
    throw Error("adam: state does not match parameter count");
  }
  ++state.step;
  const double t = static_cast<double>(state.step);
  const double c1 = 1.0 - std::pow(config.beta1, t);
  const double c2 = 1.0 - std::pow(config.beta2, t);
  for (std::size_t i = 0; i < params.size(); ++i) {
    const double g = grads[i];
    double& m = state.first_moment[i];
    double& v = state.second_moment[i];
    m = config.beta1 * m + (1.0 - config.beta1) * g;
    v = config.beta2 * v + (1.0 - config.beta2) * g * g;
    const double m_hat = m / c1;
    const double v_hat = v / c2;
    params[i] -= config.learning_rate * m_hat / (std::sqrt(v_hat) + config.epsilon);
  }
}

void AdamUpdate(NetworkModel& model, const NetworkModel& gradients,
                AdamState& state, const AdamConfig& config) {
  std::vector<double> flat_params, flat_grads;
  ForEachParameter(model, [&](std::span<const double> p) {
    flat_params.insert(flat_params.end(), p.begin(), p.end());
  });
  ForEachParameter(gradients, [&](std::span<const double> g) {
    flat_grads.insert(flat_grads.end(), g.begin(), g.end());
  });
  AdamUpdate(flat_params, flat_grads, state, config);
  std::size_t offset = 0;
  ForEachParameter(model, [&](std::span<double> p) {
    std::copy_n(flat_params.begin() + static_cast<std::ptrdiff_t>(offset),
                p.size(), p.begin());
    offset += p.size();
  });
}

}  // namespace rnx
