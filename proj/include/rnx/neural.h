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

#ifndef RNX_NEURAL_H_
#define RNX_NEURAL_H_

#include <array>
#include <cstdint>
#include <span>
#include <string>

#include <Eigen/Core>

#include "rnx/bands.h"
#include "rnx/features.h"

namespace rnx {

enum class LayerKind : std::uint8_t { kDense = 0, kGru = 1 };
enum class Activation : std::uint8_t { kTanh = 0, kRelu = 1, kSigmoid = 2 };

// Dense: y = act(W x + b), W is out x in.
// GRU: W is 3out x in, U is 3out x out, b is 3out, row blocks ordered
// [update, reset, candidate]. Gates use the sigmoid; `activation` applies
// to the candidate only.
struct LayerParams {
  std::string name;
  LayerKind kind = LayerKind::kDense;
  Activation activation = Activation::kTanh;
  int in_dim = 0;
  int out_dim = 0;
  Eigen::MatrixXd input_weights;
  Eigen::MatrixXd recurrent_weights;  // empty for dense layers
  Eigen::VectorXd bias;
};

// Layer slots, also the on-disk order.
enum LayerIndex : std::size_t {
  kDenseIn = 0,
  kVadGru,
  kNoiseGru,
  kDenoiseGru,
  kGainsOut,
  kVadOut,
  kNumLayers
};

inline constexpr int kDenseInUnits = 24;
inline constexpr int kVadGruUnits = 24;
inline constexpr int kNoiseGruUnits = 48;
inline constexpr int kDenoiseGruUnits = 96;
inline constexpr int kVadOutUnits = 1;
inline constexpr std::uint32_t kModelVersion = 1;

// Six-layer mask estimator:
//   dense_in    = tanh(features)                         24
//   vad_gru     = GRU(dense_in)                          24
//   noise_gru   = GRU([dense_in | vad_gru | features])   48
//   denoise_gru = GRU([vad_gru | noise_gru | features])  96
//   gains_out   = sigmoid(denoise_gru)                   22
//   vad_out     = sigmoid(vad_gru)                       1
struct NetworkModel {
  std::uint32_t version = kModelVersion;
  FeatureMode mode = FeatureMode::kReference;
  FeatureStats stats;  // used in extended mode only
  std::array<LayerParams, kNumLayers> layers;

  std::size_t feature_dim() const { return FeatureDim(mode); }
};

// Model with the right shapes and all parameters zero. Verifies the unit
// budget (4 hidden layers, 215 units in total).
NetworkModel MakeTopology(FeatureMode mode);

// Glorot-uniform weights, zero biases, reproducible from `seed`. Values are
// rounded to float so a saved model reloads bit-exactly.
NetworkModel InitWeights(std::uint64_t seed, FeatureMode mode);

int TotalUnits(const NetworkModel& model);
int HiddenLayerCount(const NetworkModel& model);
int OutputLayerCount(const NetworkModel& model);
std::size_t ParameterCount(const NetworkModel& model);

// Throws unless every layer has the shapes MakeTopology would give it and
// all parameters are finite.
void ValidateModel(const NetworkModel& model);

// Calls fn(std::span<double>) for every parameter tensor in a fixed order.
template <typename Model, typename Fn>
void ForEachParameter(Model& model, Fn&& fn) {
  for (auto& layer : model.layers) {
    fn(std::span(layer.input_weights.data(),
                 static_cast<std::size_t>(layer.input_weights.size())));
    if (layer.kind == LayerKind::kGru) {
      fn(std::span(layer.recurrent_weights.data(),
                   static_cast<std::size_t>(layer.recurrent_weights.size())));
    }
    fn(std::span(layer.bias.data(), static_cast<std::size_t>(layer.bias.size())));
  }
}

// Same shapes as `model`, all zeros.
NetworkModel ZerosLike(const NetworkModel& model);
void RoundToFloat(NetworkModel& model);

// --- layer kernels; columns of x/h are independent streams ---

void ApplyActivation(Activation act, Eigen::Ref<Eigen::MatrixXd> x);

Eigen::MatrixXd DenseForward(const LayerParams& layer, const Eigen::MatrixXd& x);

// Values a GRU step keeps for the backward pass.
struct GruCache {
  Eigen::MatrixXd x, h_prev, z, r, candidate_pre, reset_h;
};

Eigen::MatrixXd GruStep(const LayerParams& layer, const Eigen::MatrixXd& x,
                        const Eigen::MatrixXd& h, GruCache* cache = nullptr);

struct HiddenState {
  Eigen::VectorXd vad = Eigen::VectorXd::Zero(kVadGruUnits);
  Eigen::VectorXd noise = Eigen::VectorXd::Zero(kNoiseGruUnits);
  Eigen::VectorXd denoise = Eigen::VectorXd::Zero(kDenoiseGruUnits);
};

struct NetworkOutput {
  BandVector mask{};
  double vad = 0.0;
  HiddenState state;
};

// One frame through the network. `features` must already be standardized
// (extended mode).
NetworkOutput NetworkForward(const NetworkModel& model,
                             std::span<const double> features,
                             const HiddenState& state);

}  // namespace rnx

#endif  // RNX_NEURAL_H_
