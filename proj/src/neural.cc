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

#include "rnx/neural.h"

#include <cmath>
#include <random>
#include <string>

namespace rnx {
namespace {

struct LayerSpec {
  const char* name;
  LayerKind kind;
  Activation activation;
  int out_dim;
};

constexpr std::array<LayerSpec, kNumLayers> kLayerSpecs = {{
    {"dense_in", LayerKind::kDense, Activation::kTanh, kDenseInUnits},
    {"vad_gru", LayerKind::kGru, Activation::kRelu, kVadGruUnits},
    {"noise_gru", LayerKind::kGru, Activation::kRelu, kNoiseGruUnits},
    {"denoise_gru", LayerKind::kGru, Activation::kRelu, kDenoiseGruUnits},
    {"gains_out", LayerKind::kDense, Activation::kSigmoid,
     static_cast<int>(kNumBands)},
    {"vad_out", LayerKind::kDense, Activation::kSigmoid, kVadOutUnits},
}};

std::array<int, kNumLayers> InputDims(int feature_dim) {
  return {feature_dim,
          kDenseInUnits,
          kDenseInUnits + kVadGruUnits + feature_dim,
          kVadGruUnits + kNoiseGruUnits + feature_dim,
          kDenoiseGruUnits,
          kVadGruUnits};
}

double Sigmoid(double x) { return 1.0 / (1.0 + std::exp(-x)); }

}  // namespace

NetworkModel MakeTopology(FeatureMode mode) {
  NetworkModel model;
  model.mode = mode;
  const auto in_dims = InputDims(static_cast<int>(FeatureDim(mode)));
  for (std::size_t i = 0; i < kNumLayers; ++i) {
    const LayerSpec& spec = kLayerSpecs[i];
    LayerParams& layer = model.layers[i];
    layer.name = spec.name;
    layer.kind = spec.kind;
    layer.activation = spec.activation;
    layer.in_dim = in_dims[i];
    layer.out_dim = spec.out_dim;
    const int rows = spec.kind == LayerKind::kGru ? 3 * spec.out_dim : spec.out_dim;
    layer.input_weights = Eigen::MatrixXd::Zero(rows, layer.in_dim);
    if (spec.kind == LayerKind::kGru) {
      layer.recurrent_weights = Eigen::MatrixXd::Zero(rows, spec.out_dim);
    }
    layer.bias = Eigen::VectorXd::Zero(rows);
  }
  if (HiddenLayerCount(model) != 4 || TotalUnits(model) != 215) {
    throw Error("topology does not have 4 hidden layers and 215 units");
  }
  return model;
}

NetworkModel InitWeights(std::uint64_t seed, FeatureMode mode) {
  NetworkModel model = MakeTopology(mode);
  std::mt19937_64 rng(seed);
  for (LayerParams& layer : model.layers) {
    const double limit = std::sqrt(6.0 / (layer.in_dim + layer.out_dim));
    std::uniform_real_distribution<double> dist(-limit, limit);
    auto fill = [&](Eigen::MatrixXd& m) {
      for (Eigen::Index i = 0; i < m.size(); ++i) {
        // Round toward zero so float rounding cannot leave the interval.
        const float f = static_cast<float>(dist(rng));
        m.data()[i] = std::abs(f) > limit ? std::nextafter(f, 0.0f) : f;
      }
    };
    fill(layer.input_weights);
    if (layer.kind == LayerKind::kGru) fill(layer.recurrent_weights);
  }
  return model;
}

int TotalUnits(const NetworkModel& model) {
  int total = 0;
  for (const LayerParams& layer : model.layers) total += layer.out_dim;
  return total;
}

int HiddenLayerCount(const NetworkModel& model) {
  int n = 0;
  for (std::size_t i = 0; i < kNumLayers; ++i) {
    if (i != kGainsOut && i != kVadOut && model.layers[i].out_dim > 0) ++n;
  }
  return n;
}

int OutputLayerCount(const NetworkModel& model) {
  return (model.layers[kGainsOut].out_dim > 0) + (model.layers[kVadOut].out_dim > 0);
}

std::size_t ParameterCount(const NetworkModel& model) {
  std::size_t n = 0;
  ForEachParameter(model, [&](std::span<const double> p) { n += p.size(); });
  return n;
}

void ValidateModel(const NetworkModel& model) {
  const NetworkModel ref = MakeTopology(model.mode);
  for (std::size_t i = 0; i < kNumLayers; ++i) {
    const LayerParams& a = model.layers[i];
    const LayerParams& b = ref.layers[i];
    const bool same =
        a.name == b.name && a.kind == b.kind && a.activation == b.activation &&
        a.in_dim == b.in_dim && a.out_dim == b.out_dim &&
        a.input_weights.rows() == b.input_weights.rows() &&
        a.input_weights.cols() == b.input_weights.cols() &&
        a.recurrent_weights.rows() == b.recurrent_weights.rows() &&
        a.recurrent_weights.cols() == b.recurrent_weights.cols() &&
        a.bias.size() == b.bias.size();
    if (!same) throw Error("layer " + b.name + " has inconsistent dimensions");
  }
  bool finite = true;
  ForEachParameter(model, [&](std::span<const double> p) {
    for (double v : p) finite = finite && std::isfinite(v);
  });
  if (!finite) throw Error("model has non-finite parameters");
  for (std::size_t i = 0; i < kNumExtraFeatures; ++i) {
    if (!(model.stats.std[i] > 0.0) || !std::isfinite(model.stats.mean[i])) {
      throw Error("model has invalid feature statistics");
    }
  }
}

NetworkModel ZerosLike(const NetworkModel& model) {
  NetworkModel out = model;
  ForEachParameter(out, [](std::span<double> p) {
    std::fill(p.begin(), p.end(), 0.0);
  });
  return out;
}

void RoundToFloat(NetworkModel& model) {
  ForEachParameter(model, [](std::span<double> p) {
    for (double& v : p) v = static_cast<float>(v);
  });
  for (std::size_t i = 0; i < kNumExtraFeatures; ++i) {
    model.stats.mean[i] = static_cast<float>(model.stats.mean[i]);
    model.stats.std[i] = static_cast<float>(model.stats.std[i]);
  }
}

void ApplyActivation(Activation act, Eigen::Ref<Eigen::MatrixXd> x) {
  switch (act) {
    case Activation::kTanh:
      x = x.array().tanh();
      break;
    case Activation::kRelu:
      x = x.array().max(0.0);
      break;
    case Activation::kSigmoid:
      x = x.unaryExpr(&Sigmoid);
      break;
  }
}

Eigen::MatrixXd DenseForward(const LayerParams& layer, const Eigen::MatrixXd& x) {
  if (layer.kind != LayerKind::kDense || x.rows() != layer.in_dim) {
    throw Error("dense layer " + layer.name + ": input dimension mismatch");
  }
  Eigen::MatrixXd y = layer.input_weights * x;
  y.colwise() += layer.bias;
  ApplyActivation(layer.activation, y);
  return y;
}

Eigen::MatrixXd GruStep(const LayerParams& layer, const Eigen::MatrixXd& x,
                        const Eigen::MatrixXd& h, GruCache* cache) {
  const int n = layer.out_dim;
  if (layer.kind != LayerKind::kGru || x.rows() != layer.in_dim ||
      h.rows() != n || h.cols() != x.cols()) {
    throw Error("gru layer " + layer.name + ": dimension mismatch");
  }
  Eigen::MatrixXd pre = layer.input_weights * x;
  pre.colwise() += layer.bias;
  pre.topRows(2 * n).noalias() += layer.recurrent_weights.topRows(2 * n) * h;
  Eigen::MatrixXd z = pre.topRows(n).unaryExpr(&Sigmoid);
  Eigen::MatrixXd r = pre.middleRows(n, n).unaryExpr(&Sigmoid);
  Eigen::MatrixXd reset_h = r.cwiseProduct(h);
  Eigen::MatrixXd cand_pre = pre.bottomRows(n);
  cand_pre.noalias() += layer.recurrent_weights.bottomRows(n) * reset_h;
  Eigen::MatrixXd cand = cand_pre;
  ApplyActivation(layer.activation, cand);
  Eigen::MatrixXd h_new =
      z.cwiseProduct(h) + (1.0 - z.array()).matrix().cwiseProduct(cand);
  if (cache != nullptr) {
    cache->x = x;
    cache->h_prev = h;
    cache->z = std::move(z);
    cache->r = std::move(r);
    cache->candidate_pre = std::move(cand_pre);
    cache->reset_h = std::move(reset_h);
  }
  return h_new;
}

NetworkOutput NetworkForward(const NetworkModel& model,
                             std::span<const double> features,
                             const HiddenState& state) {
  if (features.size() != model.feature_dim()) {
    throw Error("network expects " + std::to_string(model.feature_dim()) +
                " features, got " + std::to_string(features.size()));
  }
  const auto& L = model.layers;
  const Eigen::Index f = static_cast<Eigen::Index>(features.size());
  const Eigen::MatrixXd x = Eigen::Map<const Eigen::VectorXd>(features.data(), f);

  const Eigen::MatrixXd dense = DenseForward(L[kDenseIn], x);
  const Eigen::MatrixXd vad_h = GruStep(L[kVadGru], dense, state.vad);

  Eigen::MatrixXd noise_in(L[kNoiseGru].in_dim, 1);
  noise_in << dense, vad_h, x;
  const Eigen::MatrixXd noise_h = GruStep(L[kNoiseGru], noise_in, state.noise);

  Eigen::MatrixXd denoise_in(L[kDenoiseGru].in_dim, 1);
  denoise_in << vad_h, noise_h, x;
  const Eigen::MatrixXd denoise_h =
      GruStep(L[kDenoiseGru], denoise_in, state.denoise);

  const Eigen::MatrixXd gains = DenseForward(L[kGainsOut], denoise_h);
  const Eigen::MatrixXd vad = DenseForward(L[kVadOut], vad_h);

  NetworkOutput out;
  for (std::size_t b = 0; b < kNumBands; ++b) out.mask[b] = gains(b, 0);
  out.vad = vad(0, 0);
  out.state.vad = vad_h.col(0);
  out.state.noise = noise_h.col(0);
  out.state.denoise = denoise_h.col(0);
  return out;
}

}  // namespace rnx
