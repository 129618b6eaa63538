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

#include "rnx/model_io.h"

#include <cstring>
#include <fstream>
#include <iterator>
#include <vector>

#include "rnx/binary_io.h"

namespace rnx {
namespace {

constexpr char kMagic[4] = {'R', 'N', 'X', 'M'};
constexpr std::uint32_t kFlagExtended = 1;

void PutMatrix(ByteWriter& w, const Eigen::MatrixXd& m) {
  for (Eigen::Index i = 0; i < m.rows(); ++i) {
    for (Eigen::Index j = 0; j < m.cols(); ++j) w.F32(m(i, j));
  }
}

void GetMatrix(ByteReader& r, Eigen::MatrixXd& m) {
  for (Eigen::Index i = 0; i < m.rows(); ++i) {
    for (Eigen::Index j = 0; j < m.cols(); ++j) m(i, j) = r.F32();
  }
}

}  // namespace

std::string SerializeModel(const NetworkModel& model) {
  ValidateModel(model);
  ByteWriter w;
  w.Bytes(kMagic, 4);
  w.U32(model.version);
  w.U32(static_cast<std::uint32_t>(model.feature_dim()));
  const bool extended = model.mode == FeatureMode::kExtended;
  w.U32(extended ? kFlagExtended : 0);
  for (std::size_t i = 0; i < kNumExtraFeatures; ++i) {
    w.F32(extended ? model.stats.mean[i] : 0.0);
  }
  for (std::size_t i = 0; i < kNumExtraFeatures; ++i) {
    w.F32(extended ? model.stats.std[i] : 0.0);
  }
  w.U32(static_cast<std::uint32_t>(kNumLayers));
  for (const LayerParams& layer : model.layers) {
    w.U8(static_cast<std::uint8_t>(layer.name.size()));
    w.Bytes(layer.name.data(), layer.name.size());
    w.U8(static_cast<std::uint8_t>(layer.kind));
    w.U8(static_cast<std::uint8_t>(layer.activation));
    w.U32(static_cast<std::uint32_t>(layer.in_dim));
    w.U32(static_cast<std::uint32_t>(layer.out_dim));
    PutMatrix(w, layer.input_weights);
    if (layer.kind == LayerKind::kGru) PutMatrix(w, layer.recurrent_weights);
    PutMatrix(w, layer.bias);
  }
  return w.Take();
}

NetworkModel DeserializeModel(std::span<const char> bytes) {
  ByteReader r(bytes, "model");
  char magic[4];
  r.Bytes(magic, 4);
  if (std::memcmp(magic, kMagic, 4) != 0) throw Error("model: bad magic");
  const std::uint32_t version = r.U32();
  if (version != kModelVersion) {
    throw Error("model: unsupported version " + std::to_string(version));
  }
  const std::uint32_t feature_dim = r.U32();
  const std::uint32_t flags = r.U32();
  const FeatureMode mode = ModeFromDim(feature_dim);
  if (((flags & kFlagExtended) != 0) != (mode == FeatureMode::kExtended)) {
    throw Error("model: flags disagree with feature_dim");
  }
  NetworkModel model = MakeTopology(mode);
  std::array<double, kNumExtraFeatures> means{}, stds{};
  for (double& m : means) m = r.F32();
  for (double& s : stds) s = r.F32();
  if (mode == FeatureMode::kExtended) {
    model.stats.mean = means;
    model.stats.std = stds;
  }
  const std::uint32_t layer_count = r.U32();
  if (layer_count != kNumLayers) {
    throw Error("model: expected 6 layers, found " + std::to_string(layer_count));
  }
  for (LayerParams& layer : model.layers) {
    std::string name(r.U8(), '\0');
    r.Bytes(name.data(), name.size());
    const auto kind = static_cast<LayerKind>(r.U8());
    const auto activation = static_cast<Activation>(r.U8());
    const std::uint32_t in_dim = r.U32();
    const std::uint32_t out_dim = r.U32();
    if (name != layer.name || kind != layer.kind ||
        activation != layer.activation ||
        in_dim != static_cast<std::uint32_t>(layer.in_dim) ||
        out_dim != static_cast<std::uint32_t>(layer.out_dim)) {
      throw Error("model: layer '" + name + "' inconsistent with topology");
    }
    GetMatrix(r, layer.input_weights);
    if (layer.kind == LayerKind::kGru) GetMatrix(r, layer.recurrent_weights);
    Eigen::MatrixXd bias(layer.bias.size(), 1);
    GetMatrix(r, bias);
    layer.bias = bias.col(0);
  }
  if (!r.AtEnd()) throw Error("model: trailing bytes");
  ValidateModel(model);
  return model;
}

void SaveModel(const NetworkModel& model, const std::filesystem::path& path) {
  WriteBytes(path, SerializeModel(model));
}

NetworkModel LoadModel(const std::filesystem::path& path) {
  const std::string bytes = ReadBytes(path);
  return DeserializeModel(std::span<const char>(bytes.data(), bytes.size()));
}

}  // namespace rnx
