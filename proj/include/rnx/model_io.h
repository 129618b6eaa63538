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

#ifndef RNX_MODEL_IO_H_
#define RNX_MODEL_IO_H_

#include <filesystem>
#include <span>
#include <string>

#include "rnx/neural.h"

namespace rnx {

// .rnxm layout, little-endian:
//   "RNXM" | version u32 | feature_dim u32 | flags u32 (bit0 = extended)
//   | 3 x f32 means | 3 x f32 stds | layer_count u32
//   | per layer: name_len u8, name, kind u8, activation u8, in_dim u32,
//     out_dim u32, f32 payload row-major (dense: W, b; gru: W, U, b).
std::string SerializeModel(const NetworkModel& model);
NetworkModel DeserializeModel(std::span<const char> bytes);

void SaveModel(const NetworkModel& model, const std::filesystem::path& path);
NetworkModel LoadModel(const std::filesystem::path& path);

}  // namespace rnx

#endif  // RNX_MODEL_IO_H_
