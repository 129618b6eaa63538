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

#ifndef RNX_COMMON_H_
#define RNX_COMMON_H_

#include <cstddef>
#include <stdexcept>
#include <string>

namespace rnx {

inline constexpr int kSampleRate = 48000;
inline constexpr std::size_t kFrameSize = 960;  // 20 ms
inline constexpr std::size_t kHopSize = 480;    // 10 ms
inline constexpr std::size_t kNumBins = kFrameSize / 2 + 1;
inline constexpr std::size_t kNumBands = 22;

// Floor added to band energies before taking logs and below which an IRM
// target is undefined.
inline constexpr double kEnergyFloor = 1e-10;
// Regularizer for ratios whose denominator may vanish.
inline constexpr double kTinyEps = 1e-15;

// Every recoverable failure in the library is reported as an rnx::Error.
class Error : public std::runtime_error {
 public:
  explicit Error(const std::string& what) : std::runtime_error(what) {}
};

}  // namespace rnx

#endif  // RNX_COMMON_H_
