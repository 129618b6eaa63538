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

#ifndef RNX_AUDIO_IO_H_
#define RNX_AUDIO_IO_H_

#include <cstdint>
#include <filesystem>
#include <span>
#include <string_view>
#include <vector>

#include "rnx/common.h"

namespace rnx {

enum class AudioFormat { kWav, kRaw };

// Mono 48 kHz audio with samples normalized to [-1, 1].
struct AudioBuffer {
  std::vector<double> samples;
  int sample_rate = kSampleRate;

  std::size_t size() const { return samples.size(); }
  bool empty() const { return samples.empty(); }
};

// Picks the format from the file extension: ".raw"/".pcm" map to kRaw,
// everything else to kWav.
AudioFormat FormatFromPath(const std::filesystem::path& path);

// WAV must be mono PCM-16 or float-32 at 48 kHz. RAW is headerless signed
// 16-bit little-endian mono. PCM-16 values are divided by 32768; float input
// is clipped to [-1, 1]. Throws Error for anything else, nothing is
// resampled.
AudioBuffer LoadAudio(const std::filesystem::path& path, AudioFormat format);
AudioBuffer LoadAudio(const std::filesystem::path& path);

// Writes PCM-16 (WAV or RAW). Samples are clipped to [-1, 1 - 1/32768] and
// rounded to the nearest step.
void StoreAudio(const AudioBuffer& buffer, const std::filesystem::path& path,
                AudioFormat format);
void StoreAudio(const AudioBuffer& buffer, const std::filesystem::path& path);

AudioBuffer ConcatAudio(std::span<const AudioBuffer> buffers);

// PCM-16 quantization used by StoreAudio, exposed for tests.
std::int16_t QuantizePcm16(double sample);

// Decodes an in-memory WAV image. Used by LoadAudio and by tests that build
// malformed headers.
AudioBuffer DecodeWav(std::span<const unsigned char> bytes,
                      std::string_view origin = "<memory>");

}  // namespace rnx

#endif  // RNX_AUDIO_IO_H_
