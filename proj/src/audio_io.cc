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

#include "rnx/audio_io.h"

#include <algorithm>
#include <cmath>
#include <cstdint>
#include <cctype>
#include <cstring>
#include <fstream>
#include <iterator>
#include <string>

namespace rnx {
namespace {

constexpr double kPcmScale = 32768.0;

std::vector<unsigned char> ReadFile(const std::filesystem::path& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw Error("cannot open " + path.string());
  return std::vector<unsigned char>(std::istreambuf_iterator<char>(in),
                                    std::istreambuf_iterator<char>());
}

std::uint16_t ReadU16(const unsigned char* p) {
  return static_cast<std::uint16_t>(p[0] | (p[1] << 8));
}

std::uint32_t ReadU32(const unsigned char* p) {
  return static_cast<std::uint32_t>(p[0]) |
         (static_cast<std::uint32_t>(p[1]) << 8) |
         (static_cast<std::uint32_t>(p[2]) << 16) |
         (static_cast<std::uint32_t>(p[3]) << 24);
}

void PutU16(std::string& out, std::uint16_t v) {
  out.push_back(static_cast<char>(v & 0xff));
  out.push_back(static_cast<char>(v >> 8));
}

void PutU32(std::string& out, std::uint32_t v) {
  for (int i = 0; i < 4; ++i) out.push_back(static_cast<char>((v >> (8 * i)) & 0xff));
}

std::vector<double> DecodePcm16(const unsigned char* data, std::size_t bytes) {
  std::vector<double> samples(bytes / 2);
  for (std::size_t i = 0; i < samples.size(); ++i) {
    const auto v = static_cast<std::int16_t>(ReadU16(data + 2 * i));
    samples[i] = v / kPcmScale;
  }
  return samples;
}

std::string EncodePcm16(const AudioBuffer& buffer) {
  std::string out;
  out.reserve(buffer.size() * 2);
  for (double s : buffer.samples) {
    PutU16(out, static_cast<std::uint16_t>(QuantizePcm16(s)));
  }
  return out;
}

void WriteFile(const std::filesystem::path& path, const std::string& bytes) {
  std::ofstream out(path, std::ios::binary | std::ios::trunc);
  if (!out) throw Error("cannot open " + path.string() + " for writing");
  out.write(bytes.data(), static_cast<std::streamsize>(bytes.size()));
  if (!out) throw Error("write failed: " + path.string());
}

}  // namespace

AudioFormat FormatFromPath(const std::filesystem::path& path) {
  std::string ext = path.extension().string();
  std::transform(ext.begin(), ext.end(), ext.begin(),
                 [](unsigned char c) { return std::tolower(c); });
  return (ext == ".raw" || ext == ".pcm") ? AudioFormat::kRaw
                                          : AudioFormat::kWav;
}

std::int16_t QuantizePcm16(double sample) {
  if (!std::isfinite(sample)) sample = 0.0;
  const double clipped = std::clamp(sample, -1.0, 1.0 - 1.0 / kPcmScale);
  return static_cast<std::int16_t>(std::lround(clipped * kPcmScale));
}

AudioBuffer DecodeWav(std::span<const unsigned char> bytes,
                      std::string_view origin) {
  const std::string where(origin);
  if (bytes.size() < 12 || std::memcmp(bytes.data(), "RIFF", 4) != 0 ||
      std::memcmp(bytes.data() + 8, "WAVE", 4) != 0) {
    throw Error(where + ": not a RIFF/WAVE file");
  }
  bool have_fmt = false;
  std::uint16_t audio_format = 0, channels = 0, bits = 0;
  std::uint32_t rate = 0;
  std::size_t pos = 12;
  while (pos + 8 <= bytes.size()) {
    const unsigned char* chunk = bytes.data() + pos;
    const std::uint32_t size = ReadU32(chunk + 4);
    const std::size_t body = pos + 8;
    if (std::memcmp(chunk, "fmt ", 4) == 0) {
      if (size < 16 || body + 16 > bytes.size()) {
        throw Error(where + ": truncated fmt chunk");
      }
      audio_format = ReadU16(bytes.data() + body);
      channels = ReadU16(bytes.data() + body + 2);
      rate = ReadU32(bytes.data() + body + 4);
      bits = ReadU16(bytes.data() + body + 14);
      have_fmt = true;
    } else if (std::memcmp(chunk, "data", 4) == 0) {
      if (!have_fmt) throw Error(where + ": data chunk before fmt chunk");
      if (channels != 1) {
        throw Error(where + ": unsupported channel count " +
                    std::to_string(channels));
      }
      if (rate != static_cast<std::uint32_t>(kSampleRate)) {
        throw Error(where + ": unsupported sample rate " +
                    std::to_string(rate));
      }
      const std::size_t avail =
          std::min<std::size_t>(size, bytes.size() - body);
      AudioBuffer out;
      if (audio_format == 1 && bits == 16) {
        out.samples = DecodePcm16(bytes.data() + body, avail);
      } else if (audio_format == 3 && bits == 32) {
        out.samples.resize(avail / 4);
        for (std::size_t i = 0; i < out.samples.size(); ++i) {
          const std::uint32_t u = ReadU32(bytes.data() + body + 4 * i);
          float f;
          std::memcpy(&f, &u, sizeof f);
          out.samples[i] =
              std::isfinite(f) ? std::clamp<double>(f, -1.0, 1.0) : 0.0;
        }
      } else {
        throw Error(where + ": unsupported codec (format " +
                    std::to_string(audio_format) + ", " +
                    std::to_string(bits) + " bits)");
      }
      return out;
    }
    pos = body + size + (size & 1);
  }
  throw Error(where + ": no data chunk");
}

AudioBuffer LoadAudio(const std::filesystem::path& path, AudioFormat format) {
  const std::vector<unsigned char> bytes = ReadFile(path);
  if (format == AudioFormat::kWav) return DecodeWav(bytes, path.string());
  if (bytes.size() % 2 != 0) {
    throw Error(path.string() + ": odd byte count for 16-bit RAW");
  }
  AudioBuffer out;
  out.samples = DecodePcm16(bytes.data(), bytes.size());
  return out;
}

AudioBuffer LoadAudio(const std::filesystem::path& path) {
  return LoadAudio(path, FormatFromPath(path));
}

void StoreAudio(const AudioBuffer& buffer, const std::filesystem::path& path,
                AudioFormat format) {
  if (buffer.sample_rate != kSampleRate) {
    throw Error("unsupported sample rate " +
                std::to_string(buffer.sample_rate));
  }
  const std::string pcm = EncodePcm16(buffer);
  if (format == AudioFormat::kRaw) {
    WriteFile(path, pcm);
    return;
  }
  std::string out;
  out.reserve(44 + pcm.size());
  out += "RIFF";
  PutU32(out, static_cast<std::uint32_t>(36 + pcm.size()));
  out += "WAVEfmt ";
  PutU32(out, 16);
  PutU16(out, 1);  // PCM
  PutU16(out, 1);  // mono
  PutU32(out, kSampleRate);
  PutU32(out, kSampleRate * 2);
  PutU16(out, 2);
  PutU16(out, 16);
  out += "data";
  PutU32(out, static_cast<std::uint32_t>(pcm.size()));
  out += pcm;
  WriteFile(path, out);
}

void StoreAudio(const AudioBuffer& buffer, const std::filesystem::path& path) {
  StoreAudio(buffer, path, FormatFromPath(path));
}

AudioBuffer ConcatAudio(std::span<const AudioBuffer> buffers) {
  AudioBuffer out;
  std::size_t total = 0;
  for (const AudioBuffer& b : buffers) {
    if (b.sample_rate != kSampleRate) {
      throw Error("unsupported sample rate " + std::to_string(b.sample_rate));
    }
    total += b.size();
  }
  out.samples.reserve(total);
  for (const AudioBuffer& b : buffers) {
    out.samples.insert(out.samples.end(), b.samples.begin(), b.samples.end());
  }
  return out;
}

}  // namespace rnx
