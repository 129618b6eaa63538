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

#include <algorithm>
#include <cmath>
#include <cstdint>
#include <cstring>
#include <filesystem>
#include <fstream>
#include <random>
#include <string>
#include <vector>

#include "doctest.h"
#include "rnx/audio_io.h"

namespace fs = std::filesystem;

namespace {

fs::path TempPath(const std::string& name) {
  const fs::path dir = fs::temp_directory_path() / "rnx_audio_io_test";
  fs::create_directories(dir);
  return dir / name;
}

void PutU32(std::vector<unsigned char>& b, std::uint32_t v) {
  for (int i = 0; i < 4; ++i) b.push_back(static_cast<unsigned char>(v >> (8 * i)));
}
void PutU16(std::vector<unsigned char>& b, std::uint16_t v) {
  b.push_back(static_cast<unsigned char>(v));
  b.push_back(static_cast<unsigned char>(v >> 8));
}

std::vector<unsigned char> MakeWav(std::uint16_t format, std::uint16_t channels,
                                   std::uint32_t rate, std::uint16_t bits,
                                   const std::vector<unsigned char>& payload) {
  std::vector<unsigned char> b;
  auto tag = [&](const char* s) { b.insert(b.end(), s, s + 4); };
  tag("RIFF");
  PutU32(b, static_cast<std::uint32_t>(36 + payload.size()));
  tag("WAVE");
  tag("fmt ");
  PutU32(b, 16);
  PutU16(b, format);
  PutU16(b, channels);
  PutU32(b, rate);
  PutU32(b, rate * channels * bits / 8);
  PutU16(b, static_cast<std::uint16_t>(channels * bits / 8));
  PutU16(b, bits);
  tag("data");
  PutU32(b, static_cast<std::uint32_t>(payload.size()));
  b.insert(b.end(), payload.begin(), payload.end());
  return b;
}

std::string ErrorOf(const std::vector<unsigned char>& bytes) {
  try {
    rnx::DecodeWav(bytes);
  } catch (const rnx::Error& e) {
    return e.what();
  }
  return "";
}

}  // namespace

TEST_CASE("raw bytes decode little-endian with 1/32768 scale") {
  const fs::path p = TempPath("tiny.raw");
  {
    std::ofstream f(p, std::ios::binary);
    const unsigned char bytes[] = {0x00, 0x00, 0xFF, 0x7F};
    f.write(reinterpret_cast<const char*>(bytes), 4);
  }
  const rnx::AudioBuffer a = rnx::LoadAudio(p);
  REQUIRE(a.size() == 2);
  CHECK(a.samples[0] == 0.0);
  CHECK(a.samples[1] == 32767.0 / 32768.0);
}

TEST_CASE("header checks") {
  const std::vector<unsigned char> two(4, 0);
  CHECK(ErrorOf(MakeWav(1, 1, 44100, 16, two)).find("unsupported sample rate") !=
        std::string::npos);
  CHECK(ErrorOf(MakeWav(1, 2, 48000, 16, two)).find("unsupported channel count") !=
        std::string::npos);
  CHECK(ErrorOf(MakeWav(1, 1, 48000, 24, std::vector<unsigned char>(6, 0)))
            .find("unsupported codec") != std::string::npos);
  CHECK(ErrorOf({'R', 'I', 'F', 'F'}).find("not a RIFF/WAVE") != std::string::npos);
}

TEST_CASE("float32 wav decodes and clips") {
  std::vector<unsigned char> payload(8);
  const float v[2] = {0.25f, 3.0f};
  std::memcpy(payload.data(), v, 8);
  const rnx::AudioBuffer a = rnx::DecodeWav(MakeWav(3, 1, 48000, 32, payload));
  REQUIRE(a.size() == 2);
  CHECK(a.samples[0] == 0.25);
  CHECK(a.samples[1] == 1.0);
}

TEST_CASE("pcm16 round trip stays within one step") {
  std::mt19937_64 rng(42);
  std::uniform_real_distribution<double> u(-1.0, 1.0);
  rnx::AudioBuffer a;
  a.samples.resize(48000);
  for (double& s : a.samples) s = u(rng);
  for (const char* name : {"rt.wav", "rt.raw"}) {
    const fs::path p = TempPath(name);
    rnx::StoreAudio(a, p);
    const rnx::AudioBuffer b = rnx::LoadAudio(p);
    REQUIRE(b.size() == a.size());
    double worst = 0.0;
    for (std::size_t i = 0; i < a.size(); ++i) {
      worst = std::max(worst, std::abs(a.samples[i] - b.samples[i]));
    }
    CHECK(worst <= 1.0 / 32768.0);
  }
}

TEST_CASE("store clips to the PCM-16 range") {
  rnx::AudioBuffer a;
  a.samples = {2.0, -2.0};
  const fs::path p = TempPath("clip.wav");
  rnx::StoreAudio(a, p);
  const rnx::AudioBuffer b = rnx::LoadAudio(p);
  CHECK(b.samples[0] == 32767.0 / 32768.0);
  CHECK(b.samples[1] == -1.0);
  CHECK(rnx::QuantizePcm16(0.5) == 16384);
}

TEST_CASE("empty buffer gives a valid zero-frame file") {
  const fs::path p = TempPath("empty.wav");
  rnx::StoreAudio(rnx::AudioBuffer{}, p);
  CHECK(fs::file_size(p) == 44);
  CHECK(rnx::LoadAudio(p).empty());
}

TEST_CASE("store refuses other sample rates") {
  rnx::AudioBuffer a;
  a.samples = {0.0};
  a.sample_rate = 16000;
  CHECK_THROWS_WITH_AS(rnx::StoreAudio(a, TempPath("x.wav")),
                       doctest::Contains("unsupported sample rate"), rnx::Error);
}

TEST_CASE("concat") {
  auto make = [](std::size_t n, double v) {
    rnx::AudioBuffer a;
    a.samples.assign(n, v);
    return a;
  };
  const rnx::AudioBuffer a = make(10, 1.0), b = make(20, 2.0), c = make(5, 3.0);
  const std::vector<rnx::AudioBuffer> ab = {a, b};
  CHECK(rnx::ConcatAudio(ab).size() == 30);
  const std::vector<rnx::AudioBuffer> one = {a};
  CHECK(rnx::ConcatAudio(one).samples == a.samples);
  const std::vector<rnx::AudioBuffer> abc = {a, b, c};
  const std::vector<rnx::AudioBuffer> nested = {rnx::ConcatAudio(ab), c};
  CHECK(rnx::ConcatAudio(abc).samples == rnx::ConcatAudio(nested).samples);
}
