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

#ifndef RNX_DATASET_H_
#define RNX_DATASET_H_

#include <cstdint>
#include <deque>
#include <filesystem>
#include <random>
#include <span>
#include <vector>

#include "rnx/audio_io.h"
#include "rnx/bands.h"
#include "rnx/features.h"

namespace rnx {

// 22 gains + 1 VAD label per row.
inline constexpr std::size_t kTargetDim = kNumBands + 1;
// Leading hops of every utterance that are not emitted as training frames:
// by then the pitch history holds only real signal and the derivative
// history is populated.
inline constexpr std::size_t kWarmupHops = 4;

struct TrainingFrame {
  std::vector<double> features;  // raw, extra trio not standardized
  BandVector gains{};            // IRM targets, kIrmSentinel allowed
  double vad = 0.0;              // 0 or 1
};

// In-memory image of a .rnxf feature file:
//   "RNXF" | version u32 = 1 | feature_dim u32 | target_dim u32 = 23
//   | frame_count u64 | rows of (feature_dim + 23) f32
//     [features | 22 gains | vad]
class FeatureDataset {
 public:
  explicit FeatureDataset(std::size_t feature_dim = kReferenceFeatureDim);

  std::size_t feature_dim() const { return feature_dim_; }
  FeatureMode mode() const { return ModeFromDim(feature_dim_); }
  std::size_t row_size() const { return feature_dim_ + kTargetDim; }
  std::size_t frames() const { return data_.size() / row_size(); }
  bool empty() const { return data_.empty(); }

  void Append(const TrainingFrame& frame);
  std::span<const float> Row(std::size_t i) const;
  std::span<const float> Features(std::size_t i) const;
  std::span<const float> Gains(std::size_t i) const;
  float Vad(std::size_t i) const;

  // Raw centroid/bandwidth/roll-off of every frame (extended mode only).
  std::vector<std::array<double, kNumExtraFeatures>> ExtraColumns() const;

  std::string Serialize() const;
  static FeatureDataset Deserialize(std::span<const char> bytes);
  void Save(const std::filesystem::path& path) const;
  static FeatureDataset Load(const std::filesystem::path& path);

 private:
  std::size_t feature_dim_;
  std::vector<float> data_;
};

// Voice activity labels from clean-speech frame energy: 1 iff the energy
// exceeds 0.1 x the running median of the trailing 100 frames (including
// this one) and 1e-7 absolute.
class VadLabeler {
 public:
  static constexpr std::size_t kWindow = 100;
  static constexpr double kRelativeThreshold = 0.1;
  static constexpr double kAbsoluteThreshold = 1e-7;

  // Adds the frame to the window and labels it.
  double Label(double clean_frame_energy);
  double running_median() const;

 private:
  std::deque<double> window_;
};

double VadTarget(double clean_frame_energy, double running_median);

struct MixConfig {
  double snr_min_db = -5.0;
  double snr_max_db = 20.0;
  double gain_min_db = -6.0;
  double gain_max_db = 6.0;
  std::uint64_t seed = 0;
  std::size_t frame_target = 0;  // 0: one pass over the clean corpus
};

// Per-utterance randomness, drawn once and then applied deterministically.
struct MixParams {
  double snr_db = 0.0;
  double gain_db = 0.0;
  std::size_t noise_offset = 0;
};

MixParams DrawMixParams(const MixConfig& config, std::size_t noise_length,
                        std::mt19937_64& rng);

struct MixResult {
  AudioBuffer noisy;
  AudioBuffer clean;  // clean component at the level used in `noisy`
  AudioBuffer noise;  // noise component at the level used in `noisy`
  std::vector<TrainingFrame> frames;
};

// Loops/truncates the noise to the clean length, scales it to params.snr_db
// against the clean utterance, applies the common level gain (and pulls the
// peak under full scale if needed), then labels every hop after warm-up:
// features from the noisy signal, IRM gains from clean vs noisy band
// energies, VAD from the clean frame energy. Throws on a silent clean
// utterance or empty noise.
MixResult MixAndLabel(const AudioBuffer& clean, const AudioBuffer& noise,
                      const MixParams& params, FeatureMode mode);

// Draws the parameters from config.seed and mixes one utterance.
MixResult MixAndLabel(const AudioBuffer& clean, const AudioBuffer& noise,
                      const MixConfig& config, FeatureMode mode);

// Mixes every clean utterance against the concatenated noise corpus,
// cycling through the clean list until config.frame_target frames exist
// (exactly that many are kept). Silent clean utterances are skipped.
FeatureDataset BuildDataset(std::span<const AudioBuffer> clean,
                            std::span<const AudioBuffer> noise,
                            const MixConfig& config, FeatureMode mode);

// Audio files (.wav/.raw/.pcm) under `path`, sorted by name, or `path`
// itself when it is a file.
std::vector<std::filesystem::path> ListAudioFiles(
    const std::filesystem::path& path);

}  // namespace rnx

#endif  // RNX_DATASET_H_
