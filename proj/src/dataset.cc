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

#include "rnx/dataset.h"

#include <algorithm>
#include <cmath>
#include <cstring>

#include "rnx/binary_io.h"
#include "rnx/feature_extractor.h"

namespace rnx {
namespace {

constexpr char kMagic[4] = {'R', 'N', 'X', 'F'};
constexpr std::uint32_t kDatasetVersion = 1;

double Energy(std::span<const double> x) {
  double acc = 0.0;
  for (double v : x) acc += v * v;
  return acc;
}

double DbToGain(double db) { return std::pow(10.0, db / 20.0); }

}  // namespace

FeatureDataset::FeatureDataset(std::size_t feature_dim)
    : feature_dim_(feature_dim) {
  ModeFromDim(feature_dim);
}

void FeatureDataset::Append(const TrainingFrame& frame) {
  if (frame.features.size() != feature_dim_) {
    throw Error("training frame has " + std::to_string(frame.features.size()) +
                " features, dataset expects " + std::to_string(feature_dim_));
  }
  for (double v : frame.features) data_.push_back(static_cast<float>(v));
  for (double g : frame.gains) data_.push_back(static_cast<float>(g));
  data_.push_back(static_cast<float>(frame.vad));
}

std::span<const float> FeatureDataset::Row(std::size_t i) const {
  if (i >= frames()) throw Error("dataset row out of range");
  return std::span<const float>(data_).subspan(i * row_size(), row_size());
}

std::span<const float> FeatureDataset::Features(std::size_t i) const {
  return Row(i).first(feature_dim_);
}

std::span<const float> FeatureDataset::Gains(std::size_t i) const {
  return Row(i).subspan(feature_dim_, kNumBands);
}

float FeatureDataset::Vad(std::size_t i) const { return Row(i).back(); }

std::vector<std::array<double, kNumExtraFeatures>> FeatureDataset::ExtraColumns()
    const {
  if (mode() != FeatureMode::kExtended) {
    throw Error("extra feature columns exist only in extended mode");
  }
  std::vector<std::array<double, kNumExtraFeatures>> out(frames());
  for (std::size_t i = 0; i < frames(); ++i) {
    const auto f = Features(i);
    for (std::size_t j = 0; j < kNumExtraFeatures; ++j) {
      out[i][j] = f[kCentroidIndex + j];
    }
  }
  return out;
}

std::string FeatureDataset::Serialize() const {
  ByteWriter w;
  w.Bytes(kMagic, 4);
  w.U32(kDatasetVersion);
  w.U32(static_cast<std::uint32_t>(feature_dim_));
  w.U32(static_cast<std::uint32_t>(kTargetDim));
  w.U64(frames());
  w.Bytes(data_.data(), data_.size() * sizeof(float));
  return w.Take();
}

FeatureDataset FeatureDataset::Deserialize(std::span<const char> bytes) {
  ByteReader r(bytes, "feature file");
  char magic[4];
  r.Bytes(magic, 4);
  if (std::memcmp(magic, kMagic, 4) != 0) throw Error("feature file: bad magic");
  if (const std::uint32_t v = r.U32(); v != kDatasetVersion) {
    throw Error("feature file: unsupported version " + std::to_string(v));
  }
  const std::uint32_t feature_dim = r.U32();
  if (const std::uint32_t t = r.U32(); t != kTargetDim) {
    throw Error("feature file: target_dim must be 23, got " + std::to_string(t));
  }
  FeatureDataset ds(feature_dim);
  const std::uint64_t count = r.U64();
  const std::size_t floats = static_cast<std::size_t>(count) * ds.row_size();
  if (r.remaining() != floats * sizeof(float)) {
    throw Error("feature file: size does not match frame_count");
  }
  ds.data_.resize(floats);
  r.Bytes(ds.data_.data(), floats * sizeof(float));
  return ds;
}

void FeatureDataset::Save(const std::filesystem::path& path) const {
  WriteBytes(path, Serialize());
}

FeatureDataset FeatureDataset::Load(const std::filesystem::path& path) {
  const std::string bytes = ReadBytes(path);
  return Deserialize(std::span<const char>(bytes.data(), bytes.size()));
}

double VadTarget(double clean_frame_energy, double running_median) {
  return (clean_frame_energy > VadLabeler::kRelativeThreshold * running_median &&
          clean_frame_energy > VadLabeler::kAbsoluteThreshold)
             ? 1.0
             : 0.0;
}

double VadLabeler::Label(double clean_frame_energy) {
  window_.push_back(clean_frame_energy);
  if (window_.size() > kWindow) window_.pop_front();
  return VadTarget(clean_frame_energy, running_median());
}

double VadLabeler::running_median() const {
  if (window_.empty()) return 0.0;
  std::vector<double> v(window_.begin(), window_.end());
  const std::size_t mid = v.size() / 2;
  std::nth_element(v.begin(), v.begin() + mid, v.end());
  if (v.size() % 2 == 1) return v[mid];
  const double upper = v[mid];
  const double lower = *std::max_element(v.begin(), v.begin() + mid);
  return 0.5 * (lower + upper);
}

MixParams DrawMixParams(const MixConfig& config, std::size_t noise_length,
                        std::mt19937_64& rng) {
  if (config.snr_min_db > config.snr_max_db ||
      config.gain_min_db > config.gain_max_db) {
    throw Error("mix: range minimum exceeds maximum");
  }
  std::uniform_real_distribution<double> snr(config.snr_min_db, config.snr_max_db);
  std::uniform_real_distribution<double> gain(config.gain_min_db,
                                              config.gain_max_db);
  MixParams p;
  p.snr_db = snr(rng);
  p.gain_db = gain(rng);
  p.noise_offset = noise_length == 0
                       ? 0
                       : std::uniform_int_distribution<std::size_t>(
                             0, noise_length - 1)(rng);
  return p;
}

MixResult MixAndLabel(const AudioBuffer& clean, const AudioBuffer& noise,
                      const MixParams& params, FeatureMode mode) {
  if (clean.empty() || noise.empty()) throw Error("mix: empty clean or noise input");
  const double clean_energy = Energy(clean.samples);
  if (clean_energy <= kEnergyFloor) throw Error("mix: silent clean utterance rejected");

  const std::size_t n = clean.size();
  MixResult out;
  out.clean = clean;
  out.noise.samples.resize(n);
  for (std::size_t i = 0; i < n; ++i) {
    out.noise.samples[i] = noise.samples[(params.noise_offset + i) % noise.size()];
  }
  const double noise_energy = Energy(out.noise.samples);
  double noise_scale = 0.0;
  if (noise_energy > 0.0) {
    noise_scale = std::sqrt(clean_energy /
                            (noise_energy * std::pow(10.0, params.snr_db / 10.0)));
  }
  double level = DbToGain(params.gain_db);
  double peak = 0.0;
  for (std::size_t i = 0; i < n; ++i) {
    peak = std::max(peak, std::abs(level * (clean.samples[i] +
                                            noise_scale * out.noise.samples[i])));
  }
  if (peak > 0.999) level *= 0.999 / peak;
  for (std::size_t i = 0; i < n; ++i) {
    out.clean.samples[i] = level * clean.samples[i];
    out.noise.samples[i] *= level * noise_scale;
  }
  out.noisy.samples.resize(n);
  for (std::size_t i = 0; i < n; ++i) {
    out.noisy.samples[i] = out.clean.samples[i] + out.noise.samples[i];
  }

  FeatureExtractor extractor(mode);
  VadLabeler vad;
  std::array<double, kFrameSize> clean_frame{};
  const std::size_t hops = n / kHopSize;
  for (std::size_t h = 0; h < hops; ++h) {
    const std::span<const double> noisy_hop(out.noisy.samples.data() + h * kHopSize,
                                            kHopSize);
    const FrameAnalysis a = extractor.Process(noisy_hop);
    std::copy(clean_frame.begin() + kHopSize, clean_frame.end(), clean_frame.begin());
    std::copy_n(out.clean.samples.begin() + static_cast<std::ptrdiff_t>(h * kHopSize),
                kHopSize, clean_frame.begin() + kHopSize);
    const double label = vad.Label(Energy(clean_frame));
    if (h < kWarmupHops) continue;
    TrainingFrame frame;
    frame.features = a.features.values;
    frame.gains = ComputeIrm(BandEnergies(AnalyzeFrame(clean_frame)), a.energies);
    frame.vad = label;
    out.frames.push_back(std::move(frame));
  }
  return out;
}

MixResult MixAndLabel(const AudioBuffer& clean, const AudioBuffer& noise,
                      const MixConfig& config, FeatureMode mode) {
  std::mt19937_64 rng(config.seed);
  return MixAndLabel(clean, noise, DrawMixParams(config, noise.size(), rng), mode);
}

FeatureDataset BuildDataset(std::span<const AudioBuffer> clean,
                            std::span<const AudioBuffer> noise,
                            const MixConfig& config, FeatureMode mode) {
  if (clean.empty()) throw Error("mix: empty clean corpus");
  const AudioBuffer noise_track = ConcatAudio(noise);
  if (noise_track.empty()) throw Error("mix: empty noise corpus");

  FeatureDataset ds(FeatureDim(mode));
  std::mt19937_64 rng(config.seed);
  for (;;) {
    std::size_t produced = 0;
    for (const AudioBuffer& utterance : clean) {
      const MixParams params = DrawMixParams(config, noise_track.size(), rng);
      if (Energy(utterance.samples) <= kEnergyFloor) continue;
      const MixResult mix = MixAndLabel(utterance, noise_track, params, mode);
      for (const TrainingFrame& f : mix.frames) {
        if (config.frame_target > 0 && ds.frames() >= config.frame_target) break;
        ds.Append(f);
        ++produced;
      }
      if (config.frame_target > 0 && ds.frames() >= config.frame_target) return ds;
    }
    if (config.frame_target == 0) break;
    if (produced == 0) throw Error("mix: clean corpus yields no frames");
  }
  if (ds.empty()) throw Error("mix: clean corpus yields no frames");
  return ds;
}

std::vector<std::filesystem::path> ListAudioFiles(
    const std::filesystem::path& path) {
  namespace fs = std::filesystem;
  if (!fs::exists(path)) throw Error("no such file or directory: " + path.string());
  if (!fs::is_directory(path)) return {path};
  std::vector<fs::path> files;
  for (const auto& entry : fs::directory_iterator(path)) {
    if (!entry.is_regular_file()) continue;
    std::string ext = entry.path().extension().string();
    std::transform(ext.begin(), ext.end(), ext.begin(),
                   [](unsigned char c) { return std::tolower(c); });
    if (ext == ".wav" || ext == ".raw" || ext == ".pcm") files.push_back(entry.path());
  }
  std::sort(files.begin(), files.end());
  if (files.empty()) throw Error("no audio files in " + path.string());
  return files;
}

}  // namespace rnx
