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

#ifndef RNX_METRICS_H_
#define RNX_METRICS_H_

#include <filesystem>
#include <string>
#include <vector>

#include "rnx/audio_io.h"

namespace rnx {

inline constexpr double kSegSnrFloorDb = -10.0;
inline constexpr double kSegSnrCeilingDb = 35.0;
// Frames whose clean energy is below this are not scored.
inline constexpr double kSegSnrEnergyFloor = 1e-10;
// Magnitude offset inside the log-spectral distance.
inline constexpr double kLsdEpsilon = 1e-6;

struct MetricValue {
  double db = 0.0;
  std::size_t frames = 0;
};

// Mean over non-overlapping 20 ms frames of the per-frame SNR, each frame
// clamped to [-10, 35] dB. Throws on length mismatch or when no frame has
// clean energy above the floor.
MetricValue SegmentalSnr(const AudioBuffer& clean, const AudioBuffer& test);

// Mean over non-overlapping windowed 20 ms frames of the RMS difference of
// 20 log10(|X| + eps) across all bins.
MetricValue LogSpectralDistance(const AudioBuffer& clean, const AudioBuffer& test);

struct MetricsReport {
  std::string system;
  std::string condition;
  double seg_snr_db = 0.0;
  double lsd_db = 0.0;
  std::size_t frames = 0;
};

// One test condition (noise type x SNR) of an A/B run; all four buffers
// are time-aligned.
struct AbCondition {
  std::string condition;
  AudioBuffer clean;
  AudioBuffer noisy;
  AudioBuffer system_a;
  AudioBuffer system_b;
};

// Scores noisy input and both systems per condition, plus frame-weighted
// aggregates under condition "all" and delta rows "<b>-minus-<a>",
// "<a>-minus-noisy", "<b>-minus-noisy". Reports numbers only.
std::vector<MetricsReport> AbCompare(const std::vector<AbCondition>& conditions,
                                     const std::string& name_a,
                                     const std::string& name_b);

// system=<name> condition=<key> seg_snr_db=<f> lsd_db=<f> frames=<n>
std::string FormatReportLine(const MetricsReport& r);
std::string FormatReport(const std::vector<MetricsReport>& reports);
std::vector<MetricsReport> ParseReport(const std::string& text);

// Writes <dir>/<condition>/{clean,noisy,<a>,<b>}.wav for external scorers.
void ExportConditionWavs(const std::vector<AbCondition>& conditions,
                         const std::string& name_a, const std::string& name_b,
                         const std::filesystem::path& dir);

}  // namespace rnx

#endif  // RNX_METRICS_H_
