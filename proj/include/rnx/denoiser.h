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

#ifndef RNX_DENOISER_H_
#define RNX_DENOISER_H_

#include <chrono>
#include <filesystem>
#include <functional>
#include <optional>
#include <span>
#include <vector>

#include "rnx/audio_io.h"
#include "rnx/bands.h"
#include "rnx/dsp.h"
#include "rnx/feature_extractor.h"
#include "rnx/neural.h"

namespace rnx {

struct DenoiseOptions {
  bool bypass_mask = false;
  bool bypass_pitch = false;
};

// What happened on one hop.
struct HopReport {
  std::int64_t frame = 0;
  BandVector mask{};  // m as produced by the network (or injected)
  double vad = 0.0;
};

// Streaming denoiser for one audio stream. The model is shared and must
// outlive the denoiser. Output lags input by exactly one hop.
class Denoiser {
 public:
  explicit Denoiser(const NetworkModel& model, DenoiseOptions options = {});

  // Consumes exactly kHopSize samples and writes kHopSize samples. With
  // `mask_override` the network output is replaced by the given band mask
  // (the network still runs so its state advances).
  HopReport ProcessHop(std::span<const double> input, std::span<double> output,
                       const BandVector* mask_override = nullptr);

  // Accepts any chunk size; returns every finished hop of output so far.
  std::vector<double> Process(std::span<const double> input);

  const DenoiseOptions& options() const { return options_; }
  std::int64_t frames() const { return extractor_.frames(); }
  const std::vector<HopReport>& reports() const { return reports_; }
  // Wall-clock time spent in ProcessHop.
  std::chrono::nanoseconds busy_time() const { return busy_; }

 private:
  const NetworkModel& model_;
  DenoiseOptions options_;
  FeatureExtractor extractor_;
  HiddenState hidden_;
  SynthesisCarry carry_;
  std::vector<double> pending_;
  std::vector<HopReport> reports_;
  std::chrono::nanoseconds busy_{0};
};

struct DenoiseSummary {
  std::size_t frames = 0;
  double mean_vad = 0.0;
  BandVector mean_gain{};
  double mean_hop_ms = 0.0;
  std::vector<HopReport> hops;
};

// Whole-buffer convenience: pads to whole hops, flushes one extra hop and
// drops the first so the output is time-aligned and as long as the input.
// `mask_source`, when set, supplies a mask override for each hop index.
using MaskSource = std::function<std::optional<BandVector>(std::size_t hop)>;

AudioBuffer DenoiseBuffer(const NetworkModel& model, const AudioBuffer& input,
                          const DenoiseOptions& options,
                          DenoiseSummary* summary = nullptr,
                          const MaskSource& mask_source = {});

DenoiseSummary DenoiseFile(const NetworkModel& model,
                           const std::filesystem::path& in_path,
                           const std::filesystem::path& out_path,
                           const DenoiseOptions& options);

// Ground-truth IRM for every hop of a clean/noisy pair, framed exactly like
// the denoiser frames the noisy input. Bands with no defined ratio get 1.
std::vector<BandVector> OracleMasks(const AudioBuffer& clean,
                                    const AudioBuffer& noisy);

// Text sidecar, one line per hop: frame=<n> vad=<f> gains=<22 values>.
void WriteMaskDump(const std::vector<HopReport>& hops,
                   const std::filesystem::path& path);

}  // namespace rnx

#endif  // RNX_DENOISER_H_
