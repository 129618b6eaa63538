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

#include "rnx/denoiser.h"

#include <cmath>
#include <cstdio>
#include <fstream>

namespace rnx {

Denoiser::Denoiser(const NetworkModel& model, DenoiseOptions options)
    : model_(model), options_(options), extractor_(model.mode) {
  ValidateModel(model);
}

HopReport Denoiser::ProcessHop(std::span<const double> input,
                               std::span<double> output,
                               const BandVector* mask_override) {
  if (input.size() != kHopSize || output.size() != kHopSize) {
    throw Error("denoiser hop must be exactly " + std::to_string(kHopSize) +
                " samples");
  }
  const auto start = std::chrono::steady_clock::now();
  const FrameAnalysis a = extractor_.Process(input);

  std::vector<double> features = a.features.values;
  if (model_.mode == FeatureMode::kExtended) {
    StandardizeExtras(features, model_.stats);
  }
  NetworkOutput net = NetworkForward(model_, features, hidden_);
  hidden_ = std::move(net.state);

  HopReport report;
  report.frame = a.spectrum.frame_index;
  report.mask = mask_override != nullptr ? *mask_override : net.mask;
  report.vad = net.vad;

  FrameSpectrum y = options_.bypass_pitch
                        ? a.spectrum
                        : CombFilter(a.spectrum, a.pitch_spectrum, a.pitch_corr);
  if (!options_.bypass_mask) y = ApplyGains(y, InterpolateGains(report.mask));
  SynthesizeFrame(y, carry_, output);

  busy_ += std::chrono::steady_clock::now() - start;
  reports_.push_back(report);
  return report;
}

std::vector<double> Denoiser::Process(std::span<const double> input) {
  pending_.insert(pending_.end(), input.begin(), input.end());
  const std::size_t hops = pending_.size() / kHopSize;
  std::vector<double> out(hops * kHopSize);
  for (std::size_t h = 0; h < hops; ++h) {
    ProcessHop(std::span<const double>(pending_).subspan(h * kHopSize, kHopSize),
               std::span<double>(out).subspan(h * kHopSize, kHopSize));
  }
  pending_.erase(pending_.begin(),
                 pending_.begin() + static_cast<std::ptrdiff_t>(hops * kHopSize));
  return out;
}

AudioBuffer DenoiseBuffer(const NetworkModel& model, const AudioBuffer& input,
                          const DenoiseOptions& options, DenoiseSummary* summary,
                          const MaskSource& mask_source) {
  const std::size_t n = input.size();
  const std::size_t hops = (n + kHopSize - 1) / kHopSize + 1;
  std::vector<double> padded(hops * kHopSize, 0.0);
  std::copy(input.samples.begin(), input.samples.end(), padded.begin());

  Denoiser denoiser(model, options);
  std::vector<double> out(hops * kHopSize);
  for (std::size_t h = 0; h < hops; ++h) {
    std::optional<BandVector> mask;
    if (mask_source) mask = mask_source(h);
    denoiser.ProcessHop(std::span<const double>(padded).subspan(h * kHopSize, kHopSize),
                        std::span<double>(out).subspan(h * kHopSize, kHopSize),
                        mask ? &*mask : nullptr);
  }

  AudioBuffer result;
  result.samples.assign(out.begin() + kHopSize,
                        out.begin() + static_cast<std::ptrdiff_t>(kHopSize + n));
  if (summary != nullptr) {
    *summary = DenoiseSummary{};
    summary->hops = denoiser.reports();
    summary->frames = summary->hops.size();
    for (const HopReport& r : summary->hops) {
      summary->mean_vad += r.vad;
      for (std::size_t b = 0; b < kNumBands; ++b) {
        summary->mean_gain[b] += std::sqrt(r.mask[b]);
      }
    }
    if (summary->frames > 0) {
      const double inv = 1.0 / static_cast<double>(summary->frames);
      summary->mean_vad *= inv;
      for (double& g : summary->mean_gain) g *= inv;
      summary->mean_hop_ms =
          std::chrono::duration<double, std::milli>(denoiser.busy_time()).count() *
          inv;
    }
  }
  return result;
}

DenoiseSummary DenoiseFile(const NetworkModel& model,
                           const std::filesystem::path& in_path,
                           const std::filesystem::path& out_path,
                           const DenoiseOptions& options) {
  const AudioBuffer input = LoadAudio(in_path);
  DenoiseSummary summary;
  const AudioBuffer output = DenoiseBuffer(model, input, options, &summary);
  StoreAudio(output, out_path);
  return summary;
}

std::vector<BandVector> OracleMasks(const AudioBuffer& clean,
                                    const AudioBuffer& noisy) {
  if (clean.size() != noisy.size()) throw Error("oracle mask: length mismatch");
  const std::size_t hops = (clean.size() + kHopSize - 1) / kHopSize + 1;
  std::vector<double> c(hops * kHopSize + kHopSize, 0.0);
  std::vector<double> x(hops * kHopSize + kHopSize, 0.0);
  // Frame h spans padded samples [(h - 1) * hop, (h + 1) * hop); shift by
  // one hop so frame 0 starts at index 0 with a half of zeros.
  std::copy(clean.samples.begin(), clean.samples.end(), c.begin() + kHopSize);
  std::copy(noisy.samples.begin(), noisy.samples.end(), x.begin() + kHopSize);
  std::vector<BandVector> masks(hops);
  for (std::size_t h = 0; h < hops; ++h) {
    const std::span<const double> cf(c.data() + h * kHopSize, kFrameSize);
    const std::span<const double> xf(x.data() + h * kHopSize, kFrameSize);
    BandVector m = ComputeIrm(AnalyzeFrame(cf), AnalyzeFrame(xf));
    for (double& v : m) {
      if (v == kIrmSentinel) v = 1.0;
    }
    masks[h] = m;
  }
  return masks;
}

void WriteMaskDump(const std::vector<HopReport>& hops,
                   const std::filesystem::path& path) {
  std::ofstream out(path);
  if (!out) throw Error("cannot open " + path.string() + " for writing");
  char buf[64];
  for (const HopReport& r : hops) {
    std::snprintf(buf, sizeof buf, "%.6f", r.vad);
    out << "frame=" << r.frame << " vad=" << buf << " gains=";
    for (std::size_t b = 0; b < kNumBands; ++b) {
      std::snprintf(buf, sizeof buf, "%.6f", std::sqrt(r.mask[b]));
      out << (b ? "," : "") << buf;
    }
    out << '\n';
  }
  if (!out) throw Error("write failed: " + path.string());
}

}  // namespace rnx
