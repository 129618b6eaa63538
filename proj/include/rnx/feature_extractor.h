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

#ifndef RNX_FEATURE_EXTRACTOR_H_
#define RNX_FEATURE_EXTRACTOR_H_

#include <span>

#include "rnx/bands.h"
#include "rnx/dsp.h"
#include "rnx/features.h"
#include "rnx/pitch.h"

namespace rnx {

// Everything the analysis side produces for one hop.
struct FrameAnalysis {
  FrameSpectrum spectrum;        // X, windowed current frame
  FrameSpectrum pitch_spectrum;  // P, windowed pitch-delayed frame
  BandVector energies{};
  BandVector pitch_corr{};
  PitchEstimate pitch;
  FrameFeatureParts parts;
  FeatureVector features;  // raw: extra trio not standardized
};

// Streaming front end shared by dataset generation and the denoiser. Each
// Process() call consumes one hop and analyzes the 960-sample frame made of
// the previous and the new hop.
class FeatureExtractor {
 public:
  explicit FeatureExtractor(FeatureMode mode) : mode_(mode) {}

  FrameAnalysis Process(std::span<const double> hop);

  FeatureMode mode() const { return mode_; }
  std::int64_t frames() const { return frames_; }
  const PitchState& pitch_state() const { return pitch_; }
  std::span<const double> current_frame() const {
    return pitch_.CurrentFrame();
  }

 private:
  FeatureMode mode_;
  PitchState pitch_;
  FeatureHistory history_;
  std::int64_t frames_ = 0;
};

}  // namespace rnx

#endif  // RNX_FEATURE_EXTRACTOR_H_
