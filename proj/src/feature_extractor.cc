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

#include "rnx/feature_extractor.h"

namespace rnx {

FrameAnalysis FeatureExtractor::Process(std::span<const double> hop) {
  if (hop.size() != kHopSize) {
    throw Error("feature extractor expects " + std::to_string(kHopSize) +
                " samples per hop");
  }
  pitch_.Push(hop);

  FrameAnalysis a;
  a.spectrum = AnalyzeFrame(pitch_.CurrentFrame());
  a.spectrum.frame_index = frames_;
  a.pitch = EstimatePitch(pitch_);
  const auto delayed = PitchDelayedFrame(pitch_, a.pitch.period);
  a.pitch_spectrum = AnalyzeFrame(delayed);
  a.pitch_spectrum.frame_index = frames_;
  a.energies = BandEnergies(a.spectrum);
  a.pitch_corr = BandCorrelation(a.spectrum, a.pitch_spectrum);

  FrameFeatureParts& parts = a.parts;
  parts.bfcc = Bfcc(a.energies);
  parts.derivatives = BfccDerivatives(history_, parts.bfcc);
  parts.pitch_dct = PitchDctFeatures(a.pitch_corr);
  parts.pitch_period = a.pitch.period;
  parts.nonstationarity = Nonstationarity(history_, a.energies);
  const double centroid = SpectralCentroid(a.spectrum);
  parts.extra = {centroid, SpectralBandwidth(a.spectrum, centroid),
                 static_cast<double>(SpectralRolloff(a.spectrum))};

  a.features = AssembleFeatures(mode_, parts);
  a.features.frame_index = frames_;
  history_.Advance(parts.bfcc, a.energies);
  ++frames_;
  return a;
}

}  // namespace rnx
