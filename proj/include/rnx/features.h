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

#ifndef RNX_FEATURES_H_
#define RNX_FEATURES_H_

#include <array>
#include <cstdint>
#include <span>
#include <string>
#include <string_view>
#include <vector>

#include "rnx/bands.h"
#include "rnx/common.h"
#include "rnx/dsp.h"

namespace rnx {

enum class FeatureMode { kReference, kExtended };

inline constexpr std::size_t kNumBfcc = kNumBands;
inline constexpr std::size_t kNumDerivCoeffs = 6;
inline constexpr std::size_t kNumPitchDct = 6;
inline constexpr std::size_t kReferenceFeatureDim = 42;
inline constexpr std::size_t kExtendedFeatureDim = 45;
inline constexpr std::size_t kNumExtraFeatures = 3;

// Offsets into a FeatureVector.
inline constexpr std::size_t kBfccOffset = 0;
inline constexpr std::size_t kDeltaOffset = 22;        // d1[0..5], d2[0..5]
inline constexpr std::size_t kPitchDctOffset = 34;
inline constexpr std::size_t kPitchPeriodIndex = 40;
inline constexpr std::size_t kNonstationarityIndex = 41;
inline constexpr std::size_t kCentroidIndex = 42;
inline constexpr std::size_t kBandwidthIndex = 43;
inline constexpr std::size_t kRolloffIndex = 44;

std::size_t FeatureDim(FeatureMode mode);
FeatureMode ModeFromDim(std::size_t dim);
const char* ModeName(FeatureMode mode);
FeatureMode ParseMode(std::string_view name);

// Name of feature `index`, e.g. "bfcc[3]" or "rolloff".
std::string FeatureName(std::size_t index);

struct FeatureVector {
  std::vector<double> values;
  std::int64_t frame_index = 0;
};

// Mean/std of the centroid, bandwidth and roll-off features.
struct FeatureStats {
  std::array<double, kNumExtraFeatures> mean{};
  std::array<double, kNumExtraFeatures> std{1.0, 1.0, 1.0};
};

inline constexpr double kMinFeatureStd = 1e-6;

// Per-stream memory for the temporal features.
struct FeatureHistory {
  std::array<double, kNumBfcc> bfcc_prev{};
  std::array<double, kNumBfcc> bfcc_prev2{};
  BandVector log_energy_prev{};

  // Call once per frame after the features for that frame are assembled.
  void Advance(std::span<const double> bfcc, const BandVector& energies);
};

std::array<double, kNumBfcc> Bfcc(const BandVector& energies);
BandVector LogEnergies(const BandVector& energies);
std::array<double, 2 * kNumDerivCoeffs> BfccDerivatives(
    const FeatureHistory& history, std::span<const double> bfcc);
std::array<double, kNumPitchDct> PitchDctFeatures(const BandVector& corr);
double Nonstationarity(const FeatureHistory& history,
                       const BandVector& energies);

// Spectral shape features on the power spectrum |A(k)|^2, in bin units.
double SpectralCentroid(const FrameSpectrum& spectrum);
double SpectralBandwidth(const FrameSpectrum& spectrum, double centroid);
int SpectralRolloff(const FrameSpectrum& spectrum, double threshold = 0.9);

// Opt-in extras, not part of either model layout.
double Rms(std::span<const double> frame);
double SpectralFlatness(const FrameSpectrum& spectrum);

// Everything computed for one frame before assembly.
struct FrameFeatureParts {
  std::array<double, kNumBfcc> bfcc{};
  std::array<double, 2 * kNumDerivCoeffs> derivatives{};
  std::array<double, kNumPitchDct> pitch_dct{};
  int pitch_period = 0;
  double nonstationarity = 0.0;
  // Centroid, bandwidth, roll-off before standardization.
  std::array<double, kNumExtraFeatures> extra{};
};

// Lays out the 42 or 45 values. In extended mode the extra trio is
// standardized with `stats` when given and appended raw otherwise.
FeatureVector AssembleFeatures(FeatureMode mode, const FrameFeatureParts& parts,
                               const FeatureStats* stats = nullptr);

// Standardizes the extra trio in place. `features` must be extended-mode.
void StandardizeExtras(std::span<double> features, const FeatureStats& stats);

// Population mean/std per extra feature, std floored at kMinFeatureStd.
// Throws on fewer than two rows.
FeatureStats ComputeStats(
    std::span<const std::array<double, kNumExtraFeatures>> rows);

}  // namespace rnx

#endif  // RNX_FEATURES_H_
