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

#ifndef RNX_BANDS_H_
#define RNX_BANDS_H_

#include <array>
#include <span>

#include "rnx/common.h"
#include "rnx/dsp.h"

namespace rnx {

// Values on the 22-band layout. What they mean (energy, correlation, gain,
// IRM target) is up to the producer; see the functions below.
using BandVector = std::array<double, kNumBands>;
using BinGains = std::array<double, kNumBins>;

// IRM target value for bands with no defined ratio.
inline constexpr double kIrmSentinel = -1.0;

struct BandLayout {
  std::array<int, kNumBands> center_hz;
  std::array<int, kNumBands> center_bin;
};

// Opus-like ladder from 0 to 20 kHz, every center on a 50 Hz bin.
const BandLayout& GetBandLayout();

// Triangular weight of bin k in band b. Adjacent triangles sum to one
// between centers; the last band is held at 1 from 20 kHz up to Nyquist so
// the weights cover every bin.
double BandWeight(std::size_t band, std::size_t bin);

// E(b) = sum_k w_b(k) |X(k)|^2.
BandVector BandEnergies(const FrameSpectrum& spectrum);

// Normalized per-band cross-correlation of X with the pitch-delayed P,
// clamped to [-1, 1].
BandVector BandCorrelation(const FrameSpectrum& x, const FrameSpectrum& p);

// Ideal ratio mask E_clean / E_noisy clipped to [0, 1]; bands whose noisy
// energy is below kEnergyFloor get kIrmSentinel.
BandVector ComputeIrm(const FrameSpectrum& clean, const FrameSpectrum& noisy);
BandVector ComputeIrm(const BandVector& clean_energy,
                      const BandVector& noisy_energy);

// Linear interpolation of band values onto bins with the band weights.
BinGains InterpolateBands(const BandVector& values);

// Per-bin gains sum_b w_b(k) sqrt(m_b). Throws if any m_b is outside [0, 1]
// (in particular on sentinels).
BinGains InterpolateGains(const BandVector& mask);

FrameSpectrum ApplyGains(const FrameSpectrum& spectrum, const BinGains& gains);

}  // namespace rnx

#endif  // RNX_BANDS_H_
