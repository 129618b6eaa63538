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

#ifndef RNX_DSP_H_
#define RNX_DSP_H_

#include <array>
#include <complex>
#include <cstdint>
#include <span>
#include <vector>

#include "rnx/common.h"

namespace rnx {

using Complex = std::complex<double>;

// Half spectrum of one 960-sample frame: kNumBins bins at 50 Hz spacing.
// The forward transform is unscaled; the inverse is scaled by 1/N.
struct FrameSpectrum {
  std::array<Complex, kNumBins> bins{};
  std::int64_t frame_index = 0;

  Complex& operator[](std::size_t k) { return bins[k]; }
  const Complex& operator[](std::size_t k) const { return bins[k]; }
};

// Vorbis power-complementary window, w(n)^2 + w(n + 480)^2 = 1.
double VorbisWindow(std::size_t n);
const std::array<double, kFrameSize>& VorbisWindowTable();

// Windows and transforms one frame. Throws on non-finite input.
FrameSpectrum AnalyzeFrame(std::span<const double> frame);

// Overlap-add synthesis carry, one per stream.
struct SynthesisCarry {
  std::array<double, kHopSize> samples{};
};

// Inverse transform, window, overlap-add. Writes kHopSize finished samples
// into `out` and keeps the second half of the frame in `carry`.
void SynthesizeFrame(const FrameSpectrum& spectrum, SynthesisCarry& carry,
                     std::span<double> out);

// Plain real transforms of a full frame, no window.
FrameSpectrum ForwardTransform(std::span<const double> frame);
std::array<double, kFrameSize> InverseTransform(const FrameSpectrum& spectrum);

// Orthonormal DCT-II and its inverse (DCT-III).
std::vector<double> DctII(std::span<const double> values);
std::vector<double> InverseDctII(std::span<const double> coeffs);

}  // namespace rnx

#endif  // RNX_DSP_H_
