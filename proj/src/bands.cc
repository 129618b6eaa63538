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

#include "rnx/bands.h"

#include <algorithm>
#include <cmath>
#include <string>

namespace rnx {
namespace {

constexpr std::array<int, kNumBands> kCentersHz = {
    0,    200,  400,  600,  800,  1000, 1200,  1400,  1600,  2000,  2400,
    2800, 3200, 4000, 4800, 5600, 6800, 8000, 9600, 12000, 15600, 20000};

constexpr int kHzPerBin = kSampleRate / static_cast<int>(kFrameSize);

BandLayout MakeLayout() {
  BandLayout layout{};
  layout.center_hz = kCentersHz;
  for (std::size_t b = 0; b < kNumBands; ++b) {
    layout.center_bin[b] = kCentersHz[b] / kHzPerBin;
  }
  return layout;
}

// Row b holds the weights of band b on every bin.
using WeightTable = std::array<std::array<double, kNumBins>, kNumBands>;

WeightTable MakeWeights() {
  const BandLayout& layout = GetBandLayout();
  WeightTable w{};
  for (std::size_t b = 0; b + 1 < kNumBands; ++b) {
    const int lo = layout.center_bin[b];
    const int hi = layout.center_bin[b + 1];
    const int width = hi - lo;
    for (int k = lo; k < hi; ++k) {
      const double frac = static_cast<double>(k - lo) / width;
      w[b][k] += 1.0 - frac;
      w[b + 1][k] += frac;
    }
  }
  for (std::size_t k = layout.center_bin[kNumBands - 1]; k < kNumBins; ++k) {
    w[kNumBands - 1][k] = 1.0;
  }
  return w;
}

const WeightTable& Weights() {
  static const WeightTable table = MakeWeights();
  return table;
}

}  // namespace

const BandLayout& GetBandLayout() {
  static const BandLayout layout = MakeLayout();
  return layout;
}

double BandWeight(std::size_t band, std::size_t bin) {
  if (band >= kNumBands || bin >= kNumBins) throw Error("band/bin out of range");
  return Weights()[band][bin];
}

BandVector BandEnergies(const FrameSpectrum& spectrum) {
  const WeightTable& w = Weights();
  BandVector e{};
  for (std::size_t b = 0; b < kNumBands; ++b) {
    double acc = 0.0;
    for (std::size_t k = 0; k < kNumBins; ++k) {
      if (w[b][k] != 0.0) acc += w[b][k] * std::norm(spectrum[k]);
    }
    e[b] = acc;
  }
  return e;
}

BandVector BandCorrelation(const FrameSpectrum& x, const FrameSpectrum& p) {
  const WeightTable& w = Weights();
  const BandVector ex = BandEnergies(x);
  const BandVector ep = BandEnergies(p);
  BandVector corr{};
  for (std::size_t b = 0; b < kNumBands; ++b) {
    double acc = 0.0;
    for (std::size_t k = 0; k < kNumBins; ++k) {
      if (w[b][k] != 0.0) acc += w[b][k] * (x[k] * std::conj(p[k])).real();
    }
    corr[b] = std::clamp(acc / std::sqrt(ex[b] * ep[b] + kTinyEps), -1.0, 1.0);
  }
  return corr;
}

BandVector ComputeIrm(const BandVector& clean_energy,
                      const BandVector& noisy_energy) {
  BandVector m{};
  for (std::size_t b = 0; b < kNumBands; ++b) {
    m[b] = noisy_energy[b] < kEnergyFloor
               ? kIrmSentinel
               : std::clamp(clean_energy[b] / noisy_energy[b], 0.0, 1.0);
  }
  return m;
}

BandVector ComputeIrm(const FrameSpectrum& clean, const FrameSpectrum& noisy) {
  return ComputeIrm(BandEnergies(clean), BandEnergies(noisy));
}

BinGains InterpolateBands(const BandVector& values) {
  const WeightTable& w = Weights();
  BinGains g{};
  for (std::size_t b = 0; b < kNumBands; ++b) {
    for (std::size_t k = 0; k < kNumBins; ++k) g[k] += w[b][k] * values[b];
  }
  return g;
}

BinGains InterpolateGains(const BandVector& mask) {
  BandVector root{};
  for (std::size_t b = 0; b < kNumBands; ++b) {
    if (!(mask[b] >= 0.0 && mask[b] <= 1.0)) {
      throw Error("mask value out of [0, 1] in band " + std::to_string(b));
    }
    root[b] = std::sqrt(mask[b]);
  }
  BinGains g = InterpolateBands(root);
  for (double& v : g) v = std::min(v, 1.0);
  return g;
}

FrameSpectrum ApplyGains(const FrameSpectrum& spectrum, const BinGains& gains) {
  FrameSpectrum out = spectrum;
  for (std::size_t k = 0; k < kNumBins; ++k) out.bins[k] *= gains[k];
  return out;
}

}  // namespace rnx
