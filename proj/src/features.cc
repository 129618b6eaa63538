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

#include "rnx/features.h"

#include <algorithm>
#include <cmath>
#include <numeric>
#include <string>

namespace rnx {

std::size_t FeatureDim(FeatureMode mode) {
  return mode == FeatureMode::kExtended ? kExtendedFeatureDim
                                        : kReferenceFeatureDim;
}

FeatureMode ModeFromDim(std::size_t dim) {
  if (dim == kReferenceFeatureDim) return FeatureMode::kReference;
  if (dim == kExtendedFeatureDim) return FeatureMode::kExtended;
  throw Error("unsupported feature dimension " + std::to_string(dim));
}

const char* ModeName(FeatureMode mode) {
  return mode == FeatureMode::kExtended ? "extended" : "reference";
}

FeatureMode ParseMode(std::string_view name) {
  if (name == "reference") return FeatureMode::kReference;
  if (name == "extended") return FeatureMode::kExtended;
  throw Error("unknown mode '" + std::string(name) +
              "' (expected reference or extended)");
}

std::string FeatureName(std::size_t index) {
  if (index < kDeltaOffset) return "bfcc[" + std::to_string(index) + "]";
  if (index < kDeltaOffset + kNumDerivCoeffs) {
    return "d1[" + std::to_string(index - kDeltaOffset) + "]";
  }
  if (index < kPitchDctOffset) {
    return "d2[" + std::to_string(index - kDeltaOffset - kNumDerivCoeffs) + "]";
  }
  if (index < kPitchPeriodIndex) {
    return "pitch_dct[" + std::to_string(index - kPitchDctOffset) + "]";
  }
  switch (index) {
    case kPitchPeriodIndex: return "pitch_period";
    case kNonstationarityIndex: return "nonstationarity";
    case kCentroidIndex: return "centroid";
    case kBandwidthIndex: return "bandwidth";
    case kRolloffIndex: return "rolloff";
    default: throw Error("feature index out of range");
  }
}

void FeatureHistory::Advance(std::span<const double> bfcc,
                             const BandVector& energies) {
  bfcc_prev2 = bfcc_prev;
  std::copy_n(bfcc.begin(), kNumBfcc, bfcc_prev.begin());
  log_energy_prev = LogEnergies(energies);
}

BandVector LogEnergies(const BandVector& energies) {
  BandVector out{};
  for (std::size_t b = 0; b < kNumBands; ++b) {
    out[b] = std::log(energies[b] + kEnergyFloor);
  }
  return out;
}

std::array<double, kNumBfcc> Bfcc(const BandVector& energies) {
  const BandVector logs = LogEnergies(energies);
  const std::vector<double> c = DctII(logs);
  std::array<double, kNumBfcc> out{};
  std::copy(c.begin(), c.end(), out.begin());
  return out;
}

std::array<double, 2 * kNumDerivCoeffs> BfccDerivatives(
    const FeatureHistory& history, std::span<const double> bfcc) {
  std::array<double, 2 * kNumDerivCoeffs> out{};
  for (std::size_t i = 0; i < kNumDerivCoeffs; ++i) {
    out[i] = bfcc[i] - history.bfcc_prev[i];
    out[kNumDerivCoeffs + i] =
        bfcc[i] - 2.0 * history.bfcc_prev[i] + history.bfcc_prev2[i];
  }
  return out;
}

std::array<double, kNumPitchDct> PitchDctFeatures(const BandVector& corr) {
  const std::vector<double> c = DctII(corr);
  std::array<double, kNumPitchDct> out{};
  std::copy_n(c.begin(), kNumPitchDct, out.begin());
  return out;
}

double Nonstationarity(const FeatureHistory& history,
                       const BandVector& energies) {
  const BandVector logs = LogEnergies(energies);
  double acc = 0.0;
  for (std::size_t b = 0; b < kNumBands; ++b) {
    acc += std::abs(logs[b] - history.log_energy_prev[b]);
  }
  return acc / kNumBands;
}

double SpectralCentroid(const FrameSpectrum& spectrum) {
  double num = 0.0, den = 0.0;
  for (std::size_t k = 0; k < kNumBins; ++k) {
    const double p = std::norm(spectrum[k]);
    num += k * p;
    den += p;
  }
  return num / (den + kTinyEps);
}

double SpectralBandwidth(const FrameSpectrum& spectrum, double centroid) {
  double num = 0.0, den = 0.0;
  for (std::size_t k = 0; k < kNumBins; ++k) {
    const double p = std::norm(spectrum[k]);
    const double d = static_cast<double>(k) - centroid;
    num += d * d * p;
    den += p;
  }
  return std::sqrt(num / (den + kTinyEps));
}

int SpectralRolloff(const FrameSpectrum& spectrum, double threshold) {
  if (!(threshold > 0.0 && threshold < 1.0)) {
    throw Error("roll-off threshold must be in (0, 1)");
  }
  double total = 0.0;
  for (const Complex& c : spectrum.bins) total += std::norm(c);
  if (total <= 0.0) return 0;
  const double limit = threshold * total;
  double cumulative = 0.0;
  int h = -1;
  for (std::size_t k = 0; k < kNumBins; ++k) {
    cumulative += std::norm(spectrum[k]);
    if (cumulative < limit) {
      h = static_cast<int>(k);
    } else {
      break;
    }
  }
  return std::max(h, 0);
}

double Rms(std::span<const double> frame) {
  if (frame.empty()) return 0.0;
  double acc = 0.0;
  for (double x : frame) acc += x * x;
  return std::sqrt(acc / frame.size());
}

double SpectralFlatness(const FrameSpectrum& spectrum) {
  double log_sum = 0.0, sum = 0.0;
  for (const Complex& c : spectrum.bins) {
    const double p = std::norm(c) + kTinyEps;
    log_sum += std::log(p);
    sum += p;
  }
  const double n = static_cast<double>(kNumBins);
  return std::exp(log_sum / n) / (sum / n);
}

FeatureVector AssembleFeatures(FeatureMode mode, const FrameFeatureParts& parts,
                               const FeatureStats* stats) {
  FeatureVector fv;
  fv.values.reserve(FeatureDim(mode));
  auto& v = fv.values;
  v.insert(v.end(), parts.bfcc.begin(), parts.bfcc.end());
  v.insert(v.end(), parts.derivatives.begin(), parts.derivatives.end());
  v.insert(v.end(), parts.pitch_dct.begin(), parts.pitch_dct.end());
  if (parts.pitch_period < 60 || parts.pitch_period > 800) {
    throw Error("pitch period part out of range");
  }
  v.push_back(parts.pitch_period / 800.0);
  v.push_back(parts.nonstationarity);
  if (mode == FeatureMode::kExtended) {
    v.insert(v.end(), parts.extra.begin(), parts.extra.end());
    if (stats != nullptr) StandardizeExtras(v, *stats);
  } else if (stats != nullptr) {
    throw Error("standardization stats given for reference-mode features");
  }
  return fv;
}

void StandardizeExtras(std::span<double> features, const FeatureStats& stats) {
  if (features.size() != kExtendedFeatureDim) {
    throw Error("standardization needs extended-mode features");
  }
  for (std::size_t i = 0; i < kNumExtraFeatures; ++i) {
    double& x = features[kCentroidIndex + i];
    x = (x - stats.mean[i]) / stats.std[i];
  }
}

FeatureStats ComputeStats(
    std::span<const std::array<double, kNumExtraFeatures>> rows) {
  if (rows.size() < 2) throw Error("feature statistics need at least 2 frames");
  FeatureStats stats;
  const double n = static_cast<double>(rows.size());
  for (std::size_t i = 0; i < kNumExtraFeatures; ++i) {
    double sum = 0.0;
    for (const auto& r : rows) sum += r[i];
    const double mean = sum / n;
    double sq = 0.0;
    for (const auto& r : rows) sq += (r[i] - mean) * (r[i] - mean);
    stats.mean[i] = mean;
    stats.std[i] = std::max(std::sqrt(sq / n), kMinFeatureStd);
  }
  return stats;
}

}  // namespace rnx
