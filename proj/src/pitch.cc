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

#include "rnx/pitch.h"

#include <algorithm>
#include <cmath>
#include <string>

#include <Eigen/Core>

namespace rnx {
namespace {

constexpr std::size_t kFrameStart = kPitchHistorySize - kFrameSize;

using ConstMap = Eigen::Map<const Eigen::VectorXd>;

ConstMap Window(const PitchState& state, std::size_t start) {
  return ConstMap(state.history.data() + start, kFrameSize);
}

void CheckPeriod(int period) {
  if (period < kMinPitchPeriod || period > kMaxPitchPeriod) {
    throw Error("pitch period out of range: " + std::to_string(period));
  }
}

}  // namespace

void PitchState::Push(std::span<const double> hop) {
  if (hop.size() > kPitchHistorySize) throw Error("pitch hop too long");
  std::copy(history.begin() + hop.size(), history.end(), history.begin());
  std::copy(hop.begin(), hop.end(), history.end() - hop.size());
}

std::span<const double> PitchState::CurrentFrame() const {
  return std::span<const double>(history).subspan(kFrameStart, kFrameSize);
}

double NormalizedAutocorrelation(const PitchState& state, int lag) {
  CheckPeriod(lag);
  const ConstMap frame = Window(state, kFrameStart);
  const ConstMap lagged = Window(state, kFrameStart - lag);
  const double xy = frame.dot(lagged);
  return xy / std::sqrt(frame.squaredNorm() * lagged.squaredNorm() + kTinyEps);
}

PitchEstimate EstimatePitch(PitchState& state) {
  const ConstMap frame = Window(state, kFrameStart);
  const double frame_energy = frame.squaredNorm();
  if (frame_energy <= kEnergyFloor) {
    state.last_corr = 0.0;
    return {state.last_period, 0.0};
  }

  // Energies of every lagged window by a sliding sum.
  std::array<double, kMaxPitchPeriod + 1> r{};
  double lagged_energy = Window(state, kFrameStart - kMinPitchPeriod).squaredNorm();
  for (int lag = kMinPitchPeriod; lag <= kMaxPitchPeriod; ++lag) {
    if (lag > kMinPitchPeriod) {
      const double in = state.history[kFrameStart - lag];
      const double out = state.history[kFrameStart - lag + kFrameSize];
      lagged_energy = std::max(0.0, lagged_energy + in * in - out * out);
    }
    const double xy = frame.dot(Window(state, kFrameStart - lag));
    r[lag] = xy / std::sqrt(frame_energy * lagged_energy + kTinyEps);
  }

  int best = kMinPitchPeriod;
  for (int lag = kMinPitchPeriod + 1; lag <= kMaxPitchPeriod; ++lag) {
    if (r[lag] > r[best]) best = lag;
  }
  // Sub-harmonic check: an octave-down error shows up as a strong peak at
  // twice the true period.
  for (;;) {
    const int half = best / 2;
    int candidate = -1;
    for (int lag = half - 1; lag <= half + 1; ++lag) {
      if (lag < kMinPitchPeriod) continue;
      if (candidate < 0 || r[lag] > r[candidate]) candidate = lag;
    }
    if (candidate < 0 || r[candidate] < 0.9 * r[best]) break;
    best = candidate;
  }

  const double strength = std::clamp(r[best], 0.0, 1.0);
  state.last_period = best;
  state.last_corr = strength;
  return {best, strength};
}

std::array<double, kFrameSize> PitchDelayedFrame(const PitchState& state,
                                                 int period) {
  CheckPeriod(period);
  std::array<double, kFrameSize> out{};
  const auto begin = state.history.begin() + (kFrameStart - period);
  std::copy(begin, begin + kFrameSize, out.begin());
  return out;
}

FrameSpectrum CombFilter(const FrameSpectrum& x, const FrameSpectrum& p,
                         const BandVector& band_corr) {
  BandVector alpha{};
  for (std::size_t b = 0; b < kNumBands; ++b) {
    const double c = std::clamp(band_corr[b], 0.0, 1.0);
    alpha[b] = c * c;
  }
  const BinGains bin_alpha = InterpolateBands(alpha);
  FrameSpectrum y = x;
  for (std::size_t k = 0; k < kNumBins; ++k) {
    const double a = bin_alpha[k];
    y.bins[k] = (x[k] + a * p[k]) / (1.0 + a);
  }
  return y;
}

}  // namespace rnx
