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

#ifndef RNX_PITCH_H_
#define RNX_PITCH_H_

#include <array>
#include <span>

#include "rnx/bands.h"
#include "rnx/common.h"
#include "rnx/dsp.h"

namespace rnx {

inline constexpr int kMinPitchPeriod = 60;
inline constexpr int kMaxPitchPeriod = 800;
inline constexpr std::size_t kPitchHistorySize =
    kFrameSize + static_cast<std::size_t>(kMaxPitchPeriod);

// Input history for one stream. The newest kFrameSize samples are the
// current analysis frame; the kMaxPitchPeriod before them are available as
// lagged context.
struct PitchState {
  std::array<double, kPitchHistorySize> history{};
  int last_period = kMinPitchPeriod;
  double last_corr = 0.0;

  // Shifts in one hop of new samples.
  void Push(std::span<const double> hop);
  std::span<const double> CurrentFrame() const;
};

struct PitchEstimate {
  int period = kMinPitchPeriod;
  double strength = 0.0;
};

// Normalized autocorrelation of the current frame against the history at
// `lag`.
double NormalizedAutocorrelation(const PitchState& state, int lag);

// Picks the lag in [60, 800] with the highest normalized autocorrelation and
// then walks down to half-period candidates that score at least 90% of the
// current pick. A silent frame keeps the previous period with strength 0.
// Updates state.last_period and state.last_corr.
PitchEstimate EstimatePitch(PitchState& state);

// The kFrameSize window ending `period` samples before the current frame
// ends.
std::array<double, kFrameSize> PitchDelayedFrame(const PitchState& state,
                                                 int period);

// Y = (X + a P) / (1 + a), a = clip(corr, 0, 1)^2 interpolated onto bins.
FrameSpectrum CombFilter(const FrameSpectrum& x, const FrameSpectrum& p,
                         const BandVector& band_corr);

}  // namespace rnx

#endif  // RNX_PITCH_H_
