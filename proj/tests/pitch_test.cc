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

#include <algorithm>
#include <cmath>
#include <numbers>
#include <random>
#include <vector>

#include "doctest.h"
#include "oracles.h"
#include "rnx/bands.h"
#include "rnx/pitch.h"

using rnx::kHopSize;

namespace {

// Fills the whole history from `signal(i)` for absolute sample index i.
template <typename F>
rnx::PitchState StateFrom(F signal) {
  rnx::PitchState s;
  std::vector<double> hop(kHopSize);
  for (std::size_t h = 0; h < 4; ++h) {
    for (std::size_t i = 0; i < kHopSize; ++i) hop[i] = signal(h * kHopSize + i);
    s.Push(hop);
  }
  return s;
}

}  // namespace

TEST_CASE("200 Hz sine gives period 240") {
  rnx::PitchState s = StateFrom([](std::size_t i) {
    return 0.5 * std::sin(2.0 * std::numbers::pi * 200.0 * i / 48000.0);
  });
  const rnx::PitchEstimate e = rnx::EstimatePitch(s);
  CHECK(std::abs(e.period - 240) <= 1);
  CHECK(e.strength > 0.95);
  CHECK(s.last_period == e.period);
}

TEST_CASE("white noise has weak pitch strength") {
  std::vector<double> strengths;
  for (std::uint64_t seed = 0; seed < 100; ++seed) {
    std::mt19937_64 rng(seed);
    std::normal_distribution<double> g(0.0, 0.1);
    rnx::PitchState s = StateFrom([&](std::size_t) { return g(rng); });
    strengths.push_back(rnx::EstimatePitch(s).strength);
  }
  std::sort(strengths.begin(), strengths.end());
  CHECK(strengths[94] < 0.4);
}

TEST_CASE("silence keeps the previous period with zero strength") {
  rnx::PitchState s;
  s.last_period = 123;
  const rnx::PitchEstimate e = rnx::EstimatePitch(s);
  CHECK(e.period == 123);
  CHECK(e.strength == 0.0);
}

TEST_CASE("normalized autocorrelation matches a direct sum") {
  std::mt19937_64 rng(3);
  std::normal_distribution<double> g(0.0, 1.0);
  rnx::PitchState s = StateFrom([&](std::size_t) { return g(rng); });
  const std::size_t start = rnx::kPitchHistorySize - rnx::kFrameSize;
  for (int lag : {60, 61, 200, 799, 800}) {
    double xy = 0.0, xx = 0.0, yy = 0.0;
    for (std::size_t n = 0; n < rnx::kFrameSize; ++n) {
      const double x = s.history[start + n], y = s.history[start + n - lag];
      xy += x * y;
      xx += x * x;
      yy += y * y;
    }
    CHECK(rnx::NormalizedAutocorrelation(s, lag) == doctest::Approx(xy / std::sqrt(xx * yy)).epsilon(1e-12));
  }
  CHECK_THROWS_AS(rnx::NormalizedAutocorrelation(s, 59), rnx::Error);
  CHECK_THROWS_AS(rnx::NormalizedAutocorrelation(s, 801), rnx::Error);
}

TEST_CASE("pitch-delayed frame") {
  const int period = 137;
  rnx::PitchState periodic = StateFrom([&](std::size_t i) {
    return std::sin(2.0 * std::numbers::pi * static_cast<double>(i % period) / period);
  });
  const auto p = rnx::PitchDelayedFrame(periodic, period);
  const auto cur = periodic.CurrentFrame();
  for (std::size_t n = 0; n < rnx::kFrameSize; ++n) CHECK(p[n] == doctest::Approx(cur[n]).epsilon(1e-12));

  rnx::PitchState ramp = StateFrom([](std::size_t i) { return static_cast<double>(i); });
  const auto r = rnx::PitchDelayedFrame(ramp, 300);
  const auto rc = ramp.CurrentFrame();
  for (std::size_t n = 0; n < rnx::kFrameSize; ++n) CHECK(r[n] == rc[n] - 300.0);

  std::mt19937_64 rng(4);
  std::normal_distribution<double> g(0.0, 1.0);
  rnx::PitchState rs = StateFrom([&](std::size_t) { return g(rng); });
  for (int period : {60, 450, 800}) {
    const auto d = rnx::PitchDelayedFrame(rs, period);
    for (std::size_t n = 0; n < rnx::kFrameSize; ++n) {
      CHECK(d[n] == rs.history[rnx::kMaxPitchPeriod - period + n]);
    }
  }
  CHECK_THROWS_AS(rnx::PitchDelayedFrame(rs, 900), rnx::Error);
}

TEST_CASE("comb filter identities") {
  std::mt19937_64 rng(5);
  std::normal_distribution<double> g(0.0, 1.0);
  rnx::FrameSpectrum x, p;
  for (std::size_t k = 0; k < rnx::kNumBins; ++k) {
    x[k] = {g(rng), g(rng)};
    p[k] = {g(rng), g(rng)};
  }
  rnx::BandVector zero{}, one;
  one.fill(1.0);
  const auto y0 = rnx::CombFilter(x, p, zero);
  const auto y1 = rnx::CombFilter(x, x, one);
  for (std::size_t k = 0; k < rnx::kNumBins; ++k) {
    CHECK(y0[k] == x[k]);
    CHECK(std::abs(y1[k] - x[k]) < 1e-12);
  }
}

TEST_CASE("comb filter attenuates inter-harmonic noise on a voiced signal") {
  // 200 Hz pulse train plus white noise at 0 dB.
  const int period = 240;
  std::mt19937_64 rng(6);
  std::normal_distribution<double> g(0.0, 1.0);
  std::vector<double> x(4 * kHopSize + rnx::kFrameSize);
  double pulse_energy = 0.0;
  for (std::size_t i = 0; i < x.size(); ++i) {
    x[i] = (i % period == 0) ? 1.0 : 0.0;
    pulse_energy += x[i] * x[i];
  }
  const double noise_rms = std::sqrt(pulse_energy / x.size());
  for (double& v : x) v += noise_rms * g(rng);

  rnx::PitchState s;
  for (std::size_t h = 0; h < 4; ++h) {
    s.Push(std::span<const double>(x).subspan(h * kHopSize, kHopSize));
  }
  const rnx::PitchEstimate e = rnx::EstimatePitch(s);
  CHECK(e.period % period == 0);
  const auto X = rnx::AnalyzeFrame(s.CurrentFrame());
  const auto P = rnx::AnalyzeFrame(rnx::PitchDelayedFrame(s, e.period));
  const auto Y = rnx::CombFilter(X, P, rnx::BandCorrelation(X, P));
  // Harmonics of 200 Hz sit on every 4th bin; the bins halfway between are
  // inter-harmonic.
  double ex = 0.0, ey = 0.0;
  for (std::size_t k = 2; k < 200; k += 4) {
    ex += std::norm(X[k]);
    ey += std::norm(Y[k]);
  }
  CHECK(ey < ex);
}
