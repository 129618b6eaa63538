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
#include <filesystem>
#include <random>
#include <string>
#include <vector>

#include "doctest.h"
#include "rnx/audio_io.h"
#include "rnx/metrics.h"
#include "support/oracles.h"
#include "support/synth.h"

namespace {

rnx::AudioBuffer Scaled(const rnx::AudioBuffer& a, double k) {
  rnx::AudioBuffer out = a;
  for (double& s : out.samples) s *= k;
  return out;
}

rnx::AudioBuffer Noise(std::uint64_t seed, std::size_t n, double sd) {
  std::mt19937_64 rng(seed);
  std::normal_distribution<double> g(0.0, sd);
  rnx::AudioBuffer a;
  a.samples.resize(n);
  for (double& s : a.samples) s = g(rng);
  return a;
}

double RefSegSnr(const rnx::AudioBuffer& c, const rnx::AudioBuffer& t) {
  double sum = 0.0;
  int count = 0;
  for (std::size_t f = 0; (f + 1) * 960 <= c.size(); ++f) {
    double s = 0.0, e = 0.0;
    for (std::size_t n = f * 960; n < (f + 1) * 960; ++n) {
      s += c.samples[n] * c.samples[n];
      e += (c.samples[n] - t.samples[n]) * (c.samples[n] - t.samples[n]);
    }
    if (s < 1e-10) continue;
    sum += std::clamp(10.0 * std::log10(s / e), -10.0, 35.0);
    ++count;
  }
  return sum / count;
}

double RefLsd(const rnx::AudioBuffer& c, const rnx::AudioBuffer& t) {
  double sum = 0.0;
  const std::size_t frames = c.size() / 960;
  for (std::size_t f = 0; f < frames; ++f) {
    const std::vector<double> cf(c.samples.begin() + f * 960, c.samples.begin() + (f + 1) * 960);
    const std::vector<double> tf(t.samples.begin() + f * 960, t.samples.begin() + (f + 1) * 960);
    const auto cx = rnx::oracle::WindowedDft(cf), tx = rnx::oracle::WindowedDft(tf);
    double acc = 0.0;
    for (int k = 0; k < 481; ++k) {
      const double d = 20.0 * std::log10(std::abs(cx[k]) + 1e-6) -
                       20.0 * std::log10(std::abs(tx[k]) + 1e-6);
      acc += d * d;
    }
    sum += std::sqrt(acc / 481.0);
  }
  return sum / static_cast<double>(frames);
}

}  // namespace

TEST_CASE("segmental SNR bounds") {
  const rnx::AudioBuffer clean = Noise(1, 9600, 0.1);
  CHECK(rnx::SegmentalSnr(clean, clean).db == 35.0);
  rnx::AudioBuffer zero;
  zero.samples.assign(clean.size(), 0.0);
  CHECK(rnx::SegmentalSnr(clean, zero).db == doctest::Approx(0.0));
  CHECK(rnx::SegmentalSnr(clean, Scaled(clean, -100.0)).db == -10.0);
  CHECK(rnx::SegmentalSnr(clean, Scaled(clean, 0.9)).db == doctest::Approx(20.0));
  CHECK(rnx::SegmentalSnr(clean, clean).frames == 10);
}

TEST_CASE("segmental SNR skips silent frames and rejects all-silent input") {
  rnx::AudioBuffer clean = Noise(2, 4 * 960, 0.1);
  std::fill(clean.samples.begin(), clean.samples.begin() + 960, 0.0);
  const rnx::AudioBuffer test = Scaled(clean, 0.5);
  const rnx::MetricValue v = rnx::SegmentalSnr(clean, test);
  CHECK(v.frames == 3);
  CHECK(v.db == doctest::Approx(20.0 * std::log10(2.0)));
  rnx::AudioBuffer silent;
  silent.samples.assign(2000, 0.0);
  CHECK_THROWS_WITH_AS(rnx::SegmentalSnr(silent, silent),
                       doctest::Contains("no scoreable frames"), rnx::Error);
  CHECK_THROWS_WITH_AS(rnx::SegmentalSnr(clean, silent),
                       doctest::Contains("length mismatch"), rnx::Error);
}

TEST_CASE("metrics match direct references") {
  const rnx::AudioBuffer clean = rnx::synth::SpeechLike(5, 0.2);
  const rnx::AudioBuffer test = rnx::synth::MixAtSnr(clean, rnx::synth::PinkNoise(6, 0.2), 5.0);
  CHECK(rnx::SegmentalSnr(clean, test).db ==
        doctest::Approx(RefSegSnr(clean, test)).epsilon(1e-9));
  CHECK(std::fabs(rnx::LogSpectralDistance(clean, test).db - RefLsd(clean, test)) < 1e-6);
}

TEST_CASE("log-spectral distance") {
  const rnx::AudioBuffer clean = Noise(3, 3 * 960, 0.2);
  CHECK(rnx::LogSpectralDistance(clean, clean).db < 1e-12);
  CHECK(rnx::LogSpectralDistance(clean, Scaled(clean, 2.0)).db ==
        doctest::Approx(20.0 * std::log10(2.0)).epsilon(1e-4));
  CHECK(rnx::LogSpectralDistance(clean, clean).frames == 3);
}

TEST_CASE("A/B comparison") {
  rnx::AbCondition c;
  c.condition = "white_5db";
  c.clean = rnx::synth::SpeechLike(8, 0.5);
  c.noisy = rnx::synth::MixAtSnr(c.clean, rnx::synth::WhiteNoise(9, 0.5), 5.0);
  c.system_a = c.noisy;
  c.system_b = c.noisy;
  const auto rows = rnx::AbCompare({c}, "ref", "ext");
  // 3 systems + 3 deltas for the condition, then the same for "all".
  REQUIRE(rows.size() == 12);
  for (const auto& r : rows) {
    if (r.system.find("-minus-") != std::string::npos) {
      CHECK(r.seg_snr_db == 0.0);
      CHECK(r.lsd_db == 0.0);
    }
  }
  CHECK(rows[0].system == "noisy");
  CHECK(rows[3].system == "ext-minus-ref");
  CHECK(rows[6].condition == "all");
  CHECK(rows[6].seg_snr_db == doctest::Approx(rows[0].seg_snr_db));
  CHECK_THROWS_AS(rnx::AbCompare({}, "a", "b"), rnx::Error);
}

TEST_CASE("report lines round-trip") {
  const std::vector<rnx::MetricsReport> in = {
      {"ref", "pink_0db", 3.25, 7.5, 120}, {"noisy", "all", -1.125, 12.0, 400}};
  const std::string text = rnx::FormatReport(in);
  CHECK(text.rfind("system=ref condition=pink_0db seg_snr_db=3.250000000", 0) == 0);
  const auto out = rnx::ParseReport(text);
  REQUIRE(out.size() == 2);
  CHECK(out[1].system == "noisy");
  CHECK(out[1].seg_snr_db == -1.125);
  CHECK(out[0].frames == 120);
  CHECK_THROWS_AS(rnx::ParseReport("system=x condition=y\n"), rnx::Error);
}

TEST_CASE("export writes one directory per condition") {
  rnx::AbCondition c;
  c.condition = "babble_10db";
  c.clean = Noise(1, 960, 0.1);
  c.noisy = c.system_a = c.system_b = c.clean;
  const auto dir = std::filesystem::temp_directory_path() / "rnx_metrics_export";
  std::filesystem::remove_all(dir);
  rnx::ExportConditionWavs({c}, "ref", "ext", dir);
  for (const char* f : {"clean.wav", "noisy.wav", "ref.wav", "ext.wav"}) {
    CHECK(std::filesystem::exists(dir / "babble_10db" / f));
  }
}
