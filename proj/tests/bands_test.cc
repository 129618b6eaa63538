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

#include <cmath>
#include <random>
#include <vector>

#include "doctest.h"
#include "oracles.h"
#include "rnx/bands.h"

using rnx::kNumBands;
using rnx::kNumBins;

namespace {

rnx::FrameSpectrum RandomSpectrum(std::mt19937_64& rng) {
  std::normal_distribution<double> g(0.0, 1.0);
  rnx::FrameSpectrum s;
  for (auto& c : s.bins) c = {g(rng), g(rng)};
  return s;
}

}  // namespace

TEST_CASE("layout") {
  const rnx::BandLayout& l = rnx::GetBandLayout();
  CHECK(l.center_hz.size() == 22);
  for (std::size_t b = 0; b < kNumBands; ++b) {
    CHECK(l.center_hz[b] % 50 == 0);
    CHECK(l.center_bin[b] == l.center_hz[b] / 50);
    CHECK(l.center_hz[b] == rnx::oracle::BandCentersHz()[b]);
  }
  CHECK(l.center_hz[9] == 2000);
  CHECK(l.center_bin[9] == 40);
}

TEST_CASE("weights match the triangle oracle") {
  for (std::size_t b = 0; b < kNumBands; ++b) {
    for (std::size_t k = 0; k < kNumBins; ++k) {
      CHECK(rnx::BandWeight(b, k) ==
            doctest::Approx(rnx::oracle::Triangle(static_cast<int>(b), static_cast<int>(k))));
    }
  }
}

TEST_CASE("band energies") {
  const auto zero = rnx::BandEnergies(rnx::FrameSpectrum{});
  for (double e : zero) CHECK(e == 0.0);

  const rnx::BandLayout& l = rnx::GetBandLayout();
  for (std::size_t b = 0; b < kNumBands; ++b) {
    rnx::FrameSpectrum s;
    s[l.center_bin[b]] = {0.6, 0.8};
    const auto e = rnx::BandEnergies(s);
    for (std::size_t j = 0; j < kNumBands; ++j) {
      CHECK(e[j] == doctest::Approx(j == b ? 1.0 : 0.0).epsilon(1e-14));
    }
  }

  std::mt19937_64 rng(7);
  for (int trial = 0; trial < 100; ++trial) {
    const rnx::FrameSpectrum s = RandomSpectrum(rng);
    const auto e = rnx::BandEnergies(s);
    const std::vector<std::complex<double>> bins(s.bins.begin(), s.bins.end());
    const auto ref = rnx::oracle::BandEnergies(bins);
    double total = 0.0, bands = 0.0;
    for (std::size_t k = 0; k < kNumBins; ++k) total += std::norm(s[k]);
    for (std::size_t b = 0; b < kNumBands; ++b) {
      CHECK(e[b] == doctest::Approx(ref[b]).epsilon(1e-12));
      bands += e[b];
    }
    CHECK(std::abs(bands - total) / total < 1e-9);
  }
}

TEST_CASE("band correlation") {
  std::mt19937_64 rng(8);
  const rnx::FrameSpectrum x = RandomSpectrum(rng);
  rnx::FrameSpectrum neg;
  for (std::size_t k = 0; k < kNumBins; ++k) neg[k] = -x[k];
  const auto self = rnx::BandCorrelation(x, x);
  const auto flip = rnx::BandCorrelation(x, neg);
  for (std::size_t b = 0; b < kNumBands; ++b) {
    CHECK(self[b] == doctest::Approx(1.0).epsilon(1e-9));
    CHECK(flip[b] == doctest::Approx(-1.0).epsilon(1e-9));
  }

  const rnx::FrameSpectrum p = RandomSpectrum(rng);
  const auto got = rnx::BandCorrelation(x, p);
  for (int b = 0; b < 22; ++b) {
    double xp = 0.0, xx = 0.0, pp = 0.0;
    for (int k = 0; k < 481; ++k) {
      const double w = rnx::oracle::Triangle(b, k);
      xp += w * (x[k].real() * p[k].real() + x[k].imag() * p[k].imag());
      xx += w * std::norm(x[k]);
      pp += w * std::norm(p[k]);
    }
    CHECK(got[b] == doctest::Approx(xp / std::sqrt(xx * pp)).epsilon(1e-9));
  }
}

TEST_CASE("ideal ratio mask") {
  std::mt19937_64 rng(9);
  const rnx::FrameSpectrum x = RandomSpectrum(rng);
  for (double m : rnx::ComputeIrm(x, x)) CHECK(m == doctest::Approx(1.0));
  for (double m : rnx::ComputeIrm(rnx::FrameSpectrum{}, x)) CHECK(m == 0.0);
  for (double m : rnx::ComputeIrm(x, rnx::FrameSpectrum{})) CHECK(m == rnx::kIrmSentinel);

  std::uniform_real_distribution<double> u(0.0, 2.0);
  for (int trial = 0; trial < 50; ++trial) {
    rnx::BandVector c{}, n{};
    for (std::size_t b = 0; b < kNumBands; ++b) {
      c[b] = u(rng);
      n[b] = u(rng);
    }
    n[3] = 1e-12;
    const auto m = rnx::ComputeIrm(c, n);
    for (std::size_t b = 0; b < kNumBands; ++b) {
      const double ref = n[b] < 1e-10 ? -1.0 : std::min(1.0, std::max(0.0, c[b] / n[b]));
      CHECK(m[b] == doctest::Approx(ref).epsilon(1e-12));
    }
  }
}

TEST_CASE("gain interpolation") {
  rnx::BandVector ones, zeros{}, quarter;
  ones.fill(1.0);
  quarter.fill(0.25);
  for (double g : rnx::InterpolateGains(ones)) CHECK(g == doctest::Approx(1.0).epsilon(1e-14));
  for (double g : rnx::InterpolateGains(zeros)) CHECK(g == 0.0);
  for (double g : rnx::InterpolateGains(quarter)) CHECK(g == doctest::Approx(0.5).epsilon(1e-14));

  rnx::BandVector bad = ones;
  bad[4] = rnx::kIrmSentinel;
  CHECK_THROWS_AS(rnx::InterpolateGains(bad), rnx::Error);

  std::mt19937_64 rng(10);
  std::uniform_real_distribution<double> u(0.0, 1.0);
  rnx::BandVector m;
  for (double& v : m) v = u(rng);
  const auto g = rnx::InterpolateGains(m);
  for (int k = 0; k < 481; ++k) {
    double ref = 0.0;
    for (int b = 0; b < 22; ++b) ref += rnx::oracle::Triangle(b, k) * std::sqrt(m[b]);
    CHECK(g[k] == doctest::Approx(ref).epsilon(1e-12));
  }
}

TEST_CASE("gain application") {
  std::mt19937_64 rng(11);
  const rnx::FrameSpectrum x = RandomSpectrum(rng);
  rnx::BinGains unit, half, zero{};
  unit.fill(1.0);
  half.fill(0.5);
  const auto a = rnx::ApplyGains(x, unit);
  const auto b = rnx::ApplyGains(x, half);
  const auto c = rnx::ApplyGains(x, zero);
  for (std::size_t k = 0; k < kNumBins; ++k) {
    CHECK(a[k] == x[k]);
    CHECK(std::abs(b[k]) == doctest::Approx(0.5 * std::abs(x[k])));
    CHECK(std::arg(b[k]) == doctest::Approx(std::arg(x[k])));
    CHECK(c[k] == rnx::Complex(0.0, 0.0));
  }
}
