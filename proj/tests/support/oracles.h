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

#ifndef RNX_TESTS_SUPPORT_ORACLES_H_
#define RNX_TESTS_SUPPORT_ORACLES_H_

// Brute-force reference implementations used only by tests. Each follows
// the textbook definition directly and shares no code with the library.

#include <cmath>
#include <complex>
#include <numbers>
#include <random>
#include <vector>

namespace rnx::oracle {

inline constexpr double kPi = std::numbers::pi;
inline constexpr int kN = 960;
inline constexpr int kBins = 481;

inline double Window(int n) {
  const double s = std::sin(kPi * (n + 0.5) / kN);
  return std::sin(kPi / 2.0 * s * s);
}

// exp(-2 pi i j / N) for j in [0, N).
inline const std::vector<std::complex<double>>& Twiddles() {
  static const std::vector<std::complex<double>> t = [] {
    std::vector<std::complex<double>> v(kN);
    for (int j = 0; j < kN; ++j) v[j] = std::polar(1.0, -2.0 * kPi * j / kN);
    return v;
  }();
  return t;
}

// Direct DFT of the windowed frame, bins 0..480.
inline std::vector<std::complex<double>> WindowedDft(const std::vector<double>& x) {
  const auto& tw = Twiddles();
  std::vector<double> xw(kN);
  for (int n = 0; n < kN; ++n) xw[n] = x[n] * Window(n);
  std::vector<std::complex<double>> out(kBins);
  for (int k = 0; k < kBins; ++k) {
    std::complex<double> acc = 0.0;
    // Exact reduction of k*n mod N keeps the twiddle accurate.
    for (int n = 0, kn = 0; n < kN; ++n, kn = (kn + k) % kN) acc += xw[n] * tw[kn];
    out[k] = acc;
  }
  return out;
}

// Orthonormal DCT-II by direct cosine sums.
inline std::vector<double> Dct(const std::vector<double>& x) {
  const int m = static_cast<int>(x.size());
  std::vector<double> c(m);
  for (int k = 0; k < m; ++k) {
    double acc = 0.0;
    for (int n = 0; n < m; ++n) acc += x[n] * std::cos(kPi / m * (n + 0.5) * k);
    c[k] = acc * std::sqrt((k == 0 ? 1.0 : 2.0) / m);
  }
  return c;
}

inline const std::vector<int>& BandCentersHz() {
  static const std::vector<int> hz = {0,    200,  400,  600,   800,   1000,
                                      1200, 1400, 1600, 2000,  2400,  2800,
                                      3200, 4000, 4800, 5600,  6800,  8000,
                                      9600, 12000, 15600, 20000};
  return hz;
}

// Triangle of band b evaluated at bin k; the top band stays at 1 above its
// centre.
inline double Triangle(int b, int k) {
  const auto& hz = BandCentersHz();
  const int nb = static_cast<int>(hz.size());
  const double c = hz[b] / 50.0;
  if (k == c) return 1.0;
  if (k < c) {
    if (b == 0) return 0.0;
    const double lo = hz[b - 1] / 50.0;
    return k <= lo ? 0.0 : (k - lo) / (c - lo);
  }
  if (b == nb - 1) return 1.0;
  const double hi = hz[b + 1] / 50.0;
  return k >= hi ? 0.0 : (hi - k) / (hi - c);
}

inline std::vector<double> BandEnergies(const std::vector<std::complex<double>>& x) {
  std::vector<double> e(22, 0.0);
  for (int b = 0; b < 22; ++b) {
    for (int k = 0; k < kBins; ++k) e[b] += Triangle(b, k) * std::norm(x[k]);
  }
  return e;
}

inline double Sigmoid(double x) { return 1.0 / (1.0 + std::exp(-x)); }

inline std::vector<double> RandomFrame(std::mt19937_64& rng, double scale = 0.3) {
  std::normal_distribution<double> g(0.0, scale);
  std::vector<double> x(kN);
  for (double& v : x) v = g(rng);
  return x;
}

}  // namespace rnx::oracle

#endif  // RNX_TESTS_SUPPORT_ORACLES_H_
