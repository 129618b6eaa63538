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

#include "rnx/dsp.h"

#include <cmath>
#include <numbers>

#include <fftw3.h>

namespace rnx {
namespace {

// FFTW plans are created once; fftw_execute_dft_* with caller arrays is
// thread-safe, planning is not.
class FftPlans {
 public:
  static const FftPlans& Get() {
    static const FftPlans plans;
    return plans;
  }

  void Forward(const double* in, Complex* out) const {
    fftw_execute_dft_r2c(forward_, const_cast<double*>(in),
                         reinterpret_cast<fftw_complex*>(out));
  }

  // Destroys `in`.
  void Inverse(Complex* in, double* out) const {
    fftw_execute_dft_c2r(inverse_, reinterpret_cast<fftw_complex*>(in), out);
  }

 private:
  FftPlans() {
    std::array<double, kFrameSize> real{};
    std::array<Complex, kNumBins> spec{};
    const unsigned flags = FFTW_ESTIMATE | FFTW_UNALIGNED;
    forward_ = fftw_plan_dft_r2c_1d(
        kFrameSize, real.data(), reinterpret_cast<fftw_complex*>(spec.data()),
        flags);
    inverse_ = fftw_plan_dft_c2r_1d(
        kFrameSize, reinterpret_cast<fftw_complex*>(spec.data()), real.data(),
        flags);
  }
  ~FftPlans() {
    fftw_destroy_plan(forward_);
    fftw_destroy_plan(inverse_);
  }

  fftw_plan forward_;
  fftw_plan inverse_;
};

std::array<double, kFrameSize> MakeWindow() {
  std::array<double, kFrameSize> w{};
  for (std::size_t n = 0; n < kFrameSize; ++n) {
    const double s = std::sin(std::numbers::pi * (n + 0.5) / kFrameSize);
    w[n] = std::sin(0.5 * std::numbers::pi * s * s);
  }
  return w;
}

void CheckFrame(std::span<const double> frame) {
  if (frame.size() != kFrameSize) {
    throw Error("frame must hold " + std::to_string(kFrameSize) +
                " samples, got " + std::to_string(frame.size()));
  }
  for (double x : frame) {
    if (!std::isfinite(x)) throw Error("non-finite sample in analysis frame");
  }
}

}  // namespace

double VorbisWindow(std::size_t n) {
  if (n >= kFrameSize) throw Error("window index out of range");
  return VorbisWindowTable()[n];
}

const std::array<double, kFrameSize>& VorbisWindowTable() {
  static const std::array<double, kFrameSize> table = MakeWindow();
  return table;
}

FrameSpectrum ForwardTransform(std::span<const double> frame) {
  CheckFrame(frame);
  FrameSpectrum out;
  FftPlans::Get().Forward(frame.data(), out.bins.data());
  // FFTW leaves roundoff-free zeros here already; force the invariant.
  out.bins[0].imag(0.0);
  out.bins[kNumBins - 1].imag(0.0);
  return out;
}

std::array<double, kFrameSize> InverseTransform(const FrameSpectrum& spectrum) {
  std::array<Complex, kNumBins> scratch = spectrum.bins;
  std::array<double, kFrameSize> out{};
  FftPlans::Get().Inverse(scratch.data(), out.data());
  for (double& x : out) x /= static_cast<double>(kFrameSize);
  return out;
}

FrameSpectrum AnalyzeFrame(std::span<const double> frame) {
  CheckFrame(frame);
  const auto& w = VorbisWindowTable();
  std::array<double, kFrameSize> windowed{};
  for (std::size_t n = 0; n < kFrameSize; ++n) windowed[n] = frame[n] * w[n];
  return ForwardTransform(windowed);
}

void SynthesizeFrame(const FrameSpectrum& spectrum, SynthesisCarry& carry,
                     std::span<double> out) {
  if (out.size() != kHopSize) throw Error("synthesis output must be one hop");
  const auto& w = VorbisWindowTable();
  const std::array<double, kFrameSize> frame = InverseTransform(spectrum);
  for (std::size_t n = 0; n < kHopSize; ++n) {
    out[n] = carry.samples[n] + frame[n] * w[n];
    carry.samples[n] = frame[n + kHopSize] * w[n + kHopSize];
  }
}

std::vector<double> DctII(std::span<const double> values) {
  const std::size_t m = values.size();
  if (m == 0) throw Error("DCT of empty vector");
  std::vector<double> out(m, 0.0);
  const double scale0 = std::sqrt(1.0 / m);
  const double scale = std::sqrt(2.0 / m);
  for (std::size_t k = 0; k < m; ++k) {
    double acc = 0.0;
    for (std::size_t n = 0; n < m; ++n) {
      acc += values[n] * std::cos(std::numbers::pi * (n + 0.5) * k / m);
    }
    out[k] = acc * (k == 0 ? scale0 : scale);
  }
  return out;
}

std::vector<double> InverseDctII(std::span<const double> coeffs) {
  const std::size_t m = coeffs.size();
  if (m == 0) throw Error("DCT of empty vector");
  std::vector<double> out(m, 0.0);
  const double scale0 = std::sqrt(1.0 / m);
  const double scale = std::sqrt(2.0 / m);
  for (std::size_t n = 0; n < m; ++n) {
    double acc = coeffs[0] * scale0;
    for (std::size_t k = 1; k < m; ++k) {
      acc += coeffs[k] * scale *
             std::cos(std::numbers::pi * (n + 0.5) * k / m);
    }
    out[n] = acc;
  }
  return out;
}

}  // namespace rnx
