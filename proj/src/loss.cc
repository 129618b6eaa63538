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

#include "rnx/loss.h"

#include <algorithm>
#include <cmath>

#include "rnx/common.h"

namespace rnx {
namespace {

void CheckSizes(std::size_t a, std::size_t b) {
  if (a != b || a == 0) throw Error("loss: target/estimate size mismatch");
}

bool Defined(double target) { return target >= 0.0; }

double ClampProb(double p) {
  return std::clamp(p, kProbClamp, 1.0 - kProbClamp);
}

bool InClampRange(double p) {
  return p >= kProbClamp && p <= 1.0 - kProbClamp;
}

// The mask loss only takes log(e), so only the lower end needs a floor.
double FloorProb(double p) { return std::max(p, kProbClamp); }

}  // namespace

double MaskLoss(std::span<const double> target, std::span<const double> estimate,
                double gamma) {
  CheckSizes(target.size(), estimate.size());
  double first = 0.0, second = 0.0;
  for (std::size_t i = 0; i < target.size(); ++i) {
    const double m = target[i];
    if (!Defined(m)) continue;
    const double e = estimate[i];
    const double log_e = std::log(FloorProb(e));
    const double d = m - e;
    const double p = std::pow(e, gamma) - std::pow(m, gamma);
    first += 10.0 * d * d * d * d + p * p - 0.01 * m * log_e;
    second += 2.0 * std::abs(m - 0.5) * m * log_e;
  }
  return (10.0 * first - 0.5 * second) / static_cast<double>(target.size());
}

void MaskLossGradient(std::span<const double> target,
                      std::span<const double> estimate, double gamma,
                      std::span<double> grad) {
  CheckSizes(target.size(), estimate.size());
  CheckSizes(target.size(), grad.size());
  const double inv_n = 1.0 / static_cast<double>(target.size());
  for (std::size_t i = 0; i < target.size(); ++i) {
    const double m = target[i];
    const double e = estimate[i];
    if (!Defined(m)) {
      grad[i] = 0.0;
      continue;
    }
    const double d_log = e >= kProbClamp ? 1.0 / e : 0.0;
    const double d = m - e;
    const double p = std::pow(e, gamma) - std::pow(m, gamma);
    const double d_first = -40.0 * d * d * d +
                           2.0 * p * gamma * std::pow(e, gamma - 1.0) -
                           0.01 * m * d_log;
    const double d_second = 2.0 * std::abs(m - 0.5) * m * d_log;
    grad[i] = inv_n * (10.0 * d_first - 0.5 * d_second);
  }
}

void MaskLossLogitGradient(std::span<const double> target,
                           std::span<const double> estimate, double gamma,
                           std::span<double> grad) {
  CheckSizes(target.size(), estimate.size());
  CheckSizes(target.size(), grad.size());
  const double inv_n = 1.0 / static_cast<double>(target.size());
  for (std::size_t i = 0; i < target.size(); ++i) {
    const double m = target[i];
    const double e = estimate[i];
    if (!Defined(m)) {
      grad[i] = 0.0;
      continue;
    }
    // de/da = e (1 - e); the log terms contribute (1 - e) above the floor.
    const double one_minus = 1.0 - e;
    const double d_log = e >= kProbClamp ? one_minus : 0.0;
    const double d = m - e;
    const double e_pow = std::pow(e, gamma);
    const double p = e_pow - std::pow(m, gamma);
    const double d_first = -40.0 * d * d * d * e * one_minus +
                           2.0 * p * gamma * e_pow * one_minus -
                           0.01 * m * d_log;
    const double d_second = 2.0 * std::abs(m - 0.5) * m * d_log;
    grad[i] = inv_n * (10.0 * d_first - 0.5 * d_second);
  }
}

double VadLoss(double target, double prediction) {
  const double p = ClampProb(prediction);
  return -(target * std::log(p) + (1.0 - target) * std::log(1.0 - p));
}

double VadLossLogitGradient(double target, double prediction) {
  if (!InClampRange(prediction)) return 0.0;
  return prediction - target;
}

}  // namespace rnx
