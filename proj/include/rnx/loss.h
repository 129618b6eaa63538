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

#ifndef RNX_LOSS_H_
#define RNX_LOSS_H_

#include <span>

namespace rnx {

// Mask estimates are floored at kProbClamp inside log(e); VAD predictions
// are clamped to [kProbClamp, 1 - kProbClamp].
inline constexpr double kProbClamp = 1e-7;

// Band-mask loss over N = target.size() bands:
//
//   L = 1/N * ( 10 * sum_i [10 (m - e)^4 + (e^g - m^g)^2 - 0.01 m ln e]
//              - 1/2 * sum_i 2 |m - 0.5| m ln e )
//
// with m the target, e the estimate and g = gamma. Bands whose target is
// the -1 sentinel are left out of both sums.
double MaskLoss(std::span<const double> target, std::span<const double> estimate,
                double gamma);

// dL/de per band (zero on sentinel bands).
void MaskLossGradient(std::span<const double> target,
                      std::span<const double> estimate, double gamma,
                      std::span<double> grad);

// dL/da where e = sigmoid(a). Written in terms of e so that the e^(g-1)
// factor never has to be formed.
void MaskLossLogitGradient(std::span<const double> target,
                           std::span<const double> estimate, double gamma,
                           std::span<double> grad);

// Binary cross-entropy with the prediction clamped like the mask estimate.
double VadLoss(double target, double prediction);
// d/da of VadLoss where prediction = sigmoid(a).
double VadLossLogitGradient(double target, double prediction);

// Per-frame training objective.
inline double TotalLoss(double mask_loss, double vad_prediction,
                        double vad_target, double vad_weight) {
  return mask_loss + vad_weight * VadLoss(vad_target, vad_prediction);
}

}  // namespace rnx

#endif  // RNX_LOSS_H_
