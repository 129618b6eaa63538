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

#ifndef RNX_GRADCHECK_H_
#define RNX_GRADCHECK_H_

#include <cstdint>

#include "rnx/backprop.h"
#include "rnx/neural.h"

namespace rnx {

// Central finite-difference check of BackwardTbptt. The perturbed losses
// come from a separate forward implementation that evaluates many
// single-parameter perturbations at once (one batch column each). Entries
// where the two-point difference misses the tolerance are re-evaluated with
// the fourth-order central stencil at the same step before counting as
// failed.
struct GradCheckConfig {
  double step = 1e-4;
  double rel_tol = 1e-4;
  // Entries with max(|analytic|, |numeric|) below near_zero are compared
  // absolutely against abs_tol.
  double near_zero = 1e-8;
  double abs_tol = 1e-7;
  // A perturbation that flips a ReLU is retried with the step divided by
  // 10, down to min_step.
  double min_step = 1e-7;
  // Double-precision roundoff in the loss is a few 1e-12 per difference,
  // so entries whose gradient is below this (but not near zero) are redone
  // in long double.
  double extended_below = 1e-6;
  std::size_t block = 128;
};

struct GradCheckResult {
  std::size_t checked = 0;
  std::size_t failed = 0;
  std::size_t near_zero = 0;
  std::size_t reduced_step = 0;  // needed a smaller step to avoid a kink
  std::size_t kinks = 0;         // sat on a kink even at min_step; not scored
  std::size_t extended = 0;      // evaluations redone in long double
  std::size_t fourth_order = 0;  // two-point misses redone with 4 points
  double max_rel_error = 0.0;    // over entries compared relatively
  double max_abs_error = 0.0;    // over near-zero entries
  bool passed() const { return failed == 0; }
};

// `batch` must hold a single sequence.
GradCheckResult CheckGradients(const NetworkModel& model,
                               const SequenceBatch& batch,
                               const LossConfig& loss,
                               const GradCheckConfig& config = {});

// Same forward as ForwardLoss, reimplemented; for cross-checking.
double OracleLoss(const NetworkModel& model, const SequenceBatch& batch,
                  const LossConfig& loss);

struct GradCheckInstance {
  NetworkModel model;
  SequenceBatch batch;
};

// Random model (Glorot weights, small random biases), standard-normal
// features, IRM targets in [0, 1] with ~10% sentinels, random VAD labels.
GradCheckInstance RandomGradCheckInstance(std::uint64_t seed, FeatureMode mode,
                                          std::size_t sequence_len);

void MergeResult(GradCheckResult& into, const GradCheckResult& r);

}  // namespace rnx

#endif  // RNX_GRADCHECK_H_
