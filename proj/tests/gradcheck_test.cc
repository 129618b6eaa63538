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

#include "doctest.h"
#include "rnx/backprop.h"
#include "rnx/gradcheck.h"

TEST_CASE("oracle loss agrees with the training forward pass") {
  for (auto mode : {rnx::FeatureMode::kReference, rnx::FeatureMode::kExtended}) {
    const rnx::GradCheckInstance inst = rnx::RandomGradCheckInstance(31, mode, 7);
    const rnx::LossConfig loss;
    CHECK(rnx::OracleLoss(inst.model, inst.batch, loss) ==
          doctest::Approx(rnx::ForwardLoss(inst.model, inst.batch, loss)).epsilon(1e-12));
  }
}

TEST_CASE("instances are reproducible from the seed") {
  const auto a = rnx::RandomGradCheckInstance(4, rnx::FeatureMode::kReference, 3);
  const auto b = rnx::RandomGradCheckInstance(4, rnx::FeatureMode::kReference, 3);
  CHECK(a.model.layers[2].recurrent_weights == b.model.layers[2].recurrent_weights);
  CHECK(a.batch.features[2] == b.batch.features[2]);
}

TEST_CASE("analytic gradients pass the central-difference gate") {
  for (auto mode : {rnx::FeatureMode::kReference, rnx::FeatureMode::kExtended}) {
    CAPTURE(static_cast<int>(mode));
    const rnx::GradCheckInstance inst = rnx::RandomGradCheckInstance(77, mode, 3);
    const rnx::GradCheckResult r = rnx::CheckGradients(inst.model, inst.batch, {});
    CHECK(r.checked + r.kinks == rnx::ParameterCount(inst.model));
    CHECK(r.failed == 0);
    CHECK(r.max_rel_error < 1e-4);
  }
}

TEST_CASE("merging results") {
  rnx::GradCheckResult a, b;
  a.checked = 3;
  a.max_rel_error = 1e-6;
  b.checked = 4;
  b.failed = 1;
  b.max_rel_error = 2e-6;
  rnx::MergeResult(a, b);
  CHECK(a.checked == 7);
  CHECK(a.failed == 1);
  CHECK(a.max_rel_error == 2e-6);
  CHECK_FALSE(a.passed());
}
