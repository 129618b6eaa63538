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

#include "rnx/backprop.h"

#include <cmath>
#include <string>

#include "rnx/loss.h"

namespace rnx {
namespace {

using Eigen::MatrixXd;

// Activation derivative in terms of the pre-activation.
MatrixXd ActivationDerivative(Activation act, const MatrixXd& pre) {
  switch (act) {
    case Activation::kTanh:
      return (1.0 - pre.array().tanh().square()).matrix();
    case Activation::kRelu:
      return (pre.array() > 0.0).cast<double>().matrix();
    case Activation::kSigmoid: {
      const Eigen::ArrayXXd s = 1.0 / (1.0 + (-pre.array()).exp());
      return (s * (1.0 - s)).matrix();
    }
  }
  return MatrixXd();
}

struct StepCache {
  MatrixXd dense;  // tanh output
  GruCache vad, noise, denoise;
  MatrixXd vad_h, noise_h, denoise_h;
  MatrixXd gains;
  MatrixXd vad_prob;
};

void CheckBatch(const NetworkModel& model, const SequenceBatch& batch) {
  if (batch.steps() == 0 || batch.batch() == 0) {
    throw Error("empty training batch");
  }
  if (batch.gains.size() != batch.steps() || batch.vad.size() != batch.steps()) {
    throw Error("batch targets do not cover every step");
  }
  const auto fdim = static_cast<Eigen::Index>(model.feature_dim());
  const auto b = static_cast<Eigen::Index>(batch.batch());
  for (std::size_t t = 0; t < batch.steps(); ++t) {
    if (batch.features[t].rows() != fdim || batch.features[t].cols() != b ||
        batch.gains[t].rows() != static_cast<Eigen::Index>(kNumBands) ||
        batch.gains[t].cols() != b || batch.vad[t].cols() != b) {
      throw Error("batch shape mismatch at step " + std::to_string(t));
    }
  }
}

// Forward pass over the whole batch, caching what backward needs.
std::vector<StepCache> RunForward(const NetworkModel& model,
                                  const SequenceBatch& batch, bool keep_caches) {
  const auto& L = model.layers;
  const Eigen::Index b = static_cast<Eigen::Index>(batch.batch());
  const Eigen::Index f = static_cast<Eigen::Index>(model.feature_dim());
  MatrixXd vad_h = MatrixXd::Zero(kVadGruUnits, b);
  MatrixXd noise_h = MatrixXd::Zero(kNoiseGruUnits, b);
  MatrixXd denoise_h = MatrixXd::Zero(kDenoiseGruUnits, b);
  std::vector<StepCache> caches(batch.steps());
  MatrixXd noise_in(L[kNoiseGru].in_dim, b);
  MatrixXd denoise_in(L[kDenoiseGru].in_dim, b);
  for (std::size_t t = 0; t < batch.steps(); ++t) {
    StepCache& c = caches[t];
    const MatrixXd& x = batch.features[t];
    c.dense = DenseForward(L[kDenseIn], x);
    vad_h = GruStep(L[kVadGru], c.dense, vad_h, keep_caches ? &c.vad : nullptr);
    noise_in.topRows(kDenseInUnits) = c.dense;
    noise_in.middleRows(kDenseInUnits, kVadGruUnits) = vad_h;
    noise_in.bottomRows(f) = x;
    noise_h = GruStep(L[kNoiseGru], noise_in, noise_h,
                      keep_caches ? &c.noise : nullptr);
    denoise_in.topRows(kVadGruUnits) = vad_h;
    denoise_in.middleRows(kVadGruUnits, kNoiseGruUnits) = noise_h;
    denoise_in.bottomRows(f) = x;
    denoise_h = GruStep(L[kDenoiseGru], denoise_in, denoise_h,
                        keep_caches ? &c.denoise : nullptr);
    c.gains = DenseForward(L[kGainsOut], denoise_h);
    c.vad_prob = DenseForward(L[kVadOut], vad_h);
    if (keep_caches) {
      c.vad_h = vad_h;
      c.noise_h = noise_h;
      c.denoise_h = denoise_h;
    }
  }
  return caches;
}

double FrameLossSum(const StepCache& c, const SequenceBatch& batch,
                    std::size_t t, const LossConfig& config) {
  double sum = 0.0;
  for (Eigen::Index j = 0; j < c.gains.cols(); ++j) {
    const double* target = batch.gains[t].col(j).data();
    const double* estimate = c.gains.col(j).data();
    const double mask = MaskLoss({target, kNumBands}, {estimate, kNumBands},
                                 config.gamma);
    sum += TotalLoss(mask, c.vad_prob(0, j), batch.vad[t](j), config.vad_weight);
  }
  return sum;
}

// Accumulates the GRU parameter gradients for one step and returns dL/dx.
// `dh` is the gradient flowing into the new hidden state; on return
// `dh_prev` holds the gradient for the previous one.
MatrixXd GruBackward(const LayerParams& layer, const GruCache& c,
                     const MatrixXd& dh, LayerParams& grad, MatrixXd& dh_prev) {
  const int n = layer.out_dim;
  MatrixXd cand = c.candidate_pre;
  ApplyActivation(layer.activation, cand);
  const Eigen::ArrayXXd z = c.z.array();
  const Eigen::ArrayXXd r = c.r.array();

  MatrixXd dpre(3 * n, dh.cols());
  dpre.topRows(n) = (dh.array() * (c.h_prev.array() - cand.array()) * z * (1.0 - z)).matrix();
  dpre.bottomRows(n) =
      (dh.array() * (1.0 - z) *
       ActivationDerivative(layer.activation, c.candidate_pre).array())
          .matrix();
  const MatrixXd d_reset_h =
      layer.recurrent_weights.bottomRows(n).transpose() * dpre.bottomRows(n);
  dpre.middleRows(n, n) =
      (d_reset_h.array() * c.h_prev.array() * r * (1.0 - r)).matrix();

  dh_prev = (dh.array() * z + d_reset_h.array() * r).matrix();
  dh_prev.noalias() +=
      layer.recurrent_weights.topRows(2 * n).transpose() * dpre.topRows(2 * n);

  grad.input_weights.noalias() += dpre * c.x.transpose();
  grad.bias += dpre.rowwise().sum();
  grad.recurrent_weights.topRows(2 * n).noalias() +=
      dpre.topRows(2 * n) * c.h_prev.transpose();
  grad.recurrent_weights.bottomRows(n).noalias() +=
      dpre.bottomRows(n) * c.reset_h.transpose();
  return layer.input_weights.transpose() * dpre;
}

// Dense layer backward from the gradient w.r.t. its pre-activation.
MatrixXd DenseBackward(const LayerParams& layer, const MatrixXd& x,
                       const MatrixXd& dpre, LayerParams& grad) {
  grad.input_weights.noalias() += dpre * x.transpose();
  grad.bias += dpre.rowwise().sum();
  return layer.input_weights.transpose() * dpre;
}

}  // namespace

double ForwardLoss(const NetworkModel& model, const SequenceBatch& batch,
                   const LossConfig& config) {
  ValidateModel(model);
  CheckBatch(model, batch);
  const std::vector<StepCache> caches = RunForward(model, batch, false);
  double sum = 0.0;
  for (std::size_t t = 0; t < batch.steps(); ++t) {
    sum += FrameLossSum(caches[t], batch, t, config);
  }
  return sum / static_cast<double>(batch.frames());
}

BackwardResult BackwardTbptt(const NetworkModel& model,
                             const SequenceBatch& batch,
                             const LossConfig& config, double scale) {
  CheckBatch(model, batch);
  if (scale <= 0.0) scale = 1.0 / static_cast<double>(batch.frames());
  const auto& L = model.layers;
  const Eigen::Index b = static_cast<Eigen::Index>(batch.batch());
  const std::vector<StepCache> caches = RunForward(model, batch, true);

  BackwardResult result;
  result.gradients = ZerosLike(model);
  auto& G = result.gradients.layers;

  MatrixXd d_vad_next = MatrixXd::Zero(kVadGruUnits, b);
  MatrixXd d_noise_next = MatrixXd::Zero(kNoiseGruUnits, b);
  MatrixXd d_denoise_next = MatrixXd::Zero(kDenoiseGruUnits, b);
  MatrixXd d_gains(kNumBands, b);
  MatrixXd d_vad_logit(1, b);
  double loss_sum = 0.0;

  for (std::size_t t = batch.steps(); t-- > 0;) {
    const StepCache& c = caches[t];
    loss_sum += FrameLossSum(c, batch, t, config);

    for (Eigen::Index j = 0; j < b; ++j) {
      MaskLossLogitGradient({batch.gains[t].col(j).data(), kNumBands},
                            {c.gains.col(j).data(), kNumBands}, config.gamma,
                            {d_gains.col(j).data(), kNumBands});
      d_vad_logit(0, j) = config.vad_weight *
                          VadLossLogitGradient(batch.vad[t](j), c.vad_prob(0, j));
    }
    d_gains *= scale;
    d_vad_logit *= scale;

    MatrixXd d_denoise = DenseBackward(L[kGainsOut], c.denoise_h, d_gains, G[kGainsOut]);
    d_denoise += d_denoise_next;
    MatrixXd d_vad = DenseBackward(L[kVadOut], c.vad_h, d_vad_logit, G[kVadOut]);
    d_vad += d_vad_next;

    const MatrixXd dx_denoise =
        GruBackward(L[kDenoiseGru], c.denoise, d_denoise, G[kDenoiseGru], d_denoise_next);
    d_vad += dx_denoise.topRows(kVadGruUnits);
    MatrixXd d_noise = dx_denoise.middleRows(kVadGruUnits, kNoiseGruUnits) + d_noise_next;

    const MatrixXd dx_noise =
        GruBackward(L[kNoiseGru], c.noise, d_noise, G[kNoiseGru], d_noise_next);
    MatrixXd d_dense = dx_noise.topRows(kDenseInUnits);
    d_vad += dx_noise.middleRows(kDenseInUnits, kVadGruUnits);

    d_dense += GruBackward(L[kVadGru], c.vad, d_vad, G[kVadGru], d_vad_next);

    const MatrixXd d_dense_pre =
        (d_dense.array() * (1.0 - c.dense.array().square())).matrix();
    DenseBackward(L[kDenseIn], batch.features[t], d_dense_pre, G[kDenseIn]);
  }

  result.loss = loss_sum * scale;
  bool finite = std::isfinite(result.loss);
  ForEachParameter(result.gradients, [&](std::span<const double> p) {
    for (double v : p) finite = finite && std::isfinite(v);
  });
  if (!finite) throw Error("non-finite loss or gradient; step aborted");
  return result;
}

double GradientNorm(const NetworkModel& gradients) {
  double sq = 0.0;
  ForEachParameter(gradients, [&](std::span<const double> p) {
    for (double v : p) sq += v * v;
  });
  return std::sqrt(sq);
}

double ClipGradients(NetworkModel& gradients, double max_norm) {
  const double norm = GradientNorm(gradients);
  if (max_norm > 0.0 && norm > max_norm) {
    const double s = max_norm / norm;
    ForEachParameter(gradients, [&](std::span<double> p) {
      for (double& v : p) v *= s;
    });
  }
  return norm;
}

void AccumulateGradients(NetworkModel& out, const NetworkModel& g,
                         double weight) {
  std::vector<std::span<const double>> src;
  ForEachParameter(g, [&](std::span<const double> p) { src.push_back(p); });
  std::size_t i = 0;
  ForEachParameter(out, [&](std::span<double> p) {
    const auto s = src.at(i++);
    if (s.size() != p.size()) throw Error("gradient shape mismatch");
    for (std::size_t k = 0; k < p.size(); ++k) p[k] += weight * s[k];
  });
}

}  // namespace rnx
