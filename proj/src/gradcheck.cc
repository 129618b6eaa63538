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

#include "rnx/gradcheck.h"

#include <algorithm>
#include <cmath>
#include <optional>
#include <random>

namespace rnx {
namespace {

using Eigen::Index;

enum Tensor { kWeights = 0, kRecurrent = 1, kBias = 2 };

struct Perturbation {
  Tensor tensor;
  Index row;
  Index col;
  double delta;
};

template <typename T>
using Mat = Eigen::Matrix<T, Eigen::Dynamic, Eigen::Dynamic>;
template <typename T>
using Vec = Eigen::Matrix<T, Eigen::Dynamic, 1>;

template <typename T>
struct Layer {
  Activation activation;
  Index out_dim;
  Mat<T> w, u;
  Vec<T> b;
};

template <typename T>
Mat<T> Broadcast(const Mat<T>& m, Index cols) {
  return m.cols() == cols ? m : Mat<T>(m.replicate(1, cols));
}

template <typename T>
Mat<T> Sigmoid(const Mat<T>& x) {
  return (T(1) / (T(1) + (-x.array()).exp())).matrix();
}

template <typename T>
void Activate(Activation act, Mat<T>& x) {
  switch (act) {
    case Activation::kTanh: x = x.array().tanh().matrix(); break;
    case Activation::kRelu: x = x.array().max(T(0)).matrix(); break;
    case Activation::kSigmoid: x = Sigmoid<T>(x); break;
  }
}

// Stacks blocks vertically, broadcasting single-column blocks to `cols`.
template <typename T>
Mat<T> Stack(std::initializer_list<const Mat<T>*> parts, Index cols) {
  Index rows = 0;
  for (const Mat<T>* p : parts) rows += p->rows();
  Mat<T> out(rows, cols);
  Index r = 0;
  for (const Mat<T>* p : parts) {
    out.middleRows(r, p->rows()) = Broadcast<T>(*p, cols);
    r += p->rows();
  }
  return out;
}

template <typename T>
Index MaxCols(std::initializer_list<const Mat<T>*> parts) {
  Index c = 1;
  for (const Mat<T>* p : parts) c = std::max(c, p->cols());
  return c;
}

// Input and bias perturbations act on the pre-activation rows directly.
template <typename T>
void PerturbPre(Mat<T>& pre, const Mat<T>& x,
                const std::vector<Perturbation>* pert) {
  if (pert == nullptr) return;
  for (Index c = 0; c < pre.cols(); ++c) {
    const Perturbation& p = (*pert)[c];
    if (p.tensor == kWeights) {
      pre(p.row, c) += T(p.delta) * x(p.col, x.cols() == 1 ? 0 : c);
    } else if (p.tensor == kBias) {
      pre(p.row, c) += T(p.delta);
    }
  }
}

template <typename T>
Mat<T> DenseEval(const Layer<T>& layer, const Mat<T>& x, Index cols,
                 const std::vector<Perturbation>* pert) {
  Mat<T> pre = layer.w * x;
  pre.colwise() += layer.b;
  pre = Broadcast<T>(pre, cols);
  PerturbPre<T>(pre, x, pert);
  Activate<T>(layer.activation, pre);
  return pre;
}

template <typename T>
Mat<T> GruEval(const Layer<T>& layer, const Mat<T>& x, const Mat<T>& h,
               Index cols, const std::vector<Perturbation>* pert,
               Mat<T>* candidate_pre) {
  const Index n = layer.out_dim;
  Mat<T> pre = layer.w * x;
  pre.colwise() += layer.b;
  pre = Broadcast<T>(pre, cols);
  PerturbPre<T>(pre, x, pert);
  const Mat<T> hb = Broadcast<T>(h, cols);
  // h = 0 on the first step, so every recurrent term vanishes.
  const bool zero_state = h.isZero(0.0);
  if (!zero_state) pre.topRows(2 * n) += layer.u.topRows(2 * n) * hb;
  if (pert != nullptr && !zero_state) {
    for (Index c = 0; c < cols; ++c) {
      const Perturbation& p = (*pert)[c];
      if (p.tensor == kRecurrent && p.row < 2 * n) {
        pre(p.row, c) += T(p.delta) * hb(p.col, c);
      }
    }
  }
  const Mat<T> z = Sigmoid<T>(pre.topRows(n));
  const Mat<T> r = Sigmoid<T>(pre.middleRows(n, n));
  const Mat<T> rh = r.cwiseProduct(hb);
  Mat<T> cand = pre.bottomRows(n);
  if (!zero_state) cand += layer.u.bottomRows(n) * rh;
  if (pert != nullptr && !zero_state) {
    for (Index c = 0; c < cols; ++c) {
      const Perturbation& p = (*pert)[c];
      if (p.tensor == kRecurrent && p.row >= 2 * n) {
        cand(p.row - 2 * n, c) += T(p.delta) * rh(p.col, c);
      }
    }
  }
  *candidate_pre = cand;
  Activate<T>(layer.activation, cand);
  return (z.array() * hb.array() + (T(1) - z.array()) * cand.array()).matrix();
}

// Written out from the loss formula, independently of loss.cc.
template <typename T>
T OracleMaskLoss(const double* m, const T* e, double gamma) {
  using std::abs, std::log, std::pow, std::sqrt;
  const T lo(1e-7);
  auto root = [gamma](T v) { return gamma == 0.5 ? sqrt(v) : pow(v, T(gamma)); };
  T weighted(0), emphasis(0);
  for (std::size_t i = 0; i < kNumBands; ++i) {
    if (m[i] < 0.0) continue;
    const T mi(m[i]);
    const T ln_e = log(std::max(e[i], lo));
    const T p = root(e[i]) - root(mi);
    const T d2 = (mi - e[i]) * (mi - e[i]);
    weighted += T(10) * d2 * d2 + p * p - T(0.01) * mi * ln_e;
    emphasis += T(2) * abs(mi - T(0.5)) * mi * ln_e;
  }
  return (T(10) * weighted - T(0.5) * emphasis) / T(kNumBands);
}

template <typename T>
T OracleVadLoss(double y, T p) {
  using std::log;
  p = std::clamp(p, T(1e-7), T(1) - T(1e-7));
  return y > 0.5 ? -log(p) : -log(T(1) - p);
}

template <typename T>
class PerturbedForward {
 public:
  PerturbedForward(const NetworkModel& model, const SequenceBatch& batch,
                   const LossConfig& loss)
      : batch_(batch), loss_(loss) {
    for (std::size_t l = 0; l < kNumLayers; ++l) {
      const LayerParams& src = model.layers[l];
      layers_[l] = {src.activation, src.out_dim, src.input_weights.cast<T>(),
                    src.recurrent_weights.cast<T>(), src.bias.cast<T>()};
    }
    for (const Eigen::MatrixXd& f : batch.features) inputs_.push_back(f.cast<T>());
    std::vector<char> kinked;
    base_loss_ = Run(-1, nullptr, 1, kinked, true)[0];
  }

  T base_loss() const { return base_loss_; }

  // Loss of each perturbed column; kinked[c] is set when column c moved a
  // ReLU pre-activation across zero relative to the unperturbed run.
  std::vector<T> Run(int layer, const std::vector<Perturbation>* pert,
                     Index cols, std::vector<char>& kinked,
                     bool store_base = false) {
    std::array<bool, kNumLayers> hit{};
    if (layer >= 0) {
      hit[layer] = true;
    } else {
      hit.fill(true);
    }
    hit[kVadGru] = hit[kVadGru] || hit[kDenseIn];
    hit[kNoiseGru] = hit[kNoiseGru] || hit[kDenseIn] || hit[kVadGru];
    hit[kDenoiseGru] = hit[kDenoiseGru] || hit[kVadGru] || hit[kNoiseGru];
    hit[kGainsOut] = hit[kGainsOut] || hit[kDenoiseGru];
    hit[kVadOut] = hit[kVadOut] || hit[kVadGru];
    auto p = [&](std::size_t l) {
      return static_cast<int>(l) == layer ? pert : nullptr;
    };

    const auto& L = layers_;
    const std::size_t steps = batch_.steps();
    if (store_base) base_.assign(steps, {});
    kinked.assign(cols, 0);
    std::vector<T> loss(cols, T(0));
    Mat<T> vad_h = Mat<T>::Zero(kVadGruUnits, 1);
    Mat<T> noise_h = Mat<T>::Zero(kNoiseGruUnits, 1);
    Mat<T> denoise_h = Mat<T>::Zero(kDenoiseGruUnits, 1);
    Mat<T> cand;
    auto check_kinks = [&](const Mat<T>& now, const Mat<T>& base) {
      for (Index c = 0; c < now.cols(); ++c) {
        for (Index i = 0; i < now.rows(); ++i) {
          if ((now(i, c) > T(0)) != (base(i, 0) > T(0))) kinked[c] = 1;
        }
      }
    };

    for (std::size_t t = 0; t < steps; ++t) {
      Step& b = base_[t];
      const Mat<T>& x = inputs_[t];
      Mat<T> dense = hit[kDenseIn] ? DenseEval<T>(L[kDenseIn], x, cols, p(kDenseIn))
                                   : b.dense;
      if (hit[kVadGru]) {
        vad_h = GruEval<T>(L[kVadGru], dense, vad_h, cols, p(kVadGru), &cand);
        if (store_base) b.vad_cand = cand; else check_kinks(cand, b.vad_cand);
      } else {
        vad_h = b.vad;
      }
      if (hit[kNoiseGru]) {
        const Mat<T> in = Stack<T>({&dense, &vad_h, &x}, MaxCols<T>({&dense, &vad_h}));
        noise_h = GruEval<T>(L[kNoiseGru], in, noise_h, cols, p(kNoiseGru), &cand);
        if (store_base) b.noise_cand = cand; else check_kinks(cand, b.noise_cand);
      } else {
        noise_h = b.noise;
      }
      if (hit[kDenoiseGru]) {
        const Mat<T> in = Stack<T>({&vad_h, &noise_h, &x}, MaxCols<T>({&vad_h, &noise_h}));
        denoise_h = GruEval<T>(L[kDenoiseGru], in, denoise_h, cols, p(kDenoiseGru), &cand);
        if (store_base) b.denoise_cand = cand; else check_kinks(cand, b.denoise_cand);
      } else {
        denoise_h = b.denoise;
      }
      const Mat<T> gains = hit[kGainsOut]
                               ? DenseEval<T>(L[kGainsOut], denoise_h, cols, p(kGainsOut))
                               : b.gains;
      const Mat<T> vad = hit[kVadOut]
                             ? DenseEval<T>(L[kVadOut], vad_h, cols, p(kVadOut))
                             : b.vad_prob;
      if (store_base) {
        b.dense = dense;
        b.vad = vad_h;
        b.noise = noise_h;
        b.denoise = denoise_h;
        b.gains = gains;
        b.vad_prob = vad;
      }
      const double* target = batch_.gains[t].col(0).data();
      for (Index c = 0; c < cols; ++c) {
        const Index gc = gains.cols() == 1 ? 0 : c;
        const Index vc = vad.cols() == 1 ? 0 : c;
        loss[c] += OracleMaskLoss<T>(target, gains.col(gc).data(), loss_.gamma) +
                   T(loss_.vad_weight) * OracleVadLoss<T>(batch_.vad[t](0), vad(0, vc));
      }
    }
    for (T& l : loss) l /= T(steps);
    return loss;
  }

 private:
  struct Step {
    Mat<T> dense, vad, noise, denoise, gains, vad_prob;
    Mat<T> vad_cand, noise_cand, denoise_cand;
  };

  const SequenceBatch& batch_;
  LossConfig loss_;
  std::array<Layer<T>, kNumLayers> layers_;
  std::vector<Mat<T>> inputs_;
  std::vector<Step> base_;
  T base_loss_ = T(0);
};

struct Entry {
  int layer;
  Tensor tensor;
  Index row;
  Index col;
  double step;
  bool extended = false;  // re-evaluated in extended precision
  bool fourth_order = false;
};

double AnalyticValue(const NetworkModel& g, const Entry& e) {
  const LayerParams& l = g.layers[e.layer];
  switch (e.tensor) {
    case kWeights: return l.input_weights(e.row, e.col);
    case kRecurrent: return l.recurrent_weights(e.row, e.col);
    case kBias: return l.bias(e.row);
  }
  return 0.0;
}

bool Agrees(double analytic, double numeric, const GradCheckConfig& config) {
  const double scale = std::max(std::abs(analytic), std::abs(numeric));
  const double diff = std::abs(analytic - numeric);
  return scale < config.near_zero ? diff <= config.abs_tol
                                  : diff <= config.rel_tol * scale;
}

void Score(GradCheckResult& result, double analytic, double numeric,
           const GradCheckConfig& config) {
  ++result.checked;
  const double scale = std::max(std::abs(analytic), std::abs(numeric));
  const double diff = std::abs(analytic - numeric);
  if (scale < config.near_zero) {
    ++result.near_zero;
    result.max_abs_error = std::max(result.max_abs_error, diff);
  } else {
    result.max_rel_error = std::max(result.max_rel_error, diff / scale);
  }
  if (!Agrees(analytic, numeric, config)) ++result.failed;
}

// Central differences for `entries`, in blocks that never straddle layers.
// Entries that hit a kink are pushed to `retry` with a smaller step.
template <typename T>
void Differentiate(PerturbedForward<T>& forward, const std::vector<Entry>& entries,
                   const GradCheckConfig& config, std::vector<double>& numeric,
                   std::vector<char>& kinked_out) {
  std::vector<Perturbation> pert;
  std::vector<char> kinked;
  numeric.assign(entries.size(), 0.0);
  kinked_out.assign(entries.size(), 0);
  std::size_t begin = 0;
  while (begin < entries.size()) {
    std::size_t end = begin;
    while (end < entries.size() && end - begin < config.block &&
           entries[end].layer == entries[begin].layer) {
      ++end;
    }
    pert.clear();
    std::vector<std::size_t> first;
    for (std::size_t i = begin; i < end; ++i) {
      const Entry& e = entries[i];
      first.push_back(pert.size());
      pert.push_back({e.tensor, e.row, e.col, e.step});
      pert.push_back({e.tensor, e.row, e.col, -e.step});
      if (e.fourth_order) {
        pert.push_back({e.tensor, e.row, e.col, 2.0 * e.step});
        pert.push_back({e.tensor, e.row, e.col, -2.0 * e.step});
      }
    }
    const std::vector<T> losses = forward.Run(
        entries[begin].layer, &pert, static_cast<Index>(pert.size()), kinked);
    for (std::size_t i = begin; i < end; ++i) {
      const Entry& e = entries[i];
      const std::size_t c = first[i - begin];
      const T h(e.step);
      kinked_out[i] = kinked[c] || kinked[c + 1];
      if (e.fourth_order) {
        kinked_out[i] = kinked_out[i] || kinked[c + 2] || kinked[c + 3];
        numeric[i] = static_cast<double>(
            (T(8) * (losses[c] - losses[c + 1]) - (losses[c + 2] - losses[c + 3])) /
            (T(12) * h));
      } else {
        numeric[i] = static_cast<double>((losses[c] - losses[c + 1]) / (T(2) * h));
      }
    }
    begin = end;
  }
}

}  // namespace

double OracleLoss(const NetworkModel& model, const SequenceBatch& batch,
                  const LossConfig& loss) {
  if (batch.batch() != 1) throw Error("oracle loss expects a single sequence");
  return PerturbedForward<double>(model, batch, loss).base_loss();
}

GradCheckResult CheckGradients(const NetworkModel& model,
                               const SequenceBatch& batch,
                               const LossConfig& loss,
                               const GradCheckConfig& config) {
  if (batch.batch() != 1) throw Error("gradient check expects a single sequence");
  const BackwardResult analytic = BackwardTbptt(model, batch, loss);
  PerturbedForward<double> forward(model, batch, loss);
  std::optional<PerturbedForward<long double>> precise;

  std::vector<Entry> pending;
  for (int l = 0; l < static_cast<int>(kNumLayers); ++l) {
    const LayerParams& layer = model.layers[l];
    for (Index j = 0; j < layer.input_weights.cols(); ++j) {
      for (Index i = 0; i < layer.input_weights.rows(); ++i) {
        pending.push_back({l, kWeights, i, j, config.step});
      }
    }
    for (Index j = 0; j < layer.recurrent_weights.cols(); ++j) {
      for (Index i = 0; i < layer.recurrent_weights.rows(); ++i) {
        pending.push_back({l, kRecurrent, i, j, config.step});
      }
    }
    for (Index i = 0; i < layer.bias.size(); ++i) {
      pending.push_back({l, kBias, i, 0, config.step});
    }
  }

  GradCheckResult result;
  std::vector<double> numeric;
  std::vector<char> kinked;
  while (!pending.empty()) {
    std::vector<Entry> plain, ext;
    for (const Entry& e : pending) (e.extended ? ext : plain).push_back(e);
    std::vector<Entry> retry;
    auto settle = [&](const std::vector<Entry>& entries, bool allow_extend) {
      for (std::size_t i = 0; i < entries.size(); ++i) {
        const Entry& e = entries[i];
        if (kinked[i]) {
          if (e.step / 10.0 >= config.min_step * (1.0 - 1e-9)) {
            Entry smaller = e;
            smaller.step /= 10.0;
            retry.push_back(smaller);
            if (e.step == config.step) ++result.reduced_step;
          } else {
            ++result.kinks;
          }
          continue;
        }
        const double a = AnalyticValue(analytic.gradients, e);
        const double scale = std::max(std::abs(a), std::abs(numeric[i]));
        if (allow_extend && scale < config.extended_below &&
            scale >= config.near_zero) {
          Entry again = e;
          again.extended = true;
          retry.push_back(again);
          continue;
        }
        // The two-point estimate carries an O(h^2) truncation error that
        // can exceed the tolerance on small gradients; disagreements are
        // re-evaluated with the fourth-order stencil at the same step.
        if (!e.fourth_order && !Agrees(a, numeric[i], config)) {
          Entry again = e;
          again.fourth_order = true;
          retry.push_back(again);
          ++result.fourth_order;
          continue;
        }
        Score(result, a, numeric[i], config);
      }
    };
    if (!plain.empty()) {
      Differentiate(forward, plain, config, numeric, kinked);
      settle(plain, true);
    }
    if (!ext.empty()) {
      if (!precise) precise.emplace(model, batch, loss);
      Differentiate(*precise, ext, config, numeric, kinked);
      result.extended += ext.size();
      settle(ext, false);
    }
    pending = std::move(retry);
  }
  return result;
}

GradCheckInstance RandomGradCheckInstance(std::uint64_t seed, FeatureMode mode,
                                          std::size_t sequence_len) {
  GradCheckInstance inst;
  inst.model = InitWeights(seed, mode);
  std::mt19937_64 rng(seed ^ 0x5DEECE66DULL);
  std::uniform_real_distribution<double> bias(-0.1, 0.1);
  std::normal_distribution<double> normal(0.0, 1.0);
  std::uniform_real_distribution<double> unit(0.0, 1.0);
  for (LayerParams& layer : inst.model.layers) {
    for (Index i = 0; i < layer.bias.size(); ++i) layer.bias(i) = bias(rng);
  }
  const auto fdim = static_cast<Index>(FeatureDim(mode));
  for (std::size_t t = 0; t < sequence_len; ++t) {
    Eigen::MatrixXd f(fdim, 1);
    for (Index i = 0; i < fdim; ++i) f(i, 0) = normal(rng);
    Eigen::MatrixXd g(kNumBands, 1);
    for (std::size_t b = 0; b < kNumBands; ++b) {
      g(b, 0) = unit(rng) < 0.1 ? kIrmSentinel : unit(rng);
    }
    Eigen::RowVectorXd v(1);
    v(0) = unit(rng) < 0.5 ? 0.0 : 1.0;
    inst.batch.features.push_back(std::move(f));
    inst.batch.gains.push_back(std::move(g));
    inst.batch.vad.push_back(std::move(v));
  }
  return inst;
}

void MergeResult(GradCheckResult& into, const GradCheckResult& r) {
  into.checked += r.checked;
  into.failed += r.failed;
  into.near_zero += r.near_zero;
  into.reduced_step += r.reduced_step;
  into.kinks += r.kinks;
  into.extended += r.extended;
  into.fourth_order += r.fourth_order;
  into.max_rel_error = std::max(into.max_rel_error, r.max_rel_error);
  into.max_abs_error = std::max(into.max_abs_error, r.max_abs_error);
}

}  // namespace rnx
