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
#include <filesystem>
#include <random>
#include <string>
#include <vector>

#include "doctest.h"
#include "oracles.h"
#include "rnx/model_io.h"
#include "rnx/neural.h"

using Eigen::MatrixXd;
using rnx::oracle::Sigmoid;

namespace {

rnx::LayerParams Layer(rnx::LayerKind kind, rnx::Activation act, int in, int out) {
  rnx::LayerParams l;
  l.name = "t";
  l.kind = kind;
  l.activation = act;
  l.in_dim = in;
  l.out_dim = out;
  const int rows = kind == rnx::LayerKind::kGru ? 3 * out : out;
  l.input_weights = MatrixXd::Zero(rows, in);
  if (kind == rnx::LayerKind::kGru) l.recurrent_weights = MatrixXd::Zero(rows, out);
  l.bias = Eigen::VectorXd::Zero(rows);
  return l;
}

double Act(rnx::Activation a, double x) {
  switch (a) {
    case rnx::Activation::kTanh: return std::tanh(x);
    case rnx::Activation::kRelu: return x > 0 ? x : 0.0;
    case rnx::Activation::kSigmoid: return Sigmoid(x);
  }
  return 0.0;
}

// Scalar-loop dense layer.
std::vector<double> DenseOracle(const rnx::LayerParams& l, const std::vector<double>& x) {
  std::vector<double> y(l.out_dim);
  for (int i = 0; i < l.out_dim; ++i) {
    double acc = l.bias(i);
    for (int j = 0; j < l.in_dim; ++j) acc += l.input_weights(i, j) * x[j];
    y[i] = Act(l.activation, acc);
  }
  return y;
}

// Scalar-loop GRU step with gate order [z, r, candidate].
std::vector<double> GruOracle(const rnx::LayerParams& l, const std::vector<double>& x,
                              const std::vector<double>& h) {
  const int n = l.out_dim;
  auto row = [&](int r, const std::vector<double>* hin) {
    double acc = l.bias(r);
    for (int j = 0; j < l.in_dim; ++j) acc += l.input_weights(r, j) * x[j];
    if (hin) {
      for (int j = 0; j < n; ++j) acc += l.recurrent_weights(r, j) * (*hin)[j];
    }
    return acc;
  };
  std::vector<double> z(n), r(n), rh(n), out(n);
  for (int i = 0; i < n; ++i) {
    z[i] = Sigmoid(row(i, &h));
    r[i] = Sigmoid(row(n + i, &h));
    rh[i] = r[i] * h[i];
  }
  for (int i = 0; i < n; ++i) {
    const double c = Act(l.activation, row(2 * n + i, &rh));
    out[i] = z[i] * h[i] + (1.0 - z[i]) * c;
  }
  return out;
}

void Randomize(rnx::LayerParams& l, std::mt19937_64& rng) {
  std::normal_distribution<double> g(0.0, 0.5);
  for (Eigen::Index i = 0; i < l.input_weights.size(); ++i) l.input_weights.data()[i] = g(rng);
  for (Eigen::Index i = 0; i < l.recurrent_weights.size(); ++i) l.recurrent_weights.data()[i] = g(rng);
  for (Eigen::Index i = 0; i < l.bias.size(); ++i) l.bias(i) = g(rng);
}

MatrixXd Column(const std::vector<double>& v) {
  return Eigen::Map<const Eigen::VectorXd>(v.data(), static_cast<Eigen::Index>(v.size()));
}

std::filesystem::path TempPath(const std::string& name) {
  const auto dir = std::filesystem::temp_directory_path() / "rnx_neural_test";
  std::filesystem::create_directories(dir);
  return dir / name;
}

}  // namespace

TEST_CASE("dense layer") {
  rnx::LayerParams l = Layer(rnx::LayerKind::kDense, rnx::Activation::kSigmoid, 3, 2);
  l.bias << 0.3, -1.2;
  const MatrixXd y = rnx::DenseForward(l, MatrixXd::Random(3, 1));
  CHECK(y(0, 0) == doctest::Approx(Sigmoid(0.3)));
  CHECK(y(1, 0) == doctest::Approx(Sigmoid(-1.2)));

  rnx::LayerParams relu = Layer(rnx::LayerKind::kDense, rnx::Activation::kRelu, 1, 1);
  relu.input_weights(0, 0) = 1.0;
  CHECK(rnx::DenseForward(relu, MatrixXd::Constant(1, 1, -3.0))(0, 0) == 0.0);

  std::mt19937_64 rng(1);
  std::normal_distribution<double> g(0.0, 1.0);
  for (auto act : {rnx::Activation::kTanh, rnx::Activation::kRelu, rnx::Activation::kSigmoid}) {
    rnx::LayerParams r = Layer(rnx::LayerKind::kDense, act, 7, 5);
    Randomize(r, rng);
    std::vector<double> x(7);
    for (double& v : x) v = g(rng);
    const MatrixXd got = rnx::DenseForward(r, Column(x));
    const auto ref = DenseOracle(r, x);
    for (int i = 0; i < 5; ++i) CHECK(std::abs(got(i, 0) - ref[i]) < 1e-12);
  }
}

TEST_CASE("gru step") {
  rnx::LayerParams zero = Layer(rnx::LayerKind::kGru, rnx::Activation::kRelu, 4, 3);
  const MatrixXd h0 = rnx::GruStep(zero, MatrixXd::Random(4, 1), MatrixXd::Zero(3, 1));
  CHECK(h0.norm() == 0.0);

  rnx::LayerParams sat = zero;
  sat.bias.head(3).setConstant(50.0);
  const MatrixXd h = MatrixXd::Constant(3, 1, 0.7);
  const MatrixXd h1 = rnx::GruStep(sat, MatrixXd::Random(4, 1), h);
  for (int i = 0; i < 3; ++i) CHECK(h1(i, 0) == doctest::Approx(0.7).epsilon(1e-12));

  // One unit, fixed scalars, several steps by hand.
  rnx::LayerParams s = Layer(rnx::LayerKind::kGru, rnx::Activation::kRelu, 1, 1);
  s.input_weights << 0.5, -0.3, 0.8;
  s.recurrent_weights << 0.2, 0.4, -0.6;
  s.bias << 0.1, 0.05, -0.2;
  double hs = 0.0;
  MatrixXd hm = MatrixXd::Zero(1, 1);
  for (double x : {1.0, -0.5, 2.0, 0.25}) {
    const double z = Sigmoid(0.5 * x + 0.2 * hs + 0.1);
    const double r = Sigmoid(-0.3 * x + 0.4 * hs + 0.05);
    const double pre = 0.8 * x - 0.6 * (r * hs) - 0.2;
    hs = z * hs + (1 - z) * (pre > 0 ? pre : 0.0);
    hm = rnx::GruStep(s, MatrixXd::Constant(1, 1, x), hm);
    CHECK(std::abs(hm(0, 0) - hs) < 1e-12);
  }

  std::mt19937_64 rng(2);
  std::normal_distribution<double> g(0.0, 1.0);
  rnx::LayerParams r = Layer(rnx::LayerKind::kGru, rnx::Activation::kRelu, 6, 5);
  Randomize(r, rng);
  std::vector<double> x(6), hv(5);
  for (double& v : x) v = g(rng);
  for (double& v : hv) v = g(rng);
  const MatrixXd got = rnx::GruStep(r, Column(x), Column(hv));
  const auto ref = GruOracle(r, x, hv);
  for (int i = 0; i < 5; ++i) CHECK(std::abs(got(i, 0) - ref[i]) < 1e-12);
}

TEST_CASE("topology") {
  for (auto mode : {rnx::FeatureMode::kReference, rnx::FeatureMode::kExtended}) {
    const rnx::NetworkModel m = rnx::MakeTopology(mode);
    CHECK(rnx::TotalUnits(m) == 215);
    CHECK(rnx::HiddenLayerCount(m) == 4);
    CHECK(rnx::OutputLayerCount(m) == 2);
    CHECK(m.layers[rnx::kDenseIn].in_dim == static_cast<int>(rnx::FeatureDim(mode)));
    CHECK(m.layers[rnx::kGainsOut].out_dim == 22);
    CHECK(m.layers[rnx::kVadOut].out_dim == 1);
    CHECK_NOTHROW(rnx::ValidateModel(m));
  }
}

TEST_CASE("zero model outputs one half everywhere") {
  const rnx::NetworkModel m = rnx::MakeTopology(rnx::FeatureMode::kExtended);
  const std::vector<double> f(45, 0.7);
  const rnx::NetworkOutput o = rnx::NetworkForward(m, f, {});
  for (double v : o.mask) CHECK(v == 0.5);
  CHECK(o.vad == 0.5);
  CHECK_THROWS_AS(rnx::NetworkForward(m, std::vector<double>(42), {}), rnx::Error);
}

TEST_CASE("network forward matches layer-by-layer composition") {
  const rnx::NetworkModel m = rnx::InitWeights(9, rnx::FeatureMode::kExtended);
  std::mt19937_64 rng(3);
  std::normal_distribution<double> g(0.0, 1.0);
  std::vector<double> vad(24, 0.0), noise(48, 0.0), den(96, 0.0);
  rnx::HiddenState state;
  for (int t = 0; t < 4; ++t) {
    std::vector<double> f(45);
    for (double& v : f) v = g(rng);
    const auto d = DenseOracle(m.layers[rnx::kDenseIn], f);
    vad = GruOracle(m.layers[rnx::kVadGru], d, vad);
    std::vector<double> in = d;
    in.insert(in.end(), vad.begin(), vad.end());
    in.insert(in.end(), f.begin(), f.end());
    noise = GruOracle(m.layers[rnx::kNoiseGru], in, noise);
    in = vad;
    in.insert(in.end(), noise.begin(), noise.end());
    in.insert(in.end(), f.begin(), f.end());
    den = GruOracle(m.layers[rnx::kDenoiseGru], in, den);
    const auto gains = DenseOracle(m.layers[rnx::kGainsOut], den);
    const auto v = DenseOracle(m.layers[rnx::kVadOut], vad);

    const rnx::NetworkOutput o = rnx::NetworkForward(m, f, state);
    for (int b = 0; b < 22; ++b) CHECK(std::abs(o.mask[b] - gains[b]) < 1e-10);
    CHECK(std::abs(o.vad - v[0]) < 1e-10);
    const rnx::NetworkOutput again = rnx::NetworkForward(m, f, state);
    CHECK(again.mask == o.mask);
    state = o.state;
  }
}

TEST_CASE("weight initialization") {
  const auto a = rnx::InitWeights(5, rnx::FeatureMode::kExtended);
  const auto b = rnx::InitWeights(5, rnx::FeatureMode::kExtended);
  const auto c = rnx::InitWeights(6, rnx::FeatureMode::kExtended);
  CHECK(rnx::SerializeModel(a) == rnx::SerializeModel(b));
  CHECK(rnx::SerializeModel(a) != rnx::SerializeModel(c));
  for (const auto& l : a.layers) {
    const double limit = std::sqrt(6.0 / (l.in_dim + l.out_dim));
    CHECK(l.input_weights.cwiseAbs().maxCoeff() <= limit);
    if (l.kind == rnx::LayerKind::kGru) CHECK(l.recurrent_weights.cwiseAbs().maxCoeff() <= limit);
    CHECK(l.bias.isZero(0.0));
    for (Eigen::Index i = 0; i < l.input_weights.size(); ++i) {
      const double w = l.input_weights.data()[i];
      CHECK(static_cast<double>(static_cast<float>(w)) == w);
    }
  }
}

TEST_CASE("model file round trip") {
  rnx::NetworkModel m = rnx::InitWeights(11, rnx::FeatureMode::kExtended);
  m.stats.mean = {120.5f, 80.25f, 300.0f};
  m.stats.std = {10.0f, 5.5f, 40.0f};
  const auto path = TempPath("m.rnxm");
  rnx::SaveModel(m, path);
  const rnx::NetworkModel back = rnx::LoadModel(path);
  CHECK(back.mode == rnx::FeatureMode::kExtended);
  CHECK(back.stats.mean == m.stats.mean);
  CHECK(back.stats.std == m.stats.std);
  for (std::size_t l = 0; l < rnx::kNumLayers; ++l) {
    CHECK(back.layers[l].name == m.layers[l].name);
    CHECK(back.layers[l].input_weights == m.layers[l].input_weights);
    CHECK(back.layers[l].recurrent_weights == m.layers[l].recurrent_weights);
    CHECK(back.layers[l].bias == m.layers[l].bias);
  }
  CHECK(rnx::SerializeModel(back) == rnx::SerializeModel(m));

  std::string bytes = rnx::SerializeModel(m);
  bytes[0] = 'X';
  CHECK_THROWS_WITH_AS(rnx::DeserializeModel(bytes), doctest::Contains("bad magic"), rnx::Error);
  std::string truncated = rnx::SerializeModel(m);
  truncated.resize(truncated.size() - 3);
  CHECK_THROWS_AS(rnx::DeserializeModel(truncated), rnx::Error);
  CHECK_THROWS_AS(rnx::DeserializeModel(rnx::SerializeModel(m) + "x"), rnx::Error);
}
