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

#include "cli.h"

#include <cstdarg>
#include <cstdio>
#include <filesystem>
#include <fstream>
#include <map>
#include <optional>
#include <ostream>
#include <string>
#include <vector>

#include "CLI11.hpp"
#include "rnx/audio_io.h"
#include "rnx/dataset.h"
#include "rnx/denoiser.h"
#include "rnx/feature_extractor.h"
#include "rnx/gradcheck.h"
#include "rnx/metrics.h"
#include "rnx/model_io.h"
#include "rnx/trainer.h"

namespace rnx::cli {
namespace {

namespace fs = std::filesystem;

std::string Format(const char* fmt, ...) {
  va_list args;
  va_start(args, fmt);
  va_list copy;
  va_copy(copy, args);
  const int n = std::vsnprintf(nullptr, 0, fmt, copy);
  va_end(copy);
  std::string s(static_cast<std::size_t>(n), '\0');
  std::vsnprintf(s.data(), s.size() + 1, fmt, args);
  va_end(args);
  return s;
}

const std::map<std::string, FeatureMode> kModes = {
    {"reference", FeatureMode::kReference}, {"extended", FeatureMode::kExtended}};

std::vector<AudioBuffer> LoadAll(const fs::path& path) {
  std::vector<AudioBuffer> out;
  for (const fs::path& p : ListAudioFiles(path)) out.push_back(LoadAudio(p));
  if (out.empty()) throw Error("no audio files under " + path.string());
  return out;
}

void WriteText(const fs::path& path, const std::string& text) {
  std::ofstream f(path, std::ios::binary);
  if (!f) throw Error("cannot open " + path.string() + " for writing");
  f << text;
  if (!f) throw Error("write failed: " + path.string());
}

// ---- mix

struct MixArgs {
  std::string clean, noise, out;
  std::size_t frames = 0;
  double snr_min = -5.0, snr_max = 20.0;
  FeatureMode mode = FeatureMode::kExtended;
  std::uint64_t seed = 0;
};

void RunMix(const MixArgs& a, std::ostream& out) {
  if (a.snr_min > a.snr_max) throw Error("mix: --snr-min exceeds --snr-max");
  const std::vector<AudioBuffer> clean = LoadAll(a.clean);
  const std::vector<AudioBuffer> noise = LoadAll(a.noise);
  MixConfig config;
  config.snr_min_db = a.snr_min;
  config.snr_max_db = a.snr_max;
  config.seed = a.seed;
  config.frame_target = a.frames;
  const FeatureDataset data = BuildDataset(clean, noise, config, a.mode);
  data.Save(a.out);
  out << Format("frames=%zu feature_dim=%zu\n", data.frames(), data.feature_dim());
}

// ---- train

struct TrainArgs {
  std::string data, out, log;
  int epochs = 120, steps = 8, threads = 1;
  double lr = 0.001;
  std::size_t seq_len = 500, batch = 32;
  std::optional<FeatureMode> mode;
  std::uint64_t seed = 0;
};

void RunTrain(const TrainArgs& a, std::ostream& out) {
  const FeatureDataset data = FeatureDataset::Load(a.data);
  const FeatureMode mode = a.mode.value_or(data.mode());
  TrainConfig config;
  config.epochs = a.epochs;
  config.steps_per_epoch = a.steps;
  config.adam.learning_rate = a.lr;
  config.sequence_len = a.seq_len;
  config.batch_sequences = a.batch;
  config.seed = a.seed;
  config.threads = a.threads;

  std::ofstream log_file;
  if (!a.log.empty()) {
    log_file.open(a.log, std::ios::binary);
    if (!log_file) throw Error("cannot open " + a.log + " for writing");
  }
  std::ostream& log = a.log.empty() ? out : log_file;
  const NetworkModel model = Train(data, config, mode, [&](const TrainLogEntry& e) {
    log << Format("epoch=%d step=%d loss=%.9f\n", e.epoch, e.step, e.loss);
  });
  SaveModel(model, a.out);
}

// ---- denoise

struct DenoiseArgs {
  std::string model, in, out, dump;
  bool no_pitch = false, no_mask = false;
};

void RunDenoise(const DenoiseArgs& a, std::ostream& out) {
  const NetworkModel model = LoadModel(a.model);
  DenoiseOptions options;
  options.bypass_pitch = a.no_pitch;
  options.bypass_mask = a.no_mask;
  const DenoiseSummary s = DenoiseFile(model, a.in, a.out, options);
  if (!a.dump.empty()) WriteMaskDump(s.hops, a.dump);
  out << Format("frames=%zu mean_vad=%.6f mean_hop_ms=%.6f\n", s.frames, s.mean_vad,
                s.mean_hop_ms);
}

// ---- eval

struct EvalArgs {
  std::string clean, noisy, a, b, report, export_dir;
  std::string name_a = "a", name_b = "b";
};

fs::path Counterpart(const fs::path& root, const fs::path& clean_file) {
  if (!fs::is_directory(root)) return root;
  const fs::path p = root / clean_file.filename();
  if (!fs::exists(p)) throw Error("eval: missing " + p.string());
  return p;
}

void RunEval(const EvalArgs& a, std::ostream& out) {
  if (fs::is_directory(a.clean)) {
    for (const auto* p : {&a.noisy, &a.a, &a.b}) {
      if (!fs::is_directory(*p)) {
        throw Error("eval: --clean is a directory, so " + *p + " must be one too");
      }
    }
  }
  std::vector<AbCondition> conditions;
  for (const fs::path& clean : ListAudioFiles(a.clean)) {
    AbCondition c;
    c.condition = clean.stem().string();
    c.clean = LoadAudio(clean);
    c.noisy = LoadAudio(Counterpart(a.noisy, clean));
    c.system_a = LoadAudio(Counterpart(a.a, clean));
    c.system_b = LoadAudio(Counterpart(a.b, clean));
    const std::size_t n = c.clean.size();
    if (c.noisy.size() != n || c.system_a.size() != n || c.system_b.size() != n) {
      throw Error("eval: length mismatch in condition " + c.condition);
    }
    conditions.push_back(std::move(c));
  }
  if (conditions.empty()) throw Error("eval: no audio files under " + a.clean);
  const std::string text = FormatReport(AbCompare(conditions, a.name_a, a.name_b));
  WriteText(a.report, text);
  if (!a.export_dir.empty()) {
    ExportConditionWavs(conditions, a.name_a, a.name_b, a.export_dir);
  }
  out << text;
}

// ---- features

struct FeaturesArgs {
  std::string in, out, model;
  std::optional<FeatureMode> mode;
  bool extras = false;
};

void RunFeatures(const FeaturesArgs& a) {
  std::optional<NetworkModel> model;
  if (!a.model.empty()) model = LoadModel(a.model);
  FeatureMode mode = a.mode.value_or(FeatureMode::kExtended);
  if (model) {
    if (a.mode && *a.mode != model->mode) {
      throw Error("features: --mode disagrees with the model's mode");
    }
    mode = model->mode;
  }
  const AudioBuffer audio = LoadAudio(a.in);
  const std::size_t dim = FeatureDim(mode);

  std::string csv = "frame";
  for (std::size_t i = 0; i < dim; ++i) csv += "," + FeatureName(i);
  if (a.extras) csv += ",rms,flatness";
  csv += '\n';
  FeatureExtractor extractor(mode);
  const std::span<const double> samples(audio.samples);
  for (std::size_t h = 0; h + kHopSize <= samples.size(); h += kHopSize) {
    const FrameAnalysis fa = extractor.Process(samples.subspan(h, kHopSize));
    std::vector<double> values = fa.features.values;
    if (model && mode == FeatureMode::kExtended) StandardizeExtras(values, model->stats);
    csv += std::to_string(fa.features.frame_index);
    for (double v : values) csv += Format(",%.9g", v);
    if (a.extras) {
      csv += Format(",%.9g,%.9g", Rms(extractor.current_frame()),
                    SpectralFlatness(fa.spectrum));
    }
    csv += '\n';
  }
  WriteText(a.out, csv);
}

// ---- gradcheck

struct GradcheckArgs {
  std::uint64_t seed = 0;
  std::size_t instances = 20, seq_len = 5;
  FeatureMode mode = FeatureMode::kExtended;
};

bool RunGradcheck(const GradcheckArgs& a, std::ostream& out) {
  GradCheckResult total;
  for (std::size_t i = 0; i < a.instances; ++i) {
    const GradCheckInstance inst = RandomGradCheckInstance(a.seed + i, a.mode, a.seq_len);
    const GradCheckResult r = CheckGradients(inst.model, inst.batch, {});
    out << Format("instance=%zu checked=%zu failed=%zu max_rel_error=%.3e\n", i,
                  r.checked, r.failed, r.max_rel_error);
    MergeResult(total, r);
  }
  out << Format(
      "max_rel_error=%.6e max_abs_error=%.6e checked=%zu failed=%zu near_zero=%zu "
      "kinks=%zu\n",
      total.max_rel_error, total.max_abs_error, total.checked, total.failed,
      total.near_zero, total.kinks);
  return total.passed();
}

}  // namespace

int Run(int argc, char** argv, std::ostream& out, std::ostream& err) {
  CLI::App app{"rnx: recurrent band-mask speech denoiser toolkit"};
  app.require_subcommand(1);

  MixArgs mix;
  CLI::App* mix_cmd = app.add_subcommand("mix", "Mix clean speech with noise into a feature file");
  mix_cmd->add_option("--clean", mix.clean, "Clean speech file or directory")->required();
  mix_cmd->add_option("--noise", mix.noise, "Noise file or directory")->required();
  mix_cmd->add_option("--out", mix.out, "Output .rnxf file")->required();
  mix_cmd->add_option("--frames", mix.frames, "Frames to generate (0: one pass)");
  mix_cmd->add_option("--snr-min", mix.snr_min, "Lowest mixture SNR in dB");
  mix_cmd->add_option("--snr-max", mix.snr_max, "Highest mixture SNR in dB");
  mix_cmd->add_option("--mode", mix.mode, "reference or extended")
      ->transform(CLI::CheckedTransformer(kModes, CLI::ignore_case));
  mix_cmd->add_option("--seed", mix.seed);

  TrainArgs train;
  CLI::App* train_cmd = app.add_subcommand("train", "Train a model on a feature file");
  train_cmd->add_option("--data", train.data, "Input .rnxf file")->required();
  train_cmd->add_option("--out", train.out, "Output .rnxm file")->required();
  train_cmd->add_option("--epochs", train.epochs);
  train_cmd->add_option("--steps", train.steps, "Adam steps per epoch");
  train_cmd->add_option("--lr", train.lr);
  train_cmd->add_option("--seq-len", train.seq_len);
  train_cmd->add_option("--batch", train.batch);
  train_cmd->add_option("--mode", train.mode, "Defaults to the data's mode")
      ->transform(CLI::CheckedTransformer(kModes, CLI::ignore_case));
  train_cmd->add_option("--seed", train.seed);
  train_cmd->add_option("--threads", train.threads)->check(CLI::PositiveNumber);
  train_cmd->add_option("--log", train.log, "Loss log file (default stdout)");

  DenoiseArgs denoise;
  CLI::App* denoise_cmd = app.add_subcommand("denoise", "Denoise an audio file");
  denoise_cmd->add_option("--model", denoise.model)->required();
  denoise_cmd->add_option("--in", denoise.in)->required();
  denoise_cmd->add_option("--out", denoise.out)->required();
  denoise_cmd->add_flag("--no-pitch-filter", denoise.no_pitch);
  denoise_cmd->add_flag("--no-mask", denoise.no_mask);
  denoise_cmd->add_option("--dump-masks", denoise.dump, "Per-hop gain sidecar");

  EvalArgs eval;
  CLI::App* eval_cmd = app.add_subcommand("eval", "Score two systems against clean references");
  eval_cmd->add_option("--clean", eval.clean)->required();
  eval_cmd->add_option("--noisy", eval.noisy)->required();
  eval_cmd->add_option("--denoised-a", eval.a)->required();
  eval_cmd->add_option("--denoised-b", eval.b)->required();
  eval_cmd->add_option("--report", eval.report)->required();
  eval_cmd->add_option("--name-a", eval.name_a);
  eval_cmd->add_option("--name-b", eval.name_b);
  eval_cmd->add_option("--export-dir", eval.export_dir, "Write per-condition WAVs here");

  FeaturesArgs features;
  CLI::App* features_cmd = app.add_subcommand("features", "Dump per-frame features as CSV");
  features_cmd->add_option("--in", features.in)->required();
  features_cmd->add_option("--out", features.out)->required();
  features_cmd->add_option("--mode", features.mode)
      ->transform(CLI::CheckedTransformer(kModes, CLI::ignore_case));
  features_cmd->add_option("--model", features.model, "Standardize with this model's stats");
  features_cmd->add_flag("--extras", features.extras, "Append RMS and spectral flatness");

  GradcheckArgs gradcheck;
  CLI::App* gradcheck_cmd =
      app.add_subcommand("gradcheck", "Finite-difference check of the analytic gradients");
  gradcheck_cmd->add_option("--seed", gradcheck.seed);
  gradcheck_cmd->add_option("--instances", gradcheck.instances);
  gradcheck_cmd->add_option("--seq-len", gradcheck.seq_len);
  gradcheck_cmd->add_option("--mode", gradcheck.mode)
      ->transform(CLI::CheckedTransformer(kModes, CLI::ignore_case));

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    return app.exit(e, out, err);
  }

  try {
    if (*mix_cmd) RunMix(mix, out);
    if (*train_cmd) RunTrain(train, out);
    if (*denoise_cmd) RunDenoise(denoise, out);
    if (*eval_cmd) RunEval(eval, out);
    if (*features_cmd) RunFeatures(features);
    if (*gradcheck_cmd && !RunGradcheck(gradcheck, out)) {
      err << "gradcheck: analytic and numeric gradients disagree\n";
      return 2;
    }
  } catch (const std::exception& e) {
    err << "error: " << e.what() << '\n';
    return 1;
  }
  return 0;
}

}  // namespace rnx::cli
