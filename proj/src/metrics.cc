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

#include "rnx/metrics.h"

#include <algorithm>
#include <cmath>
#include <cstdio>
#include <map>
#include <sstream>

#include "rnx/dsp.h"

namespace rnx {
namespace {

void CheckAligned(const AudioBuffer& a, const AudioBuffer& b) {
  if (a.size() != b.size()) {
    throw Error("length mismatch: " + std::to_string(a.size()) + " vs " +
                std::to_string(b.size()) + " samples");
  }
}

MetricsReport Score(const std::string& system, const std::string& condition,
                    const AudioBuffer& clean, const AudioBuffer& test) {
  const MetricValue snr = SegmentalSnr(clean, test);
  const MetricValue lsd = LogSpectralDistance(clean, test);
  return {system, condition, snr.db, lsd.db, snr.frames};
}

MetricsReport Delta(const std::string& name, const MetricsReport& x,
                    const MetricsReport& y) {
  return {name, x.condition, x.seg_snr_db - y.seg_snr_db, x.lsd_db - y.lsd_db,
          x.frames};
}

}  // namespace

MetricValue SegmentalSnr(const AudioBuffer& clean, const AudioBuffer& test) {
  CheckAligned(clean, test);
  const std::size_t frames = clean.size() / kFrameSize;
  double sum = 0.0;
  std::size_t scored = 0;
  for (std::size_t f = 0; f < frames; ++f) {
    double signal = 0.0, error = 0.0;
    for (std::size_t n = f * kFrameSize; n < (f + 1) * kFrameSize; ++n) {
      const double c = clean.samples[n];
      const double e = c - test.samples[n];
      signal += c * c;
      error += e * e;
    }
    if (signal < kSegSnrEnergyFloor) continue;
    const double db = 10.0 * std::log10(signal / (error + kTinyEps));
    sum += std::clamp(db, kSegSnrFloorDb, kSegSnrCeilingDb);
    ++scored;
  }
  if (scored == 0) throw Error("segmental SNR: no scoreable frames");
  return {sum / static_cast<double>(scored), scored};
}

MetricValue LogSpectralDistance(const AudioBuffer& clean, const AudioBuffer& test) {
  CheckAligned(clean, test);
  const std::size_t frames = clean.size() / kFrameSize;
  if (frames == 0) throw Error("log-spectral distance: signal shorter than a frame");
  double sum = 0.0;
  for (std::size_t f = 0; f < frames; ++f) {
    const std::span<const double> cf(clean.samples.data() + f * kFrameSize, kFrameSize);
    const std::span<const double> tf(test.samples.data() + f * kFrameSize, kFrameSize);
    const FrameSpectrum cs = AnalyzeFrame(cf);
    const FrameSpectrum ts = AnalyzeFrame(tf);
    double acc = 0.0;
    for (std::size_t k = 0; k < kNumBins; ++k) {
      const double d = 20.0 * std::log10(std::abs(cs[k]) + kLsdEpsilon) -
                       20.0 * std::log10(std::abs(ts[k]) + kLsdEpsilon);
      acc += d * d;
    }
    sum += std::sqrt(acc / static_cast<double>(kNumBins));
  }
  return {sum / static_cast<double>(frames), frames};
}

std::vector<MetricsReport> AbCompare(const std::vector<AbCondition>& conditions,
                                     const std::string& name_a,
                                     const std::string& name_b) {
  if (conditions.empty()) throw Error("A/B comparison needs at least one condition");
  const std::array<std::string, 3> systems = {"noisy", name_a, name_b};
  std::vector<MetricsReport> out;
  std::map<std::string, MetricsReport> totals;
  std::map<std::string, double> lsd_weight;
  for (const AbCondition& c : conditions) {
    CheckAligned(c.clean, c.noisy);
    CheckAligned(c.clean, c.system_a);
    CheckAligned(c.clean, c.system_b);
    const std::array<MetricsReport, 3> rows = {
        Score(systems[0], c.condition, c.clean, c.noisy),
        Score(systems[1], c.condition, c.clean, c.system_a),
        Score(systems[2], c.condition, c.clean, c.system_b)};
    const std::size_t lsd_frames = c.clean.size() / kFrameSize;
    for (const MetricsReport& r : rows) {
      out.push_back(r);
      MetricsReport& t = totals[r.system];
      t.system = r.system;
      t.condition = "all";
      t.seg_snr_db += r.seg_snr_db * static_cast<double>(r.frames);
      t.lsd_db += r.lsd_db * static_cast<double>(lsd_frames);
      t.frames += r.frames;
      lsd_weight[r.system] += static_cast<double>(lsd_frames);
    }
    out.push_back(Delta(name_b + "-minus-" + name_a, rows[2], rows[1]));
    out.push_back(Delta(name_a + "-minus-noisy", rows[1], rows[0]));
    out.push_back(Delta(name_b + "-minus-noisy", rows[2], rows[0]));
  }
  std::array<MetricsReport, 3> all;
  for (std::size_t i = 0; i < systems.size(); ++i) {
    MetricsReport t = totals.at(systems[i]);
    t.seg_snr_db /= static_cast<double>(t.frames);
    t.lsd_db /= lsd_weight.at(systems[i]);
    all[i] = t;
    out.push_back(t);
  }
  out.push_back(Delta(name_b + "-minus-" + name_a, all[2], all[1]));
  out.push_back(Delta(name_a + "-minus-noisy", all[1], all[0]));
  out.push_back(Delta(name_b + "-minus-noisy", all[2], all[0]));
  return out;
}

std::string FormatReportLine(const MetricsReport& r) {
  char buf[512];
  std::snprintf(buf, sizeof buf,
                "system=%s condition=%s seg_snr_db=%.9f lsd_db=%.9f frames=%zu",
                r.system.c_str(), r.condition.c_str(), r.seg_snr_db, r.lsd_db,
                r.frames);
  return buf;
}

std::string FormatReport(const std::vector<MetricsReport>& reports) {
  std::string out;
  for (const MetricsReport& r : reports) out += FormatReportLine(r) + "\n";
  return out;
}

std::vector<MetricsReport> ParseReport(const std::string& text) {
  std::vector<MetricsReport> out;
  std::istringstream lines(text);
  std::string line;
  while (std::getline(lines, line)) {
    if (line.empty()) continue;
    MetricsReport r;
    std::istringstream fields(line);
    std::string field;
    int seen = 0;
    while (fields >> field) {
      const auto eq = field.find('=');
      if (eq == std::string::npos) throw Error("malformed report field: " + field);
      const std::string key = field.substr(0, eq);
      const std::string value = field.substr(eq + 1);
      if (key == "system") r.system = value, ++seen;
      else if (key == "condition") r.condition = value, ++seen;
      else if (key == "seg_snr_db") r.seg_snr_db = std::stod(value), ++seen;
      else if (key == "lsd_db") r.lsd_db = std::stod(value), ++seen;
      else if (key == "frames") r.frames = std::stoul(value), ++seen;
    }
    if (seen != 5) throw Error("malformed report line: " + line);
    out.push_back(r);
  }
  return out;
}

void ExportConditionWavs(const std::vector<AbCondition>& conditions,
                         const std::string& name_a, const std::string& name_b,
                         const std::filesystem::path& dir) {
  for (const AbCondition& c : conditions) {
    const std::filesystem::path sub = dir / c.condition;
    std::filesystem::create_directories(sub);
    StoreAudio(c.clean, sub / "clean.wav");
    StoreAudio(c.noisy, sub / "noisy.wav");
    StoreAudio(c.system_a, sub / (name_a + ".wav"));
    StoreAudio(c.system_b, sub / (name_b + ".wav"));
  }
}

}  // namespace rnx
