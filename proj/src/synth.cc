// src/synth.cc

// Copyright 2026  The subspoof Authors
//
// Licensed under the Apache License, Version 2.0 (the "License");
// you may not use this file except in compliance with the License.
// You may obtain a copy of the License at
//
//  http://www.apache.org/licenses/LICENSE-2.0
//
// THIS CODE IS PROVIDED *AS IS* BASIS, WITHOUT WARRANTIES OR CONDITIONS OF ANY
// KIND, EITHER EXPRESS OR IMPLIED, INCLUDING WITHOUT LIMITATION ANY IMPLIED
// WARRANTIES OR CONDITIONS OF TITLE, FITNESS FOR A PARTICULAR PURPOSE,
// MERCHANTABLITY OR NON-INFRINGEMENT.
// See the Apache 2 License for the specific language governing permissions and
// limitations under the License.

#include "subspoof/synth.h"

#include <algorithm>
#include <cmath>
#include <cstdio>
#include <numbers>
#include <random>

namespace subspoof {

namespace {

constexpr double kControlHop_s = 0.010;

// Renders sum_h a_h sin(phi_h) with phi_h integrating h * f0(t); harmonics at
// or above Nyquist are dropped.  f0_control holds one value per 10 ms and is
// interpolated linearly between control points.
std::vector<double> Render(const std::vector<double> &f0_control, std::size_t num_samples,
                           int sample_rate_hz, int harmonics, double amplitude,
                           double phase0) {
  std::vector<double> out(num_samples, 0.0);
  const double step = kControlHop_s * sample_rate_hz;
  const double nyquist = 0.5 * sample_rate_hz;
  double norm = 0.0;
  for (int h = 1; h <= harmonics; ++h) norm += 1.0 / h;
  double phase = phase0;
  for (std::size_t n = 0; n < num_samples; ++n) {
    double pos = n / step;
    std::size_t i = std::min(static_cast<std::size_t>(pos), f0_control.size() - 1);
    std::size_t j = std::min(i + 1, f0_control.size() - 1);
    double frac = std::clamp(pos - static_cast<double>(i), 0.0, 1.0);
    double f0 = f0_control[i] + frac * (f0_control[j] - f0_control[i]);
    double acc = 0.0;
    for (int h = 1; h <= harmonics; ++h)
      if (h * f0 < nyquist) acc += std::sin(h * phase) / h;
    out[n] = amplitude * acc / norm;
    phase += 2.0 * std::numbers::pi * f0 / sample_rate_hz;
    if (phase > 2.0 * std::numbers::pi) phase -= 2.0 * std::numbers::pi;
  }
  return out;
}

std::string TrialId(const std::string &split, char cls, int index) {
  char buf[64];
  std::snprintf(buf, sizeof buf, "SYN_%s_%c_%04d", split.c_str(), cls, index);
  return buf;
}

}  // namespace

void SynthConfig::Validate() const {
  if (n_per_class < 1) Fail("synthetic corpus needs n_per_class ≥ 1, got ", n_per_class);
  if (!(duration_s > 0.0)) Fail("synthetic duration must be positive");
  if (sample_rate_hz < 2 * max_f0_hz) Fail("sample rate too low for the F0 range");
  if (!(min_f0_hz > 0.0 && min_f0_hz < max_f0_hz)) Fail("bad synthetic F0 range");
  if (harmonics < 1) Fail("harmonics must be ≥ 1");
  if (split.empty() || split.find_first_of(" \t/") != std::string::npos)
    Fail("split name must be non-empty without spaces or slashes");
}

std::vector<double> HarmonicTone(double f0_hz, double duration_s, int sample_rate_hz,
                                 int harmonics, double peak) {
  auto n = static_cast<std::size_t>(std::llround(duration_s * sample_rate_hz));
  return Render({f0_hz}, n, sample_rate_hz, harmonics, peak, 0.0);
}

std::vector<SynthUtterance> SynthesizeCorpus(const SynthConfig &config) {
  config.Validate();
  const auto num_samples =
      static_cast<std::size_t>(std::llround(config.duration_s * config.sample_rate_hz));
  const auto num_controls =
      static_cast<std::size_t>(std::ceil(config.duration_s / kControlHop_s)) + 1;
  const double lo = config.min_f0_hz, hi = config.max_f0_hz;
  // Base pitches stay away from the edges so the walk has room to move.
  const double margin = 0.15 * (hi - lo);

  std::vector<SynthUtterance> corpus;
  for (int cls = 0; cls < 2; ++cls) {
    const bool bonafide = cls == 0;
    for (int i = 0; i < config.n_per_class; ++i) {
      // One stream per utterance keeps each file independent of n_per_class.
      std::seed_seq seq{static_cast<std::uint32_t>(config.seed),
                        static_cast<std::uint32_t>(config.seed >> 32),
                        static_cast<std::uint32_t>(cls), static_cast<std::uint32_t>(i)};
      std::mt19937_64 rng(seq);
      std::uniform_real_distribution<double> uni(0.0, 1.0);
      std::normal_distribution<double> gauss(0.0, 1.0);

      const double base = lo + margin + uni(rng) * (hi - lo - 2.0 * margin);
      const double amplitude = 0.3 + 0.3 * uni(rng);
      const double phase0 = 2.0 * std::numbers::pi * uni(rng);
      std::vector<double> control(num_controls, base);
      if (bonafide) {
        double f = base;
        for (auto &c : control) {
          f += config.drift_step_hz * gauss(rng);
          // Reflect at the range edges.
          if (f < lo) f = 2.0 * lo - f;
          if (f > hi) f = 2.0 * hi - f;
          f = std::clamp(f, lo, hi);
          c = f;
        }
      }
      SynthUtterance u;
      u.wave.samples =
          Render(control, num_samples, config.sample_rate_hz, config.harmonics, amplitude,
                 phase0);
      if (!bonafide)
        for (auto &s : u.wave.samples) s += config.noise_std * gauss(rng);
      for (auto &s : u.wave.samples) s = std::clamp(s, -1.0, 1.0);
      u.wave.sample_rate_hz = config.sample_rate_hz;
      u.record.speaker_id = "SYN_" + std::to_string(i % 10);
      u.record.trial_id = TrialId(config.split, bonafide ? 'B' : 'S', i);
      u.record.attack_id = bonafide ? "-" : "S01";
      u.record.label = bonafide ? Label::kBonafide : Label::kSpoof;
      u.wave.source_id = u.record.trial_id;
      corpus.push_back(std::move(u));
    }
  }
  return corpus;
}

std::vector<TrialRecord> WriteSynthCorpus(const std::filesystem::path &out_dir,
                                          const SynthConfig &config) {
  std::vector<SynthUtterance> corpus = SynthesizeCorpus(config);
  std::error_code ec;
  std::filesystem::create_directories(out_dir, ec);
  if (ec) Fail("cannot create ", out_dir.string(), ": ", ec.message());
  std::vector<TrialRecord> records;
  for (const auto &u : corpus) {
    WriteWav(out_dir / (u.record.trial_id + ".wav"), u.wave.samples, u.wave.sample_rate_hz);
    records.push_back(u.record);
  }
  WriteProtocol(out_dir / ("protocol_" + config.split + ".txt"), records);
  return records;
}

}  // namespace subspoof
