// src/pipeline.cc

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

#include "subspoof/pipeline.h"

#include <atomic>
#include <cstdio>
#include <fstream>
#include <thread>

#include "subspoof/audio.h"
#include "subspoof/net/checkpoint.h"

namespace subspoof {

namespace {

// Runs fn(i) for i in [0, n) over `jobs` threads.  Results are written by
// index, so output order never depends on scheduling.
void ParallelFor(std::size_t n, int jobs, const std::function<void(std::size_t)> &fn) {
  const auto workers =
      static_cast<std::size_t>(std::max(1, std::min<int>(jobs, static_cast<int>(n))));
  if (workers <= 1) {
    for (std::size_t i = 0; i < n; ++i) fn(i);
    return;
  }
  std::atomic<std::size_t> next{0};
  std::vector<std::thread> pool;
  for (std::size_t w = 0; w < workers; ++w)
    pool.emplace_back([&] {
      for (std::size_t i = next++; i < n; i = next++) fn(i);
    });
  for (auto &t : pool) t.join();
}

std::ofstream OpenOut(const fs::path &path) {
  if (path.has_parent_path()) fs::create_directories(path.parent_path());
  std::ofstream out(path);
  if (!out) Fail("cannot open ", path.string(), " for writing");
  return out;
}

std::string G17(double v) {
  char buf[40];
  std::snprintf(buf, sizeof buf, "%.17g", v);
  return buf;
}

}  // namespace

FeatureMatrix ExtractFeature(const Waveform &wave, const ExtractOptions &options) {
  ComplexSpectrogram spec = Stft(wave, options.stft);
  FeatureMatrix full = ComputeFeature(spec, options.kind, wave.source_id);
  SubbandSpec band = SubbandSpec::Named(options.band, static_cast<int>(full.rows()));
  return FixFrames(SliceSubband(full, band), options.frames);
}

fs::path FindAudio(const fs::path &audio_dir, const std::string &trial_id) {
  for (const char *ext : {".wav", ".flac", ""}) {
    fs::path p = audio_dir / (trial_id + ext);
    if (fs::is_regular_file(p)) return p;
  }
  Fail("no audio for trial ", trial_id, " in ", audio_dir.string());
}

ExtractReport ExtractFeatures(const std::vector<TrialRecord> &protocol,
                              const fs::path &audio_dir, const fs::path &out_dir,
                              const ExtractOptions &options) {
  options.stft.Validate();
  fs::create_directories(out_dir);
  std::vector<std::string> errors(protocol.size());
  std::vector<std::pair<std::size_t, std::size_t>> shapes(protocol.size());
  ParallelFor(protocol.size(), options.jobs, [&](std::size_t i) {
    const std::string &id = protocol[i].trial_id;
    try {
      Waveform wave = DecodeAudio(FindAudio(audio_dir, id));
      wave.source_id = id;
      FeatureMatrix f = ExtractFeature(wave, options);
      WriteFeatureFile(f, out_dir / (id + ".sbsf"), options.dtype);
      shapes[i] = {f.rows(), f.frames()};
    } catch (const std::exception &e) {
      errors[i] = e.what();
      if (errors[i].empty()) errors[i] = "unknown error";
    }
  });
  ExtractReport report;
  for (std::size_t i = 0; i < protocol.size(); ++i) {
    if (!errors[i].empty()) {
      report.failures.push_back({protocol[i].trial_id, errors[i]});
      continue;
    }
    ++report.written;
    std::tie(report.rows, report.cols) = shapes[i];
  }
  return report;
}

std::vector<net::Example> LoadExamples(const std::vector<TrialRecord> &protocol,
                                       const fs::path &features_dir) {
  std::vector<net::Example> out;
  out.reserve(protocol.size());
  for (const auto &r : protocol) {
    fs::path p = features_dir / (r.trial_id + ".sbsf");
    if (!fs::is_regular_file(p))
      Fail("missing feature file for trial ", r.trial_id, ": ", p.string());
    out.push_back({r.trial_id, ReadFeatureFile(p).data, r.label});
  }
  return out;
}

void WriteTrainLog(const fs::path &path, const std::vector<net::EpochLog> &log) {
  std::ofstream out = OpenOut(path);
  out << "epoch,train_loss,dev_eer\n";
  for (const auto &e : log)
    out << e.epoch << ',' << G17(e.train_loss) << ',' << G17(e.dev_eer) << '\n';
  if (!out) Fail("failed writing ", path.string());
}

net::TrainResult TrainFromFeatures(const std::vector<net::Example> &train,
                                   const std::vector<net::Example> &dev,
                                   const net::SenetConfig &senet,
                                   const net::TrainConfig &tc, const fs::path &checkpoint,
                                   const fs::path &log_csv,
                                   const std::function<void(const net::EpochLog &)> &on_epoch) {
  tc.Validate();
  net::Senet<float> model(senet);
  model.Init(tc.seed);
  net::Adam<float> adam(model.Params(), tc.adam);
  net::TrainResult result = net::Train(&model, &adam, std::span<const net::Example>(train),
                                       std::span<const net::Example>(dev), tc, on_epoch);
  if (checkpoint.has_parent_path()) fs::create_directories(checkpoint.parent_path());
  net::SaveCheckpoint(checkpoint, model, &adam);
  if (!log_csv.empty()) WriteTrainLog(log_csv, result.log);
  return result;
}

ScoreSet ScoreFeatures(const fs::path &checkpoint, const fs::path &features_dir,
                       const std::vector<TrialRecord> &protocol) {
  auto model = net::LoadModel(checkpoint);
  std::vector<net::Example> examples = LoadExamples(protocol, features_dir);
  std::vector<const Matrix *> feats;
  for (const auto &e : examples) feats.push_back(&e.features);
  std::vector<double> scores = net::ScoreExamples(model.get(), feats);
  ScoreSet out;
  for (std::size_t i = 0; i < examples.size(); ++i)
    out.Add(examples[i].trial_id, scores[i], examples[i].label);
  return out;
}

EvalReport Evaluate(const ScoreSet &scores, const std::optional<TdcfCostModel> &cost,
                    const fs::path &det_csv) {
  std::vector<double> bona, spoof;
  SplitByLabel(scores, &bona, &spoof);
  EvalReport report;
  report.bonafide = bona.size();
  report.spoof = spoof.size();
  report.eer = ComputeEer(bona, spoof);
  if (cost) report.tdcf = ComputeMinTdcf(bona, spoof, *cost);
  if (!det_csv.empty()) {
    DetCurve det = DetPoints(bona, spoof);
    std::ofstream out = OpenOut(det_csv);
    out << "threshold,far,frr\n";
    for (std::size_t i = 0; i < det.thresholds.size(); ++i)
      out << G17(det.thresholds[i]) << ',' << G17(det.far[i]) << ',' << G17(det.frr[i])
          << '\n';
    if (!out) Fail("failed writing ", det_csv.string());
  }
  return report;
}

std::vector<std::pair<std::string, F0Histogram>> F0Histograms(
    const std::vector<TrialRecord> &protocol, const fs::path &audio_dir,
    const F0Config &config, bool split_by_label, int jobs) {
  std::vector<F0Contour> contours(protocol.size());
  std::vector<std::string> errors(protocol.size());
  ParallelFor(protocol.size(), jobs, [&](std::size_t i) {
    try {
      contours[i] = EstimateF0(DecodeAudio(FindAudio(audio_dir, protocol[i].trial_id)), config);
    } catch (const std::exception &e) {
      errors[i] = e.what();
    }
  });
  for (std::size_t i = 0; i < protocol.size(); ++i)
    if (!errors[i].empty()) Fail("trial ", protocol[i].trial_id, ": ", errors[i]);

  std::vector<std::pair<std::string, F0Histogram>> out;
  if (!split_by_label) {
    out.emplace_back("all", AccumulateHistogram(contours));
    return out;
  }
  for (Label label : {Label::kBonafide, Label::kSpoof}) {
    std::vector<F0Contour> subset;
    for (std::size_t i = 0; i < protocol.size(); ++i)
      if (protocol[i].label == label) subset.push_back(contours[i]);
    if (!subset.empty())
      out.emplace_back(std::string(LabelName(label)), AccumulateHistogram(subset));
  }
  return out;
}

void WriteHistogramCsv(const fs::path &path, const F0Histogram &hist) {
  std::ofstream out = OpenOut(path);
  out << "bin_start_hz,bin_end_hz,count\n";
  for (std::size_t i = 0; i < hist.counts.size(); ++i)
    out << G17(hist.bin_edges_hz[i]) << ',' << G17(hist.bin_edges_hz[i + 1]) << ','
        << hist.counts[i] << '\n';
  if (!out) Fail("failed writing ", path.string());
}

}  // namespace subspoof
