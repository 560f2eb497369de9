// include/subspoof/pipeline.h

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

// File-level pipeline steps shared by the command-line tool and the python
// module: feature extraction over a protocol, training from feature files,
// scoring, evaluation and F0 histograms.

#ifndef SUBSPOOF_PIPELINE_H_
#define SUBSPOOF_PIPELINE_H_

#include <filesystem>
#include <functional>
#include <optional>
#include <string>
#include <utility>
#include <vector>

#include "subspoof/f0.h"
#include "subspoof/feature_io.h"
#include "subspoof/features.h"
#include "subspoof/metrics.h"
#include "subspoof/net/trainer.h"
#include "subspoof/protocol.h"
#include "subspoof/scores.h"
#include "subspoof/stft.h"

namespace subspoof {

namespace fs = std::filesystem;

struct ExtractOptions {
  StftConfig stft;
  FeatureKind kind = FeatureKind::kLps;
  BandName band = BandName::kF0;
  int frames = kDefaultFrames;
  int jobs = 1;
  FeatureDtype dtype = FeatureDtype::kFloat32;
};

/// STFT -> feature view -> subband -> fixed frame count.
FeatureMatrix ExtractFeature(const Waveform &wave, const ExtractOptions &options);

/// <audio_dir>/<trial_id>.wav, then .flac, then the bare id.
fs::path FindAudio(const fs::path &audio_dir, const std::string &trial_id);

struct ExtractFailure {
  std::string trial_id;
  std::string message;
};

struct ExtractReport {
  std::size_t written = 0;
  std::size_t rows = 0;
  std::size_t cols = 0;
  std::vector<ExtractFailure> failures;  // in protocol order
};

/// Writes <out_dir>/<trial_id>.sbsf for every trial, using options.jobs
/// worker threads.  Per-trial failures are collected, not thrown.
ExtractReport ExtractFeatures(const std::vector<TrialRecord> &protocol,
                              const fs::path &audio_dir, const fs::path &out_dir,
                              const ExtractOptions &options);

/// Reads <features_dir>/<trial_id>.sbsf for every trial; a missing file throws.
std::vector<net::Example> LoadExamples(const std::vector<TrialRecord> &protocol,
                                       const fs::path &features_dir);

/// Initializes a model from tc.seed, trains it, writes the best-dev-EER
/// checkpoint and, if log_csv is non-empty, the "epoch,train_loss,dev_eer" log.
net::TrainResult TrainFromFeatures(const std::vector<net::Example> &train,
                                   const std::vector<net::Example> &dev,
                                   const net::SenetConfig &senet,
                                   const net::TrainConfig &tc, const fs::path &checkpoint,
                                   const fs::path &log_csv = {},
                                   const std::function<void(const net::EpochLog &)>
                                       &on_epoch = {});

void WriteTrainLog(const fs::path &path, const std::vector<net::EpochLog> &log);

/// Scores every protocol trial with the checkpointed model; labels from the
/// protocol are attached.
ScoreSet ScoreFeatures(const fs::path &checkpoint, const fs::path &features_dir,
                       const std::vector<TrialRecord> &protocol);

struct EvalReport {
  std::size_t bonafide = 0;
  std::size_t spoof = 0;
  EerResult eer;
  std::optional<TdcfResult> tdcf;
};

/// scores must be fully labeled.  det_csv, if non-empty, receives
/// "threshold,far,frr" rows.
EvalReport Evaluate(const ScoreSet &scores, const std::optional<TdcfCostModel> &cost,
                    const fs::path &det_csv = {});

/// Histograms of voiced-frame F0, either over all trials ("all") or per label
/// ("bonafide", "spoof").  Throws on the first undecodable file.
std::vector<std::pair<std::string, F0Histogram>> F0Histograms(
    const std::vector<TrialRecord> &protocol, const fs::path &audio_dir,
    const F0Config &config, bool split_by_label, int jobs = 1);

/// "bin_start_hz,bin_end_hz,count" rows.
void WriteHistogramCsv(const fs::path &path, const F0Histogram &hist);

}  // namespace subspoof

#endif  // SUBSPOOF_PIPELINE_H_
