// include/subspoof/synth.h

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

// Synthetic two-class corpus for desk-scale runs.  Bonafide utterances are
// harmonic tones whose F0 random-walks inside [min_f0_hz, max_f0_hz] around a
// per-utterance base pitch; spoof utterances hold a constant F0 and carry mild
// white noise.  The class difference mirrors the observation that spoofed
// speech has a smoother, less varied F0 distribution.

#ifndef SUBSPOOF_SYNTH_H_
#define SUBSPOOF_SYNTH_H_

#include <cstdint>
#include <filesystem>
#include <string>
#include <vector>

#include "subspoof/audio.h"
#include "subspoof/common.h"
#include "subspoof/protocol.h"

namespace subspoof {

struct SynthConfig {
  int n_per_class = 10;
  std::uint64_t seed = 7;
  std::string split = "train";
  double duration_s = 2.0;
  int sample_rate_hz = 16000;
  double min_f0_hz = 100.0;
  double max_f0_hz = 300.0;
  int harmonics = 6;
  /// Standard deviation of the bonafide F0 random walk per 10 ms step.
  double drift_step_hz = 4.0;
  /// Standard deviation of the spoof noise relative to full scale.
  double noise_std = 0.01;

  void Validate() const;
};

struct SynthUtterance {
  TrialRecord record;
  Waveform wave;
};

/// Deterministic in (config, index).  Bonafide trials come first.
std::vector<SynthUtterance> SynthesizeCorpus(const SynthConfig &config);

/// Writes <out_dir>/<trial_id>.wav and <out_dir>/protocol_<split>.txt and
/// returns the protocol records.
std::vector<TrialRecord> WriteSynthCorpus(const std::filesystem::path &out_dir,
                                          const SynthConfig &config);

/// A harmonic tone at a fixed F0 with 1/h amplitudes, peak amplitude `peak`.
std::vector<double> HarmonicTone(double f0_hz, double duration_s, int sample_rate_hz,
                                 int harmonics = 6, double peak = 0.5);

}  // namespace subspoof

#endif  // SUBSPOOF_SYNTH_H_
