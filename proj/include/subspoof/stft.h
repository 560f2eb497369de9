// include/subspoof/stft.h

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

#ifndef SUBSPOOF_STFT_H_
#define SUBSPOOF_STFT_H_

#include <cstddef>
#include <vector>

#include "subspoof/audio.h"
#include "subspoof/common.h"

namespace subspoof {

enum class WindowType { kBlackman };

struct StftConfig {
  WindowType window = WindowType::kBlackman;
  int window_len = 1728;
  int hop = 130;
  int fft_len = 1728;
  int sample_rate_hz = 16000;

  /// Number of one-sided frequency bins, fft_len / 2 + 1 (865 by default).
  int NumBins() const { return fft_len / 2 + 1; }

  /// Throws unless 0 < hop <= window_len <= fft_len.
  void Validate() const;
};

/// Periodic analysis window of the given length.
std::vector<double> MakeWindow(WindowType type, int length);

/// Real and imaginary STFT parts, each NumBins() x T.
struct ComplexSpectrogram {
  Matrix real;
  Matrix imag;
  StftConfig config;

  std::size_t num_bins() const { return real.rows(); }
  std::size_t num_frames() const { return real.cols(); }
};

/// Frames the signal without centering: frame t covers samples
/// [t * hop, t * hop + window_len).  Signals shorter than one window are
/// zero-padded at the tail to a single window.  Each frame is windowed and
/// zero-padded to fft_len before a forward DFT with kernel exp(-2 pi i k n / N).
///
/// Throws if the waveform is shorter than one hop or its sample rate differs
/// from config.sample_rate_hz.
ComplexSpectrogram Stft(const Waveform &wave, const StftConfig &config = {});

/// Frame count produced by Stft for a signal of num_samples samples.
std::size_t NumFrames(std::size_t num_samples, const StftConfig &config);

}  // namespace subspoof

#endif  // SUBSPOOF_STFT_H_
