// include/subspoof/f0.h

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

#ifndef SUBSPOOF_F0_H_
#define SUBSPOOF_F0_H_

#include <cstdint>
#include <span>
#include <vector>

#include "subspoof/audio.h"

namespace subspoof {

struct F0Config {
  double frame_s = 0.040;
  double hop_s = 0.010;
  double min_hz = 50.0;
  double max_hz = 500.0;
  /// Frames whose best normalized autocorrelation falls below this are unvoiced.
  double voicing_threshold = 0.3;
  /// Frames quieter than this RMS level (dB re full scale) are unvoiced.
  double silence_dbfs = -60.0;
  /// A candidate peak is accepted when it reaches this fraction of the best
  /// peak; the shortest such lag wins, which suppresses subharmonic picks.
  double peak_ratio = 0.9;
};

/// Per-frame F0 in Hz; 0 marks an unvoiced frame.
struct F0Contour {
  std::vector<double> values;
  double frame_hop_s = 0.010;
  double min_hz = 50.0;
  double max_hz = 500.0;

  std::size_t VoicedCount() const;
};

/// Normalized autocorrelation r(lag) of one frame over the overlap
/// [0, N - lag):  sum x[n] x[n+lag] / sqrt(sum x[n]^2 * sum x[n+lag]^2).
double NormalizedAutocorrelation(std::span<const double> frame, int lag);

/// Lag search range [ceil(fs / max_hz), floor(fs / min_hz)].
std::pair<int, int> LagRange(int sample_rate_hz, const F0Config &config);

/// Autocorrelation pitch tracker with parabolic peak refinement.
/// Throws if sample_rate_hz < 2 * max_hz.
F0Contour EstimateF0(const Waveform &wave, const F0Config &config = {});

struct F0Histogram {
  std::vector<double> bin_edges_hz;  // size = counts.size() + 1
  std::vector<std::uint64_t> counts;
  std::size_t n_utterances = 0;

  std::uint64_t Total() const;
  /// Adds another histogram with identical edges.
  void Merge(const F0Histogram &other);
};

/// Edges lo, lo+step, ..., hi.  Defaults give 100 bins of 5 Hz over [0, 500).
std::vector<double> UniformEdges(double lo = 0.0, double hi = 500.0, double step = 5.0);

/// Bins voiced frames into [edge_i, edge_{i+1}); values outside the edge range
/// are dropped.  Throws on non-increasing edges or differing frame hops.
F0Histogram AccumulateHistogram(std::span<const F0Contour> contours,
                                const std::vector<double> &edges = UniformEdges());

struct HistogramSummary {
  double fraction_below_400 = 0.0;
  double modal_bin_start_hz = 0.0;
  double modal_bin_end_hz = 0.0;
  /// Mean absolute difference between adjacent normalized bin counts.
  double smoothness = 0.0;
};

/// Throws on an empty histogram.
HistogramSummary SummarizeHistogram(const F0Histogram &h);

}  // namespace subspoof

#endif  // SUBSPOOF_F0_H_
