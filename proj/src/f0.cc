// src/f0.cc

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

#include "subspoof/f0.h"

#include <algorithm>
#include <cmath>
#include <numeric>

#include "subspoof/common.h"

namespace subspoof {

std::size_t F0Contour::VoicedCount() const {
  return static_cast<std::size_t>(
      std::count_if(values.begin(), values.end(), [](double v) { return v > 0.0; }));
}

double NormalizedAutocorrelation(std::span<const double> frame, int lag) {
  const std::size_t n = frame.size();
  if (lag <= 0 || static_cast<std::size_t>(lag) >= n) return 0.0;
  double cross = 0.0, e0 = 0.0, e1 = 0.0;
  for (std::size_t i = 0; i + lag < n; ++i) {
    cross += frame[i] * frame[i + lag];
    e0 += frame[i] * frame[i];
    e1 += frame[i + lag] * frame[i + lag];
  }
  double denom = std::sqrt(e0 * e1);
  return denom > 0.0 ? cross / denom : 0.0;
}

std::pair<int, int> LagRange(int sample_rate_hz, const F0Config &config) {
  int lo = static_cast<int>(std::ceil(sample_rate_hz / config.max_hz));
  int hi = static_cast<int>(std::floor(sample_rate_hz / config.min_hz));
  return {std::max(lo, 2), hi};
}

namespace {

// Autocorrelation over [lo - 1, hi + 1] for one frame.  Energies of the two
// overlapping segments come from a prefix sum of squares.
class FrameCorrelator {
 public:
  FrameCorrelator(std::span<const double> frame, int lo, int hi)
      : frame_(frame), lo_(lo) {
    prefix_.resize(frame.size() + 1, 0.0);
    for (std::size_t i = 0; i < frame.size(); ++i)
      prefix_[i + 1] = prefix_[i] + frame[i] * frame[i];
    r_.resize(hi - lo + 3);
    for (int lag = lo - 1; lag <= hi + 1; ++lag) r_[lag - lo + 1] = Compute(lag);
  }
  double operator()(int lag) const { return r_[lag - lo_ + 1]; }

 private:
  double Compute(int lag) const {
    const std::size_t n = frame_.size();
    if (lag <= 0 || static_cast<std::size_t>(lag) >= n) return 0.0;
    const std::size_t len = n - lag;
    double cross = 0.0;
    for (std::size_t i = 0; i < len; ++i) cross += frame_[i] * frame_[i + lag];
    double e0 = prefix_[len];
    double e1 = prefix_[n] - prefix_[lag];
    double denom = std::sqrt(e0 * e1);
    return denom > 0.0 ? cross / denom : 0.0;
  }
  std::span<const double> frame_;
  int lo_;
  std::vector<double> prefix_;
  std::vector<double> r_;
};

}  // namespace

F0Contour EstimateF0(const Waveform &wave, const F0Config &config) {
  const int fs = wave.sample_rate_hz;
  if (config.min_hz <= 0.0 || config.max_hz <= config.min_hz)
    Fail("F0 search range must satisfy 0 < min < max");
  if (fs < 2.0 * config.max_hz)
    Fail("sample rate ", fs, " Hz too low for an F0 search up to ", config.max_hz, " Hz");

  const auto frame_len = static_cast<std::size_t>(std::lround(config.frame_s * fs));
  const auto hop = static_cast<std::size_t>(std::lround(config.hop_s * fs));
  if (frame_len < 4 || hop == 0) Fail("F0 frame and hop must be positive");
  auto [lo, hi] = LagRange(fs, config);
  hi = std::min<int>(hi, static_cast<int>(frame_len) - 2);
  if (hi <= lo) Fail("F0 frame too short for the lag search range");

  F0Contour contour;
  contour.frame_hop_s = config.hop_s;
  contour.min_hz = config.min_hz;
  contour.max_hz = config.max_hz;

  const std::size_t n = wave.samples.size();
  const std::size_t num_frames = n >= frame_len ? (n - frame_len) / hop + 1 : 1;
  contour.values.assign(num_frames, 0.0);
  const double silence_power = std::pow(10.0, config.silence_dbfs / 10.0);
  std::vector<double> frame(frame_len);

  for (std::size_t t = 0; t < num_frames; ++t) {
    std::size_t start = t * hop;
    for (std::size_t i = 0; i < frame_len; ++i)
      frame[i] = start + i < n ? wave.samples[start + i] : 0.0;
    double power = std::inner_product(frame.begin(), frame.end(), frame.begin(), 0.0) /
                   static_cast<double>(frame_len);
    if (power < silence_power) continue;

    FrameCorrelator r(frame, lo, hi);
    std::vector<int> peaks;
    double best = -1.0;
    for (int lag = lo; lag <= hi; ++lag) {
      if (r(lag) >= r(lag - 1) && r(lag) > r(lag + 1)) {
        peaks.push_back(lag);
        best = std::max(best, r(lag));
      }
    }
    if (peaks.empty() || best < config.voicing_threshold) continue;
    int chosen = *std::find_if(peaks.begin(), peaks.end(), [&](int lag) {
      return r(lag) >= config.peak_ratio * best;
    });

    double left = r(chosen - 1), mid = r(chosen), right = r(chosen + 1);
    double curvature = left - 2.0 * mid + right;
    double offset = curvature < 0.0 ? 0.5 * (left - right) / curvature : 0.0;
    offset = std::clamp(offset, -0.5, 0.5);
    double f0 = fs / (chosen + offset);
    contour.values[t] = std::clamp(f0, config.min_hz, config.max_hz);
  }
  return contour;
}

std::uint64_t F0Histogram::Total() const {
  return std::accumulate(counts.begin(), counts.end(), std::uint64_t{0});
}

void F0Histogram::Merge(const F0Histogram &other) {
  if (other.bin_edges_hz != bin_edges_hz) Fail("cannot merge histograms with different edges");
  for (std::size_t i = 0; i < counts.size(); ++i) counts[i] += other.counts[i];
  n_utterances += other.n_utterances;
}

std::vector<double> UniformEdges(double lo, double hi, double step) {
  if (!(step > 0.0) || !(hi > lo)) Fail("UniformEdges needs lo < hi and step > 0");
  auto n = static_cast<std::size_t>(std::llround((hi - lo) / step));
  std::vector<double> edges(n + 1);
  for (std::size_t i = 0; i <= n; ++i) edges[i] = lo + step * static_cast<double>(i);
  return edges;
}

F0Histogram AccumulateHistogram(std::span<const F0Contour> contours,
                                const std::vector<double> &edges) {
  if (edges.size() < 2) Fail("histogram needs at least two edges");
  for (std::size_t i = 1; i < edges.size(); ++i)
    if (!(edges[i] > edges[i - 1])) Fail("histogram edges must be strictly increasing");

  F0Histogram h;
  h.bin_edges_hz = edges;
  h.counts.assign(edges.size() - 1, 0);
  for (const auto &c : contours) {
    if (c.frame_hop_s != contours.front().frame_hop_s)
      Fail("contours with different frame hops cannot share a histogram");
    for (double v : c.values) {
      if (v <= 0.0 || v < edges.front() || v >= edges.back()) continue;
      auto it = std::upper_bound(edges.begin(), edges.end(), v);
      ++h.counts[static_cast<std::size_t>(it - edges.begin()) - 1];
    }
    ++h.n_utterances;
  }
  return h;
}

HistogramSummary SummarizeHistogram(const F0Histogram &h) {
  const double total = static_cast<double>(h.Total());
  if (total <= 0.0) Fail("cannot summarize an empty F0 histogram");
  HistogramSummary s;
  std::size_t mode = 0;
  double below = 0.0;
  for (std::size_t i = 0; i < h.counts.size(); ++i) {
    double lo = h.bin_edges_hz[i], hi = h.bin_edges_hz[i + 1];
    double c = static_cast<double>(h.counts[i]);
    if (hi <= 400.0)
      below += c;
    else if (lo < 400.0)
      below += c * (400.0 - lo) / (hi - lo);
    if (h.counts[i] > h.counts[mode]) mode = i;
  }
  s.fraction_below_400 = below / total;
  s.modal_bin_start_hz = h.bin_edges_hz[mode];
  s.modal_bin_end_hz = h.bin_edges_hz[mode + 1];
  if (h.counts.size() > 1) {
    double acc = 0.0;
    for (std::size_t i = 1; i < h.counts.size(); ++i)
      acc += std::abs(static_cast<double>(h.counts[i]) - static_cast<double>(h.counts[i - 1]));
    s.smoothness = acc / total / static_cast<double>(h.counts.size() - 1);
  }
  return s;
}

}  // namespace subspoof
