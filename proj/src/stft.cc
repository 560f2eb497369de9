// src/stft.cc

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

#include "subspoof/stft.h"

#include <fftw3.h>

#include <algorithm>
#include <cmath>
#include <map>
#include <memory>
#include <mutex>
#include <numbers>

namespace subspoof {

namespace {

struct FftwFree {
  void operator()(void *p) const { fftw_free(p); }
};
template <typename T>
using FftwBuffer = std::unique_ptr<T[], FftwFree>;

template <typename T>
FftwBuffer<T> AllocFftw(std::size_t n) {
  auto *p = static_cast<T *>(fftw_malloc(sizeof(T) * n));
  if (p == nullptr) Fail("fftw_malloc failed for ", n, " elements");
  return FftwBuffer<T>(p);
}

// The FFTW planner is not thread-safe; execution of an existing plan on
// fresh, equally aligned buffers is.
fftw_plan PlanFor(int n) {
  static std::mutex mu;
  static std::map<int, fftw_plan> plans;
  std::lock_guard<std::mutex> lock(mu);
  auto it = plans.find(n);
  if (it != plans.end()) return it->second;
  auto in = AllocFftw<double>(n);
  auto out = AllocFftw<fftw_complex>(n / 2 + 1);
  fftw_plan plan = fftw_plan_dft_r2c_1d(n, in.get(), out.get(), FFTW_ESTIMATE);
  if (plan == nullptr) Fail("could not create FFT plan of size ", n);
  plans.emplace(n, plan);
  return plan;
}

}  // namespace

void StftConfig::Validate() const {
  if (hop <= 0) Fail("StftConfig: hop must be positive, got ", hop);
  if (window_len < hop)
    Fail("StftConfig: hop ", hop, " exceeds window length ", window_len);
  if (fft_len < window_len)
    Fail("StftConfig: fft_len ", fft_len, " shorter than window ", window_len);
  if (sample_rate_hz <= 0) Fail("StftConfig: sample rate must be positive");
}

std::vector<double> MakeWindow(WindowType type, int length) {
  std::vector<double> w(length);
  switch (type) {
    case WindowType::kBlackman: {
      const double a = 2.0 * std::numbers::pi / length;
      for (int n = 0; n < length; ++n)
        w[n] = 0.42 - 0.5 * std::cos(a * n) + 0.08 * std::cos(2.0 * a * n);
      break;
    }
  }
  return w;
}

std::size_t NumFrames(std::size_t num_samples, const StftConfig &config) {
  std::size_t win = config.window_len;
  std::size_t padded = std::max(num_samples, win);
  return (padded - win) / config.hop + 1;
}

ComplexSpectrogram Stft(const Waveform &wave, const StftConfig &config) {
  config.Validate();
  if (wave.sample_rate_hz != config.sample_rate_hz)
    Fail("sample rate mismatch for '", wave.source_id, "': ", wave.sample_rate_hz,
         " Hz, expected ", config.sample_rate_hz, " Hz");
  if (wave.samples.size() < static_cast<std::size_t>(config.hop))
    Fail("waveform '", wave.source_id, "' has ", wave.samples.size(),
         " samples, shorter than one hop (", config.hop, ")");

  const std::size_t num_frames = NumFrames(wave.samples.size(), config);
  const std::size_t bins = config.NumBins();
  const std::vector<double> window = MakeWindow(config.window, config.window_len);

  ComplexSpectrogram spec;
  spec.config = config;
  spec.real = Matrix(bins, num_frames);
  spec.imag = Matrix(bins, num_frames);

  fftw_plan plan = PlanFor(config.fft_len);
  auto in = AllocFftw<double>(config.fft_len);
  auto out = AllocFftw<fftw_complex>(bins);
  const std::size_t n = wave.samples.size();
  for (std::size_t t = 0; t < num_frames; ++t) {
    std::size_t start = t * config.hop;
    std::fill(in.get(), in.get() + config.fft_len, 0.0);
    for (int k = 0; k < config.window_len; ++k) {
      std::size_t idx = start + k;
      if (idx < n) in[k] = wave.samples[idx] * window[k];
    }
    fftw_execute_dft_r2c(plan, in.get(), out.get());
    for (std::size_t f = 0; f < bins; ++f) {
      spec.real(f, t) = out[f][0];
      spec.imag(f, t) = out[f][1];
    }
  }
  return spec;
}

}  // namespace subspoof
