// tests/test_spectral.cc

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

#include <cmath>
#include <numbers>
#include <random>

#include "doctest.h"
#include "oracles.h"
#include "subspoof/features.h"
#include "subspoof/stft.h"

using namespace subspoof;

namespace {

Waveform RandomWave(std::size_t n, std::mt19937_64 &rng) {
  std::uniform_real_distribution<double> u(-1.0, 1.0);
  Waveform w;
  w.samples.resize(n);
  for (auto &v : w.samples) v = u(rng);
  return w;
}

ComplexSpectrogram Constant(double re, double im, std::size_t bins = 3, std::size_t t = 2) {
  ComplexSpectrogram s;
  s.real = Matrix(bins, t, re);
  s.imag = Matrix(bins, t, im);
  return s;
}

double MaxAbs(const Matrix &m) {
  double a = 0.0;
  for (double v : m.data()) a = std::max(a, std::abs(v));
  return a;
}

}  // namespace

TEST_CASE("default STFT has 865 bins and the stated frame count") {
  std::mt19937_64 rng(1);
  for (std::size_t n : {130u, 1727u, 1728u, 1858u, 16000u, 64600u}) {
    ComplexSpectrogram s = Stft(RandomWave(n, rng));
    CHECK(s.num_bins() == 865);
    std::size_t padded = std::max<std::size_t>(n, 1728);
    CHECK(s.num_frames() == (padded - 1728) / 130 + 1);
  }
}

TEST_CASE("STFT preconditions") {
  Waveform w;
  w.samples.assign(129, 0.1);
  CHECK_THROWS_AS(Stft(w), Error);
  w.samples.assign(4000, 0.1);
  w.sample_rate_hz = 8000;
  CHECK_THROWS_AS(Stft(w), Error);
  StftConfig bad;
  bad.hop = 2000;
  CHECK_THROWS_AS(bad.Validate(), Error);
}

TEST_CASE("all-zero waveform gives an all-zero spectrogram") {
  Waveform w;
  w.samples.assign(5000, 0.0);
  ComplexSpectrogram s = Stft(w);
  CHECK(MaxAbs(s.real) == 0.0);
  CHECK(MaxAbs(s.imag) == 0.0);
}

TEST_CASE("window is the periodic Blackman window") {
  auto w = MakeWindow(WindowType::kBlackman, 1728);
  for (int n = 0; n < 1728; n += 37) CHECK(w[n] == doctest::Approx(oracle::Blackman(n, 1728)).epsilon(1e-15));
  CHECK(std::abs(w[0]) < 1e-15);
  CHECK(w[864] == doctest::Approx(1.0));
}

TEST_CASE("STFT matches a naive per-frame DFT") {
  std::mt19937_64 rng(2);
  StftConfig cfg;
  cfg.window_len = 64;
  cfg.hop = 16;
  cfg.fft_len = 96;
  for (int trial = 0; trial < 10; ++trial) {
    Waveform w = RandomWave(40 + trial * 23, rng);
    ComplexSpectrogram s = Stft(w, cfg);
    std::vector<double> re, im;
    for (std::size_t t = 0; t < s.num_frames(); ++t) {
      oracle::NaiveDftFrame(w.samples, static_cast<int>(t), 64, 16, 96, &re, &im);
      double scale = 0.0;
      for (std::size_t k = 0; k < re.size(); ++k) scale = std::max({scale, std::abs(re[k]), std::abs(im[k])});
      for (std::size_t k = 0; k < re.size(); ++k) {
        CHECK(std::abs(s.real(k, t) - re[k]) <= 1e-9 * scale);
        CHECK(std::abs(s.imag(k, t) - im[k]) <= 1e-9 * scale);
      }
    }
  }
}

TEST_CASE("cosine at bin 100 peaks at bin 100 and matches the naive DFT") {
  Waveform w;
  const double f = 100.0 * 16000.0 / 1728.0;
  for (int k = 0; k < 6000; ++k) w.samples.push_back(std::cos(2 * std::numbers::pi * f * k / 16000.0));
  ComplexSpectrogram s = Stft(w);
  Matrix mag = ToMagnitude(s).data;
  std::vector<double> re, im;
  for (std::size_t t = 1; t + 1 < s.num_frames(); ++t) {
    std::size_t best = 0;
    for (std::size_t k = 0; k < 865; ++k)
      if (mag(k, t) > mag(best, t)) best = k;
    CHECK(best == 100);
    oracle::NaiveDftFrame(w.samples, static_cast<int>(t), 1728, 130, 1728, &re, &im);
    double energy = 0.0, dev = 0.0;
    for (std::size_t k = 0; k < 865; ++k) {
      energy += re[k] * re[k] + im[k] * im[k];
      dev = std::max({dev, std::abs(s.real(k, t) - re[k]), std::abs(s.imag(k, t) - im[k])});
    }
    CHECK(dev < 1e-6 * energy);
  }
}

TEST_CASE("STFT is linear") {
  std::mt19937_64 rng(3);
  Waveform x = RandomWave(4000, rng), y = RandomWave(4000, rng), z = x;
  for (std::size_t i = 0; i < z.samples.size(); ++i) z.samples[i] = 0.7 * x.samples[i] - 1.3 * y.samples[i];
  auto sx = Stft(x), sy = Stft(y), sz = Stft(z);
  double scale = MaxAbs(sz.real) + MaxAbs(sz.imag);
  for (std::size_t i = 0; i < sz.real.size(); ++i) {
    CHECK(std::abs(sz.real.data()[i] - (0.7 * sx.real.data()[i] - 1.3 * sy.real.data()[i])) <= 1e-9 * scale);
    CHECK(std::abs(sz.imag.data()[i] - (0.7 * sx.imag.data()[i] - 1.3 * sy.imag.data()[i])) <= 1e-9 * scale);
  }
}

TEST_CASE("feature views on constant spectrograms") {
  CHECK(ToLps(Constant(1, 0)).data(0, 0) == doctest::Approx(std::log(1.0 + 1e-10)));
  CHECK(ToLps(Constant(0, 0)).data(1, 1) == std::log(kLpsFloor));
  CHECK(ToPhaseAngle(Constant(1, 1)).data(0, 0) == doctest::Approx(std::numbers::pi / 4));
  CHECK(ToPhaseAngle(Constant(-1, 0)).data(0, 0) == std::numbers::pi);
  CHECK(ToPhaseAngle(Constant(-1, -0.0)).data(0, 0) == std::numbers::pi);
  CHECK(ToPhaseAngle(Constant(0, 0)).data(0, 0) == 0.0);
  CHECK(ToMagnitude(Constant(3, 4)).data(0, 0) == 5.0);
  CHECK(MaxAbs(ToMagnitude(Constant(0, 0)).data) == 0.0);
  auto [re, im] = ToRealImag(Constant(2, 0));
  CHECK(re.data(0, 0) == 2.0);
  CHECK(im.data(0, 0) == 0.0);
  auto [re2, im2] = ToRealImag(Constant(0, -1));
  CHECK(std::abs(re2.data(0, 0)) < 1e-16);
  CHECK(im2.data(0, 0) == -1.0);
  CHECK(re.kind == FeatureKind::kReal);
  CHECK(im.kind == FeatureKind::kImag);
}

TEST_CASE("feature identities on random spectrograms") {
  std::mt19937_64 rng(4);
  std::normal_distribution<double> g(0.0, 5.0);
  ComplexSpectrogram s;
  s.real = Matrix(33, 17);
  s.imag = Matrix(33, 17);
  for (auto &v : s.real.data()) v = g(rng);
  for (auto &v : s.imag.data()) v = g(rng);
  Matrix lps = ToLps(s).data, pa = ToPhaseAngle(s).data, mag = ToMagnitude(s).data;
  auto [re, im] = ToRealImag(s);
  for (std::size_t i = 0; i < lps.size(); ++i) {
    double xr = s.real.data()[i], xi = s.imag.data()[i];
    double m = std::sqrt(xr * xr + xi * xi);
    CHECK(std::abs(std::exp(lps.data()[i]) - kLpsFloor - m) <= 1e-9 * m);
    CHECK(pa.data()[i] > -std::numbers::pi);
    CHECK(pa.data()[i] <= std::numbers::pi);
    CHECK(std::abs(mag.data()[i] * mag.data()[i] - (xr * xr + xi * xi)) <= 1e-12 * (xr * xr + xi * xi));
    CHECK(std::abs(re.data.data()[i] - xr) <= 1e-9 * m);
    CHECK(std::abs(im.data.data()[i] - xi) <= 1e-9 * m);
  }
}

TEST_CASE("frame fixing truncates, tiles and is idempotent") {
  FeatureMatrix m;
  m.data = Matrix(3, 700);
  for (std::size_t i = 0; i < m.data.size(); ++i) m.data.data()[i] = static_cast<double>(i);
  FeatureMatrix cut = FixFrames(m);
  REQUIRE(cut.frames() == 600);
  for (std::size_t r = 0; r < 3; ++r)
    for (std::size_t t = 0; t < 600; ++t) CHECK(cut.data(r, t) == m.data(r, t));

  FeatureMatrix short_m;
  short_m.data = Matrix(2, 300);
  for (std::size_t i = 0; i < short_m.data.size(); ++i) short_m.data.data()[i] = static_cast<double>(i);
  FeatureMatrix tiled = FixFrames(short_m);
  for (std::size_t t = 0; t < 600; ++t) CHECK(tiled.data(1, t) == short_m.data(1, t % 300));

  FeatureMatrix odd;
  odd.data = Matrix(1, 233, 1.0);
  odd.data(0, 5) = 7.0;
  FeatureMatrix o = FixFrames(odd);
  CHECK(o.frames() == 600);
  CHECK(o.data(0, 233 + 5) == 7.0);
  CHECK(FixFrames(o).data == o.data);
  CHECK_THROWS_AS(FixFrames(odd, 0), Error);
}

TEST_CASE("named subbands for the default 865-bin spectrogram") {
  struct Want {
    BandName name;
    int start, end;
  } wants[] = {{BandName::kF0, 0, 45},     {BandName::kRest, 45, 865}, {BandName::kLow, 0, 433},
               {BandName::kHigh, 433, 865}, {BandName::kFull, 0, 865}};
  for (const auto &w : wants) {
    SubbandSpec s = SubbandSpec::Named(w.name, 865);
    CHECK(s.start_bin == w.start);
    CHECK(s.end_bin == w.end);
  }
  SubbandSpec bad{BandName::kCustom, 10, 900};
  CHECK_THROWS_AS(bad.Validate(865), Error);
}

TEST_CASE("subband slices partition the full band") {
  std::mt19937_64 rng(5);
  Waveform w = RandomWave(9000, rng);
  FeatureMatrix full = FixFrames(ToLps(Stft(w)));
  for (auto [a, b] : {std::pair{BandName::kF0, BandName::kRest},
                      std::pair{BandName::kLow, BandName::kHigh}}) {
    FeatureMatrix top = SliceSubband(full, SubbandSpec::Named(a, 865));
    FeatureMatrix bottom = SliceSubband(full, SubbandSpec::Named(b, 865));
    CHECK(top.rows() + bottom.rows() == 865);
    for (std::size_t r = 0; r < 865; ++r)
      for (std::size_t t = 0; t < 600; t += 97) {
        double v = r < top.rows() ? top.data(r, t) : bottom.data(r - top.rows(), t);
        CHECK(v == full.data(r, t));
      }
  }
  CHECK_THROWS_AS(SliceSubband(SliceSubband(full, SubbandSpec::Named(BandName::kF0, 865)),
                               SubbandSpec::Named(BandName::kF0, 865)),
                  Error);
}

TEST_CASE("golden feature shapes") {
  std::mt19937_64 rng(6);
  Waveform w = RandomWave(32000, rng);
  ComplexSpectrogram s = Stft(w);
  auto shape = [&](FeatureKind kind, BandName band) {
    FeatureMatrix f = FixFrames(SliceSubband(ComputeFeature(s, kind), SubbandSpec::Named(band, 865)));
    return std::pair{f.rows(), f.frames()};
  };
  CHECK(shape(FeatureKind::kLps, BandName::kFull) == std::pair<std::size_t, std::size_t>{865, 600});
  CHECK(shape(FeatureKind::kLps, BandName::kF0) == std::pair<std::size_t, std::size_t>{45, 600});
  CHECK(shape(FeatureKind::kImag, BandName::kLow) == std::pair<std::size_t, std::size_t>{433, 600});
  CHECK(shape(FeatureKind::kReal, BandName::kHigh) == std::pair<std::size_t, std::size_t>{432, 600});
  CHECK(shape(FeatureKind::kLps, BandName::kRest) == std::pair<std::size_t, std::size_t>{820, 600});
}

TEST_CASE("feature kind and band names parse") {
  CHECK(ParseFeatureKind("lps") == FeatureKind::kLps);
  CHECK(ParseFeatureKind("imag") == FeatureKind::kImag);
  CHECK(ParseBandName("high") == BandName::kHigh);
  CHECK_THROWS_AS(ParseFeatureKind("mfcc"), Error);
}
