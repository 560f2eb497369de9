// src/features.cc

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

#include "subspoof/features.h"

#include <algorithm>
#include <cctype>
#include <cmath>
#include <numbers>

namespace subspoof {

namespace {

constexpr int kReferenceBins = 865;
constexpr int kReferenceF0End = 45;
constexpr int kReferenceLowEnd = 433;

std::string Lower(std::string_view s) {
  std::string out(s);
  for (auto &c : out) c = static_cast<char>(std::tolower(static_cast<unsigned char>(c)));
  return out;
}

FeatureMatrix FullBand(const ComplexSpectrogram &spec, FeatureKind kind,
                       const std::string &trial_id) {
  FeatureMatrix m;
  m.kind = kind;
  m.band = SubbandSpec::Named(BandName::kFull, static_cast<int>(spec.num_bins()));
  m.trial_id = trial_id;
  m.data = Matrix(spec.num_bins(), spec.num_frames());
  return m;
}

double Phase(double re, double im) {
  if (re == 0.0 && im == 0.0) return 0.0;
  double a = std::atan2(im, re);
  // atan2(-0, x<0) returns -pi; the range here is (-pi, pi].
  return a <= -std::numbers::pi ? std::numbers::pi : a;
}

}  // namespace

std::string_view FeatureKindName(FeatureKind kind) {
  switch (kind) {
    case FeatureKind::kLps: return "lps";
    case FeatureKind::kPhase: return "pa";
    case FeatureKind::kReal: return "real";
    case FeatureKind::kImag: return "imag";
    case FeatureKind::kMagnitude: return "magnitude";
    case FeatureKind::kUnspecified: return "unspecified";
  }
  return "unspecified";
}

std::string_view BandNameString(BandName band) {
  switch (band) {
    case BandName::kF0: return "f0";
    case BandName::kRest: return "rest";
    case BandName::kLow: return "low";
    case BandName::kHigh: return "high";
    case BandName::kFull: return "full";
    case BandName::kCustom: return "custom";
  }
  return "custom";
}

FeatureKind ParseFeatureKind(std::string_view text) {
  std::string s = Lower(text);
  if (s == "lps") return FeatureKind::kLps;
  if (s == "pa" || s == "phase") return FeatureKind::kPhase;
  if (s == "real") return FeatureKind::kReal;
  if (s == "imag") return FeatureKind::kImag;
  if (s == "magnitude" || s == "mag") return FeatureKind::kMagnitude;
  Fail("unknown feature kind '", text, "'");
}

BandName ParseBandName(std::string_view text) {
  std::string s = Lower(text);
  if (s == "f0") return BandName::kF0;
  if (s == "rest") return BandName::kRest;
  if (s == "low" || s == "l") return BandName::kLow;
  if (s == "high" || s == "h") return BandName::kHigh;
  if (s == "full") return BandName::kFull;
  Fail("unknown band name '", text, "'");
}

void SubbandSpec::Validate(int num_bins) const {
  if (start_bin < 0 || start_bin >= end_bin || end_bin > num_bins)
    Fail("subband ", BandNameString(name), " [", start_bin, ",", end_bin,
         ") out of range for ", num_bins, " bins");
}

SubbandSpec SubbandSpec::Named(BandName name, int num_bins) {
  if (num_bins < 2) Fail("named subbands need at least 2 bins, got ", num_bins);
  auto scaled = [num_bins](int edge) {
    if (num_bins == kReferenceBins) return edge;
    long v = std::lround(static_cast<double>(edge) * num_bins / kReferenceBins);
    return static_cast<int>(std::clamp<long>(v, 1, num_bins - 1));
  };
  const int f0_end = scaled(kReferenceF0End);
  const int low_end = scaled(kReferenceLowEnd);
  switch (name) {
    case BandName::kF0: return {name, 0, f0_end};
    case BandName::kRest: return {name, f0_end, num_bins};
    case BandName::kLow: return {name, 0, low_end};
    case BandName::kHigh: return {name, low_end, num_bins};
    case BandName::kFull: return {name, 0, num_bins};
    case BandName::kCustom: break;
  }
  Fail("custom subbands have no named range");
}

FeatureMatrix ToLps(const ComplexSpectrogram &spec, const std::string &trial_id) {
  FeatureMatrix m = FullBand(spec, FeatureKind::kLps, trial_id);
  auto &out = m.data.data();
  const auto &re = spec.real.data();
  const auto &im = spec.imag.data();
  for (std::size_t i = 0; i < out.size(); ++i)
    out[i] = std::log(std::hypot(re[i], im[i]) + kLpsFloor);
  return m;
}

FeatureMatrix ToPhaseAngle(const ComplexSpectrogram &spec,
                           const std::string &trial_id) {
  FeatureMatrix m = FullBand(spec, FeatureKind::kPhase, trial_id);
  auto &out = m.data.data();
  const auto &re = spec.real.data();
  const auto &im = spec.imag.data();
  for (std::size_t i = 0; i < out.size(); ++i) out[i] = Phase(re[i], im[i]);
  return m;
}

FeatureMatrix ToMagnitude(const ComplexSpectrogram &spec,
                          const std::string &trial_id) {
  FeatureMatrix m = FullBand(spec, FeatureKind::kMagnitude, trial_id);
  auto &out = m.data.data();
  const auto &re = spec.real.data();
  const auto &im = spec.imag.data();
  for (std::size_t i = 0; i < out.size(); ++i) out[i] = std::hypot(re[i], im[i]);
  return m;
}

std::pair<FeatureMatrix, FeatureMatrix> ToRealImag(const ComplexSpectrogram &spec,
                                                   const std::string &trial_id) {
  FeatureMatrix real = FullBand(spec, FeatureKind::kReal, trial_id);
  FeatureMatrix imag = FullBand(spec, FeatureKind::kImag, trial_id);
  const auto &re = spec.real.data();
  const auto &im = spec.imag.data();
  auto &r = real.data.data();
  auto &i_out = imag.data.data();
  for (std::size_t i = 0; i < r.size(); ++i) {
    double mag = std::hypot(re[i], im[i]);
    double pa = Phase(re[i], im[i]);
    r[i] = mag * std::cos(pa);
    i_out[i] = mag * std::sin(pa);
  }
  return {std::move(real), std::move(imag)};
}

FeatureMatrix ComputeFeature(const ComplexSpectrogram &spec, FeatureKind kind,
                             const std::string &trial_id) {
  switch (kind) {
    case FeatureKind::kLps: return ToLps(spec, trial_id);
    case FeatureKind::kPhase: return ToPhaseAngle(spec, trial_id);
    case FeatureKind::kMagnitude: return ToMagnitude(spec, trial_id);
    case FeatureKind::kReal: return ToRealImag(spec, trial_id).first;
    case FeatureKind::kImag: return ToRealImag(spec, trial_id).second;
    case FeatureKind::kUnspecified: break;
  }
  Fail("cannot compute an unspecified feature kind");
}

FeatureMatrix FixFrames(const FeatureMatrix &m, int target_frames) {
  if (target_frames <= 0) Fail("target frame count must be positive, got ", target_frames);
  if (m.frames() == 0) Fail("cannot fix frames of an empty feature matrix");
  FeatureMatrix out;
  out.kind = m.kind;
  out.band = m.band;
  out.trial_id = m.trial_id;
  out.data = Matrix(m.rows(), target_frames);
  const std::size_t src_t = m.frames();
  for (std::size_t r = 0; r < m.rows(); ++r) {
    auto src = m.data.Row(r);
    auto dst = out.data.Row(r);
    for (std::size_t t = 0; t < dst.size(); ++t) dst[t] = src[t % src_t];
  }
  return out;
}

FeatureMatrix SliceSubband(const FeatureMatrix &m, const SubbandSpec &band) {
  if (m.band.name != BandName::kFull || m.band.start_bin != 0 ||
      m.band.bin_count() != static_cast<int>(m.rows()))
    Fail("SliceSubband expects a full-band feature, got band ",
         BandNameString(m.band.name), " [", m.band.start_bin, ",", m.band.end_bin, ")");
  band.Validate(static_cast<int>(m.rows()));
  FeatureMatrix out;
  out.kind = m.kind;
  out.band = band;
  out.trial_id = m.trial_id;
  out.data = Matrix(band.bin_count(), m.frames());
  for (int r = band.start_bin; r < band.end_bin; ++r) {
    auto src = m.data.Row(r);
    std::copy(src.begin(), src.end(), out.data.Row(r - band.start_bin).begin());
  }
  return out;
}

}  // namespace subspoof
