// include/subspoof/features.h

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

#ifndef SUBSPOOF_FEATURES_H_
#define SUBSPOOF_FEATURES_H_

#include <optional>
#include <string>
#include <string_view>
#include <utility>

#include "subspoof/common.h"
#include "subspoof/stft.h"

namespace subspoof {

/// Spectral views derived from one complex STFT.
///   kLps       log |X|                  (natural log, floored)
///   kPhase     atan2(X_i, X_r)          in (-pi, pi]
///   kReal      |X| cos(phase)
///   kImag      |X| sin(phase)
///   kMagnitude |X|
enum class FeatureKind { kLps, kPhase, kReal, kImag, kMagnitude, kUnspecified };

enum class BandName { kF0, kRest, kLow, kHigh, kFull, kCustom };

std::string_view FeatureKindName(FeatureKind kind);
std::string_view BandNameString(BandName band);
/// Accepts "lps", "pa"/"phase", "real", "imag", "magnitude" (any case).
FeatureKind ParseFeatureKind(std::string_view text);
/// Accepts "f0", "rest", "low", "high", "full" (any case).
BandName ParseBandName(std::string_view text);

/// Half-open frequency-bin range [start_bin, end_bin).
struct SubbandSpec {
  BandName name = BandName::kFull;
  int start_bin = 0;
  int end_bin = 0;

  int bin_count() const { return end_bin - start_bin; }

  /// Throws unless 0 <= start_bin < end_bin <= num_bins.
  void Validate(int num_bins) const;

  /// Named bands for a spectrogram with num_bins rows.  With the default
  /// 865-bin STFT: F0 = [0,45), Rest = [45,865), Low = [0,433),
  /// High = [433,865), Full = [0,865).  Other bin counts scale the F0 and
  /// Low boundaries proportionally.
  static SubbandSpec Named(BandName name, int num_bins);

  bool operator==(const SubbandSpec &) const = default;
};

/// Floor added to the magnitude before the logarithm in ToLps.
inline constexpr double kLpsFloor = 1e-10;

struct FeatureMatrix {
  Matrix data;  // band.bin_count() x frames
  FeatureKind kind = FeatureKind::kUnspecified;
  SubbandSpec band;
  std::string trial_id;

  std::size_t rows() const { return data.rows(); }
  std::size_t frames() const { return data.cols(); }
};

FeatureMatrix ToLps(const ComplexSpectrogram &spec, const std::string &trial_id = "");
FeatureMatrix ToPhaseAngle(const ComplexSpectrogram &spec,
                           const std::string &trial_id = "");
FeatureMatrix ToMagnitude(const ComplexSpectrogram &spec,
                          const std::string &trial_id = "");
/// Returns {Real, Imag}, rebuilt from magnitude and phase angle.
std::pair<FeatureMatrix, FeatureMatrix> ToRealImag(const ComplexSpectrogram &spec,
                                                   const std::string &trial_id = "");
/// Dispatches on kind; kUnspecified throws.
FeatureMatrix ComputeFeature(const ComplexSpectrogram &spec, FeatureKind kind,
                             const std::string &trial_id = "");

inline constexpr int kDefaultFrames = 600;

/// Normalizes the frame count: longer inputs keep their first target_frames
/// frames, shorter inputs are tiled from the start until target_frames.
FeatureMatrix FixFrames(const FeatureMatrix &m, int target_frames = kDefaultFrames);

/// Rows [start_bin, end_bin) of a full-band feature.
FeatureMatrix SliceSubband(const FeatureMatrix &m, const SubbandSpec &band);

}  // namespace subspoof

#endif  // SUBSPOOF_FEATURES_H_
