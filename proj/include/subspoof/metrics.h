// include/subspoof/metrics.h

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

#ifndef SUBSPOOF_METRICS_H_
#define SUBSPOOF_METRICS_H_

#include <filesystem>
#include <map>
#include <span>
#include <string>
#include <vector>

#include "subspoof/scores.h"

namespace subspoof {

/// Countermeasure operating points.  A trial is accepted as bonafide when
/// score >= threshold, so
///   far(t) = fraction of spoof trials with score >= t   (false acceptance)
///   frr(t) = fraction of bonafide trials with score < t (false rejection)
/// Thresholds are -inf, the midpoints between consecutive distinct scores of
/// the pooled set, and +inf, in increasing order.  far is non-increasing and
/// frr non-decreasing along the curve.
struct DetCurve {
  std::vector<double> thresholds;
  std::vector<double> far;
  std::vector<double> frr;
};

DetCurve DetPoints(std::span<const double> bonafide, std::span<const double> spoof);
/// Requires every entry to carry a label.
DetCurve DetPoints(const ScoreSet &scores);

struct EerResult {
  double eer = 0.0;        // in [0, 1]
  double threshold = 0.0;
};

/// EER by linear interpolation between the two adjacent operating points
/// whose (frr - far) straddle zero; an exact crossing is returned as is.
/// Throws unless both classes are present.
EerResult ComputeEer(std::span<const double> bonafide, std::span<const double> spoof);
EerResult ComputeEer(const ScoreSet &scores);

/// Tandem detection cost model.  The ASV error terms are measured on a
/// separate speaker-verification system at its own operating point and are
/// supplied, not computed here.
struct TdcfCostModel {
  double p_target = 0.0;
  double p_nontarget = 0.0;
  double p_spoof = 0.0;
  double c_miss_asv = 0.0;
  double c_fa_asv = 0.0;
  double c_miss_cm = 0.0;
  double c_fa_cm = 0.0;
  double p_miss_asv = 0.0;
  double p_fa_asv = 0.0;
  double p_miss_spoof_asv = 0.0;

  /// Throws on priors outside (0, 1), non-positive costs, or error rates
  /// outside [0, 1].
  void Validate() const;

  /// C1 = p_target (c_miss_cm - c_miss_asv p_miss_asv)
  ///      - p_nontarget c_fa_asv p_fa_asv
  double C1() const;
  /// C2 = c_fa_cm p_spoof (1 - p_miss_spoof_asv)
  double C2() const;
};

/// Reads key=value lines ('#' comments allowed).  Required keys: p_target,
/// c_miss_cm, c_fa_cm, p_miss_asv, p_fa_asv, p_miss_spoof_asv.  Optional
/// keys default to the ASVspoof 2019 evaluation plan: p_spoof = 0.05,
/// p_nontarget = 0.0095, c_miss_asv = 1, c_fa_asv = 10.
TdcfCostModel ReadCostModel(const std::filesystem::path &path);
TdcfCostModel CostModelFromMap(const std::map<std::string, std::string> &kv);

struct TdcfResult {
  double min_tdcf = 0.0;   // normalized by min(C1, C2)
  double threshold = 0.0;
};

/// min over the DetPoints thresholds of (C1 frr(t) + C2 far(t)) / min(C1, C2).
/// Throws when C1 <= 0 or C2 <= 0.
TdcfResult ComputeMinTdcf(std::span<const double> bonafide, std::span<const double> spoof,
                          const TdcfCostModel &cost);
TdcfResult ComputeMinTdcf(const ScoreSet &scores, const TdcfCostModel &cost);

/// Splits labeled scores by class; throws on an unlabeled entry.
void SplitByLabel(const ScoreSet &scores, std::vector<double> *bonafide,
                  std::vector<double> *spoof);

}  // namespace subspoof

#endif  // SUBSPOOF_METRICS_H_
