// src/metrics.cc

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

#include "subspoof/metrics.h"

#include <algorithm>
#include <cmath>
#include <limits>
#include <utility>

#include "subspoof/common.h"
#include "subspoof/kv_config.h"

namespace subspoof {

namespace {

constexpr double kInf = std::numeric_limits<double>::infinity();

void RequireBothClasses(std::span<const double> bonafide, std::span<const double> spoof) {
  if (bonafide.empty() || spoof.empty())
    Fail("metrics need at least one bonafide and one spoof trial (got ",
         bonafide.size(), " bonafide, ", spoof.size(), " spoof)");
}

double ParseDouble(const std::map<std::string, std::string> &kv, const std::string &key) {
  const std::string &text = kv.at(key);
  std::size_t used = 0;
  double v = 0.0;
  try {
    v = std::stod(text, &used);
  } catch (const std::exception &) {
    used = 0;
  }
  if (used == 0 || used != text.size())
    Fail("cost model: value for '", key, "' is not a number: '", text, "'");
  return v;
}

}  // namespace

void SplitByLabel(const ScoreSet &scores, std::vector<double> *bonafide,
                  std::vector<double> *spoof) {
  bonafide->clear();
  spoof->clear();
  for (const auto &e : scores.entries()) {
    if (!e.label) Fail("trial ", e.trial_id, " has no label");
    (*e.label == Label::kBonafide ? bonafide : spoof)->push_back(e.score);
  }
}

DetCurve DetPoints(std::span<const double> bonafide, std::span<const double> spoof) {
  RequireBothClasses(bonafide, spoof);
  // (score, is_bonafide) pooled and sorted ascending.
  std::vector<std::pair<double, bool>> pooled;
  pooled.reserve(bonafide.size() + spoof.size());
  for (double s : bonafide) pooled.emplace_back(s, true);
  for (double s : spoof) pooled.emplace_back(s, false);
  std::sort(pooled.begin(), pooled.end());

  const double nb = static_cast<double>(bonafide.size());
  const double ns = static_cast<double>(spoof.size());
  DetCurve curve;
  curve.thresholds.push_back(-kInf);
  curve.far.push_back(1.0);
  curve.frr.push_back(0.0);

  std::size_t rejected_bona = 0, rejected_spoof = 0;
  std::size_t i = 0;
  while (i < pooled.size()) {
    double v = pooled[i].first;
    while (i < pooled.size() && pooled[i].first == v) {
      (pooled[i].second ? rejected_bona : rejected_spoof) += 1;
      ++i;
    }
    if (i == pooled.size()) break;
    double next = pooled[i].first;
    curve.thresholds.push_back(v + (next - v) / 2.0);
    curve.far.push_back((ns - static_cast<double>(rejected_spoof)) / ns);
    curve.frr.push_back(static_cast<double>(rejected_bona) / nb);
  }
  curve.thresholds.push_back(kInf);
  curve.far.push_back(0.0);
  curve.frr.push_back(1.0);
  return curve;
}

DetCurve DetPoints(const ScoreSet &scores) {
  std::vector<double> bona, spoof;
  SplitByLabel(scores, &bona, &spoof);
  return DetPoints(bona, spoof);
}

EerResult ComputeEer(std::span<const double> bonafide, std::span<const double> spoof) {
  DetCurve c = DetPoints(bonafide, spoof);
  const std::size_t n = c.thresholds.size();
  double lo_score = std::min(*std::min_element(bonafide.begin(), bonafide.end()),
                             *std::min_element(spoof.begin(), spoof.end()));
  double hi_score = std::max(*std::max_element(bonafide.begin(), bonafide.end()),
                             *std::max_element(spoof.begin(), spoof.end()));
  auto finite_threshold = [&](std::size_t i) {
    double t = c.thresholds[i];
    if (t == -kInf) return lo_score;
    if (t == kInf) return hi_score;
    return t;
  };

  std::size_t i = 0;
  while (i < n && c.frr[i] - c.far[i] < 0.0) ++i;
  // frr - far runs from -1 at -inf to +1 at +inf, so 0 < i < n here.
  double d_hi = c.frr[i] - c.far[i];
  if (d_hi == 0.0) return {c.far[i], finite_threshold(i)};
  double d_lo = c.frr[i - 1] - c.far[i - 1];
  double lambda = -d_lo / (d_hi - d_lo);
  EerResult r;
  r.eer = c.far[i - 1] + lambda * (c.far[i] - c.far[i - 1]);
  double t_lo = finite_threshold(i - 1), t_hi = finite_threshold(i);
  r.threshold = t_lo + lambda * (t_hi - t_lo);
  return r;
}

EerResult ComputeEer(const ScoreSet &scores) {
  std::vector<double> bona, spoof;
  SplitByLabel(scores, &bona, &spoof);
  return ComputeEer(bona, spoof);
}

void TdcfCostModel::Validate() const {
  for (auto [name, p] : {std::pair{"p_target", p_target}, {"p_nontarget", p_nontarget},
                         {"p_spoof", p_spoof}})
    if (!(p > 0.0 && p < 1.0)) Fail("cost model: ", name, " = ", p, " not in (0, 1)");
  for (auto [name, c] : {std::pair{"c_miss_asv", c_miss_asv}, {"c_fa_asv", c_fa_asv},
                         {"c_miss_cm", c_miss_cm}, {"c_fa_cm", c_fa_cm}})
    if (!(c > 0.0)) Fail("cost model: ", name, " = ", c, " must be positive");
  for (auto [name, e] : {std::pair{"p_miss_asv", p_miss_asv}, {"p_fa_asv", p_fa_asv},
                         {"p_miss_spoof_asv", p_miss_spoof_asv}})
    if (!(e >= 0.0 && e <= 1.0)) Fail("cost model: ", name, " = ", e, " not in [0, 1]");
}

double TdcfCostModel::C1() const {
  return p_target * (c_miss_cm - c_miss_asv * p_miss_asv) -
         p_nontarget * c_fa_asv * p_fa_asv;
}

double TdcfCostModel::C2() const { return c_fa_cm * p_spoof * (1.0 - p_miss_spoof_asv); }

TdcfCostModel CostModelFromMap(const std::map<std::string, std::string> &kv) {
  static const char *kRequired[] = {"p_target", "c_miss_cm", "c_fa_cm",
                                    "p_miss_asv", "p_fa_asv", "p_miss_spoof_asv"};
  static const char *kKnown[] = {"p_target",   "p_nontarget", "p_spoof",    "c_miss_asv",
                                 "c_fa_asv",   "c_miss_cm",   "c_fa_cm",    "p_miss_asv",
                                 "p_fa_asv",   "p_miss_spoof_asv"};
  for (const char *key : kRequired)
    if (!kv.count(key)) Fail("cost model: missing required key '", key, "'");
  for (const auto &[key, value] : kv)
    if (std::find_if(std::begin(kKnown), std::end(kKnown),
                     [&](const char *k) { return key == k; }) == std::end(kKnown))
      Fail("cost model: unknown key '", key, "'");

  auto get = [&](const char *key, double fallback) {
    return kv.count(key) ? ParseDouble(kv, key) : fallback;
  };
  TdcfCostModel m;
  m.p_target = get("p_target", 0.0);
  m.p_nontarget = get("p_nontarget", 0.0095);
  m.p_spoof = get("p_spoof", 0.05);
  m.c_miss_asv = get("c_miss_asv", 1.0);
  m.c_fa_asv = get("c_fa_asv", 10.0);
  m.c_miss_cm = get("c_miss_cm", 0.0);
  m.c_fa_cm = get("c_fa_cm", 0.0);
  m.p_miss_asv = get("p_miss_asv", 0.0);
  m.p_fa_asv = get("p_fa_asv", 0.0);
  m.p_miss_spoof_asv = get("p_miss_spoof_asv", 0.0);
  m.Validate();
  return m;
}

TdcfCostModel ReadCostModel(const std::filesystem::path &path) {
  return CostModelFromMap(ReadKeyValueFile(path));
}

TdcfResult ComputeMinTdcf(std::span<const double> bonafide, std::span<const double> spoof,
                          const TdcfCostModel &cost) {
  const double c1 = cost.C1();
  const double c2 = cost.C2();
  if (!(c1 > 0.0) || !(c2 > 0.0))
    Fail("degenerate t-DCF cost model: C1 = ", c1, ", C2 = ", c2,
         " (both must be positive)");
  DetCurve c = DetPoints(bonafide, spoof);
  const double norm = std::min(c1, c2);
  TdcfResult best{kInf, 0.0};
  for (std::size_t i = 0; i < c.thresholds.size(); ++i) {
    double v = (c1 * c.frr[i] + c2 * c.far[i]) / norm;
    if (v < best.min_tdcf) best = {v, c.thresholds[i]};
  }
  return best;
}

TdcfResult ComputeMinTdcf(const ScoreSet &scores, const TdcfCostModel &cost) {
  std::vector<double> bona, spoof;
  SplitByLabel(scores, &bona, &spoof);
  return ComputeMinTdcf(bona, spoof, cost);
}

}  // namespace subspoof
