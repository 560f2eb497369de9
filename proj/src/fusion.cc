// src/fusion.cc

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

#include "subspoof/fusion.h"

#include "subspoof/common.h"

namespace subspoof {

void FusionWeights::Validate() const {
  if (!(alpha >= 0.0 && alpha <= 1.0)) Fail("fusion weight alpha ", alpha, " outside [0, 1]");
  if (!(beta >= 0.0 && beta <= 1.0)) Fail("fusion weight beta ", beta, " outside [0, 1]");
}

ScoreSet FuseScores(const ScoreSet &a, const ScoreSet &b, double weight) {
  if (!(weight >= 0.0 && weight <= 1.0))
    Fail("fusion weight ", weight, " outside [0, 1]");
  for (const auto &e : a.entries())
    if (!b.Contains(e.trial_id)) Fail("trial ", e.trial_id, " missing from second score set");
  for (const auto &e : b.entries())
    if (!a.Contains(e.trial_id)) Fail("trial ", e.trial_id, " missing from first score set");

  ScoreSet out;
  for (const auto &ea : a.entries()) {
    const ScoreEntry &eb = b.At(ea.trial_id);
    // Endpoints return the selected input bit-for-bit.
    double fused = weight == 1.0   ? ea.score
                   : weight == 0.0 ? eb.score
                                   : weight * ea.score + (1.0 - weight) * eb.score;
    out.Add(ea.trial_id, fused, ea.label ? ea.label : eb.label);
  }
  return out;
}

ScoreSet FuseStage1(const ScoreSet &imag_low, const ScoreSet &real_high, double alpha) {
  return FuseScores(imag_low, real_high, alpha);
}

ScoreSet FuseStage2(const ScoreSet &stage1, const ScoreSet &f0, double beta) {
  return FuseScores(stage1, f0, beta);
}

ScoreSet FuseTwoStage(const ScoreSet &imag_low, const ScoreSet &real_high,
                      const ScoreSet &f0, const FusionWeights &weights) {
  weights.Validate();
  return FuseStage2(FuseStage1(imag_low, real_high, weights.alpha), f0, weights.beta);
}

}  // namespace subspoof
