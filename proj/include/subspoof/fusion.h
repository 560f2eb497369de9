// include/subspoof/fusion.h

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

#ifndef SUBSPOOF_FUSION_H_
#define SUBSPOOF_FUSION_H_

#include "subspoof/scores.h"

namespace subspoof {

struct FusionWeights {
  double alpha = 0.5;  // weight of the imaginary low-band score in stage 1
  double beta = 0.5;   // weight of the stage-1 score in stage 2

  void Validate() const;
};

/// Per-trial weight * a + (1 - weight) * b.  Both sets must hold the same
/// trial ids; output follows the order of `a` and keeps labels from `a`
/// (falling back to `b`).  Throws on weight outside [0, 1] or on a trial-set
/// mismatch, naming the first offending id.
ScoreSet FuseScores(const ScoreSet &a, const ScoreSet &b, double weight);

/// Stage 1: alpha * Q_imag_low + (1 - alpha) * Q_real_high.
ScoreSet FuseStage1(const ScoreSet &imag_low, const ScoreSet &real_high, double alpha);

/// Stage 2: beta * Q_1 + (1 - beta) * Q_f0.
ScoreSet FuseStage2(const ScoreSet &stage1, const ScoreSet &f0, double beta);

/// Both stages in sequence.
ScoreSet FuseTwoStage(const ScoreSet &imag_low, const ScoreSet &real_high,
                      const ScoreSet &f0, const FusionWeights &weights = {});

}  // namespace subspoof

#endif  // SUBSPOOF_FUSION_H_
