// include/subspoof/net/trainer.h

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

#ifndef SUBSPOOF_NET_TRAINER_H_
#define SUBSPOOF_NET_TRAINER_H_

#include <cstdint>
#include <functional>
#include <span>
#include <string>
#include <vector>

#include "subspoof/common.h"
#include "subspoof/net/adam.h"
#include "subspoof/net/senet.h"
#include "subspoof/protocol.h"

namespace subspoof::net {

/// A-Softmax annealing: lambda(t) = max(min, base (1 + gamma t)^-power) where
/// t counts optimizer steps.
struct LambdaSchedule {
  double base = 1000.0;
  double gamma = 0.12;
  double power = 1.0;
  double min = 5.0;

  double At(std::uint64_t iteration) const;
};

struct TrainConfig {
  AdamConfig adam;
  int epochs = 32;
  int batch_size = 8;
  int margin = 4;
  LambdaSchedule lambda;
  std::uint64_t seed = 1;

  void Validate() const;
};

/// One utterance: features are bins x frames.
struct Example {
  std::string trial_id;
  Matrix features;
  Label label = Label::kBonafide;
};

/// Class index used by the classifier head.
inline int ClassIndex(Label label) { return label == Label::kBonafide ? 0 : 1; }

struct EpochLog {
  int epoch = 0;  // 1-based
  double train_loss = 0.0;
  double dev_eer = 0.0;

  bool operator==(const EpochLog &) const = default;
};

struct TrainResult {
  std::vector<EpochLog> log;
  int best_epoch = 0;
  double best_dev_eer = 1.0;
};

/// Stacks equally sized matrices into an N x 1 x rows x cols tensor.
template <typename T>
Tensor4<T> StackFeatures(std::span<const Matrix *const> features);

/// Runs tc.epochs epochs of seeded mini-batch training.  After each epoch the
/// dev EER is computed and the parameters, buffers and optimizer state of the
/// best epoch (lowest EER, earliest on ties) are restored at the end.
/// Throws on inconsistent feature shapes, an empty or single-class dev set,
/// or a non-finite loss.
template <typename T>
TrainResult Train(Senet<T> *model, Adam<T> *optimizer, std::span<const Example> train,
                  std::span<const Example> dev, const TrainConfig &tc,
                  const std::function<void(const EpochLog &)> &on_epoch = {});

/// Eval-mode scores, logit(bonafide) - logit(spoof) per example, which equals
/// the log-softmax difference.
template <typename T>
std::vector<double> ScoreExamples(Senet<T> *model, std::span<const Matrix *const> features,
                                  int batch_size = 16);

/// log-softmax(bonafide) - log-softmax(spoof) from a pair of logits.
double LogLikelihoodRatio(double logit_bonafide, double logit_spoof);

}  // namespace subspoof::net

#endif  // SUBSPOOF_NET_TRAINER_H_
