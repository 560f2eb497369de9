// include/subspoof/net/asoftmax.h

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

#ifndef SUBSPOOF_NET_ASOFTMAX_H_
#define SUBSPOOF_NET_ASOFTMAX_H_

#include <span>
#include <vector>

#include "subspoof/net/tensor.h"

namespace subspoof::net {

/// Angular-margin softmax head (A-Softmax).
///
/// With unit class directions w_j = W_j / |W_j| and embedding x, let
/// cos_j = w_j . x / |x|.  Non-target logits are |x| cos_j.  The target logit
/// is
///     |x| (lambda cos_y + psi(theta_y)) / (1 + lambda),
///     psi(theta) = (-1)^k cos(m theta) - 2k,  theta in [k pi / m, (k+1) pi / m],
/// which is monotone decreasing on [0, pi].  lambda anneals from plain softmax
/// (large lambda) to the full margin (lambda = 0).  With m = 1, psi = cos and
/// the loss is ordinary cross-entropy on the cosine logits.
///
/// Backprop goes through the weight normalization, so gradients are with
/// respect to the raw weight rows.
template <typename T>
struct ASoftmaxResult {
  double loss = 0.0;            // mean over the batch
  Tensor4<T> d_embedding;       // N x D x 1 x 1
  Tensor4<T> d_weight;          // classes x D x 1 x 1
};

/// Plain cosine logits |x| cos_j = w_j . x, N x classes, row-major.
template <typename T>
std::vector<double> CosineLogits(const Tensor4<T> &embedding, const Tensor4<T> &weight);

/// psi(theta) written as a function of c = cos(theta), and its derivative.
double AngularMargin(double c, int margin, double *d_dc = nullptr);

template <typename T>
ASoftmaxResult<T> ASoftmaxLoss(const Tensor4<T> &embedding, std::span<const int> labels,
                               const Tensor4<T> &weight, int margin, double lambda);

/// Mean softmax cross-entropy of row-major N x K logits.
double SoftmaxCrossEntropy(std::span<const double> logits, std::span<const int> labels,
                           int num_classes);

}  // namespace subspoof::net

#endif  // SUBSPOOF_NET_ASOFTMAX_H_
