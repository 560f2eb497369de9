// include/subspoof/net/adam.h

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

#ifndef SUBSPOOF_NET_ADAM_H_
#define SUBSPOOF_NET_ADAM_H_

#include <cstdint>
#include <vector>

#include "subspoof/net/tensor.h"

namespace subspoof::net {

struct AdamConfig {
  double learning_rate = 3e-4;
  double beta1 = 0.9;
  double beta2 = 0.98;
  double epsilon = 1e-9;
  double weight_decay = 1e-4;

  /// Throws unless 0 < beta < 1, epsilon > 0, learning_rate >= 0, decay >= 0.
  void Validate() const;
};

/// Adam with bias correction and decoupled weight decay, applied only to
/// parameters flagged for decay:
///   m = b1 m + (1 - b1) g,  v = b2 v + (1 - b2) g^2
///   p -= lr (m / (1 - b1^t)) / (sqrt(v / (1 - b2^t)) + eps) + lr wd p
template <typename T>
class Adam {
 public:
  Adam(ParamList<T> params, const AdamConfig &config);

  void Step();

  std::uint64_t step_count() const { return step_; }
  void set_step_count(std::uint64_t s) { step_ = s; }
  const AdamConfig &config() const { return config_; }

  std::vector<Tensor4<T>> &first_moments() { return m_; }
  std::vector<Tensor4<T>> &second_moments() { return v_; }
  const std::vector<Tensor4<T>> &first_moments() const { return m_; }
  const std::vector<Tensor4<T>> &second_moments() const { return v_; }
  const ParamList<T> &params() const { return params_; }

 private:
  ParamList<T> params_;
  AdamConfig config_;
  std::vector<Tensor4<T>> m_, v_;
  std::uint64_t step_ = 0;
};

}  // namespace subspoof::net

#endif  // SUBSPOOF_NET_ADAM_H_
