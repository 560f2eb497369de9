// src/net/adam.cc

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

#include "subspoof/net/adam.h"

#include <cmath>

namespace subspoof::net {

void AdamConfig::Validate() const {
  if (!(beta1 > 0.0 && beta1 < 1.0)) Fail("adam beta1 must lie in (0, 1), got ", beta1);
  if (!(beta2 > 0.0 && beta2 < 1.0)) Fail("adam beta2 must lie in (0, 1), got ", beta2);
  if (!(epsilon > 0.0)) Fail("adam epsilon must be positive");
  if (!(learning_rate >= 0.0)) Fail("learning rate must be >= 0");
  if (!(weight_decay >= 0.0)) Fail("weight decay must be >= 0");
}

template <typename T>
Adam<T>::Adam(ParamList<T> params, const AdamConfig &config)
    : params_(std::move(params)), config_(config) {
  config_.Validate();
  for (auto *p : params_) {
    m_.push_back(ZerosLike(p->value));
    v_.push_back(ZerosLike(p->value));
  }
}

template <typename T>
void Adam<T>::Step() {
  ++step_;
  const double b1 = config_.beta1, b2 = config_.beta2;
  const double c1 = 1.0 - std::pow(b1, static_cast<double>(step_));
  const double c2 = 1.0 - std::pow(b2, static_cast<double>(step_));
  const double lr = config_.learning_rate;
  for (std::size_t k = 0; k < params_.size(); ++k) {
    Param<T> &p = *params_[k];
    const double wd = p.decay ? config_.weight_decay : 0.0;
    T *w = p.value.data();
    const T *g = p.grad.data();
    T *m = m_[k].data();
    T *v = v_[k].data();
    for (std::size_t i = 0; i < p.value.size(); ++i) {
      const double gi = g[i];
      const double mi = b1 * m[i] + (1.0 - b1) * gi;
      const double vi = b2 * v[i] + (1.0 - b2) * gi * gi;
      m[i] = static_cast<T>(mi);
      v[i] = static_cast<T>(vi);
      const double update = (mi / c1) / (std::sqrt(vi / c2) + config_.epsilon);
      w[i] = static_cast<T>(w[i] - lr * update - lr * wd * w[i]);
    }
  }
}

template class Adam<float>;
template class Adam<double>;

}  // namespace subspoof::net
