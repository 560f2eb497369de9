// src/net/se_block.cc

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

#include "subspoof/net/se_block.h"

#include <algorithm>

namespace subspoof::net {

template <typename T>
SeBlock<T>::SeBlock(const std::string &name, int in_channels, int out_channels, int stride,
                    int se_reduction)
    : hidden_(std::max(1, out_channels / std::max(1, se_reduction))),
      conv1_(name + ".conv1", in_channels, out_channels, 3, stride, 1, false),
      conv2_(name + ".conv2", out_channels, out_channels, 3, 1, 1, false),
      bn1_(name + ".bn1", out_channels),
      bn2_(name + ".bn2", out_channels),
      fc1_(name + ".se.fc1", out_channels, hidden_),
      fc2_(name + ".se.fc2", hidden_, out_channels) {
  if (stride != 1 || in_channels != out_channels)
    projection_ = Projection{
        Conv2d<T>(name + ".shortcut.conv", in_channels, out_channels, 1, stride, 0, false),
        BatchNorm2d<T>(name + ".shortcut.bn", out_channels)};
}

template <typename T>
void SeBlock<T>::Init(Rng *rng) {
  conv1_.Init(rng);
  conv2_.Init(rng);
  fc1_.Init(rng);
  fc2_.Init(rng);
  if (projection_) projection_->conv.Init(rng);
}

template <typename T>
Tensor4<T> SeBlock<T>::Forward(const Tensor4<T> &x, Mode mode) {
  Tensor4<T> h = relu1_.Forward(bn1_.Forward(conv1_.Forward(x, mode), mode), mode);
  residual_ = bn2_.Forward(conv2_.Forward(h, mode), mode);

  Tensor4<T> s = squeeze_.Forward(residual_, mode);
  gates_ = gate_.Forward(fc2_.Forward(relu_fc_.Forward(fc1_.Forward(s, mode), mode), mode),
                         mode);

  shortcut_ = projection_ ? projection_->bn.Forward(projection_->conv.Forward(x, mode), mode)
                          : x;
  if (!shortcut_.SameShape(residual_))
    Fail("SE block: shortcut ", shortcut_.ShapeString(), " does not match residual ",
         residual_.ShapeString());

  Tensor4<T> sum = residual_;
  const std::size_t plane = sum.plane();
  for (int n = 0; n < sum.n(); ++n)
    for (int c = 0; c < sum.c(); ++c) {
      const T g = gates_.at(n, c, 0, 0);
      T *dst = sum.Plane(n, c);
      const T *sc = shortcut_.Plane(n, c);
      for (std::size_t i = 0; i < plane; ++i) dst[i] = dst[i] * g + sc[i];
    }
  return relu_out_.Forward(sum, mode);
}

template <typename T>
Tensor4<T> SeBlock<T>::Backward(const Tensor4<T> &dy) {
  Tensor4<T> dsum = relu_out_.Backward(dy);

  // out_pre = u * g + shortcut
  Tensor4<T> du = dsum;
  Tensor4<T> dg = ZerosLike(gates_);
  const std::size_t plane = du.plane();
  for (int n = 0; n < du.n(); ++n)
    for (int c = 0; c < du.c(); ++c) {
      const T g = gates_.at(n, c, 0, 0);
      const T *u = residual_.Plane(n, c);
      T *d = du.Plane(n, c);
      double acc = 0.0;
      for (std::size_t i = 0; i < plane; ++i) {
        acc += static_cast<double>(d[i]) * u[i];
        d[i] *= g;
      }
      dg.at(n, c, 0, 0) = static_cast<T>(acc);
    }

  Tensor4<T> ds = fc1_.Backward(relu_fc_.Backward(fc2_.Backward(gate_.Backward(dg))));
  Tensor4<T> du_squeeze = squeeze_.Backward(ds);
  for (std::size_t i = 0; i < du.size(); ++i) du[i] += du_squeeze[i];

  Tensor4<T> dx =
      conv1_.Backward(bn1_.Backward(relu1_.Backward(conv2_.Backward(bn2_.Backward(du)))));

  if (projection_) {
    Tensor4<T> dsc = projection_->conv.Backward(projection_->bn.Backward(dsum));
    for (std::size_t i = 0; i < dx.size(); ++i) dx[i] += dsc[i];
  } else {
    for (std::size_t i = 0; i < dx.size(); ++i) dx[i] += dsum[i];
  }
  return dx;
}

template <typename T>
void SeBlock<T>::CollectParams(ParamList<T> *out) {
  conv1_.CollectParams(out);
  bn1_.CollectParams(out);
  conv2_.CollectParams(out);
  bn2_.CollectParams(out);
  fc1_.CollectParams(out);
  fc2_.CollectParams(out);
  if (projection_) {
    projection_->conv.CollectParams(out);
    projection_->bn.CollectParams(out);
  }
}

template <typename T>
void SeBlock<T>::CollectBuffers(BufferList<T> *out) {
  bn1_.CollectBuffers(out);
  bn2_.CollectBuffers(out);
  if (projection_) projection_->bn.CollectBuffers(out);
}

template class SeBlock<float>;
template class SeBlock<double>;

}  // namespace subspoof::net
