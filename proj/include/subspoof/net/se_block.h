// include/subspoof/net/se_block.h

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

#ifndef SUBSPOOF_NET_SE_BLOCK_H_
#define SUBSPOOF_NET_SE_BLOCK_H_

#include <optional>
#include <string>

#include "subspoof/net/layers.h"

namespace subspoof::net {

/// Basic residual block with squeeze-and-excitation gating:
///
///   u   = bn2(conv3x3(relu(bn1(conv3x3_stride(x)))))
///   g   = sigmoid(fc2(relu(fc1(mean_hw(u)))))      one gate per channel
///   out = relu(u * g + shortcut(x))
///
/// shortcut is the identity, or a strided 1x1 convolution plus batchnorm
/// when the stride or channel count changes.  fc1 maps C -> max(1, C / r).
template <typename T>
class SeBlock {
 public:
  SeBlock() = default;
  SeBlock(const std::string &name, int in_channels, int out_channels, int stride,
          int se_reduction);

  void Init(Rng *rng);
  Tensor4<T> Forward(const Tensor4<T> &x, Mode mode);
  Tensor4<T> Backward(const Tensor4<T> &dy);
  void CollectParams(ParamList<T> *out);
  void CollectBuffers(BufferList<T> *out);

  bool has_projection() const { return projection_.has_value(); }
  int hidden_units() const { return hidden_; }

  // Exposed for tests.
  Conv2d<T> &conv1() { return conv1_; }
  Conv2d<T> &conv2() { return conv2_; }
  BatchNorm2d<T> &bn1() { return bn1_; }
  BatchNorm2d<T> &bn2() { return bn2_; }
  Linear<T> &fc1() { return fc1_; }
  Linear<T> &fc2() { return fc2_; }
  Conv2d<T> &projection_conv() { return projection_->conv; }
  BatchNorm2d<T> &projection_bn() { return projection_->bn; }
  /// Residual-branch output u and gates g from the most recent Forward.
  const Tensor4<T> &last_residual() const { return residual_; }
  const Tensor4<T> &last_gates() const { return gates_; }
  const Tensor4<T> &last_shortcut() const { return shortcut_; }

 private:
  struct Projection {
    Conv2d<T> conv;
    BatchNorm2d<T> bn;
  };

  int hidden_ = 1;
  Conv2d<T> conv1_, conv2_;
  BatchNorm2d<T> bn1_, bn2_;
  Relu<T> relu1_, relu_fc_, relu_out_;
  GlobalAvgPool<T> squeeze_;
  Linear<T> fc1_, fc2_;
  Sigmoid<T> gate_;
  std::optional<Projection> projection_;

  Tensor4<T> residual_;  // u
  Tensor4<T> gates_;     // N x C x 1 x 1
  Tensor4<T> shortcut_;
};

}  // namespace subspoof::net

#endif  // SUBSPOOF_NET_SE_BLOCK_H_
