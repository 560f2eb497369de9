// include/subspoof/net/layers.h

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

// Layers with explicit forward/backward passes.  Forward in kTrain mode keeps
// whatever the backward pass needs; Backward consumes the gradient of the
// layer output, accumulates parameter gradients and returns the gradient of
// the layer input.  Backward after a kEval forward throws.

#ifndef SUBSPOOF_NET_LAYERS_H_
#define SUBSPOOF_NET_LAYERS_H_

#include <cstdint>
#include <random>
#include <string>
#include <vector>

#include "subspoof/net/tensor.h"

namespace subspoof::net {

using Rng = std::mt19937_64;

/// 2-D cross-correlation over NCHW input with square kernels.
template <typename T>
class Conv2d {
 public:
  Conv2d() = default;
  Conv2d(const std::string &name, int in_channels, int out_channels, int kernel,
         int stride, int padding, bool bias);

  /// Kaiming normal with fan-in scaling; bias zero.
  void Init(Rng *rng);

  Tensor4<T> Forward(const Tensor4<T> &x, Mode mode);
  Tensor4<T> Backward(const Tensor4<T> &dy);
  void CollectParams(ParamList<T> *out);

  Param<T> &weight() { return weight_; }
  Param<T> &bias() { return bias_; }
  bool has_bias() const { return has_bias_; }
  int in_channels() const { return in_; }
  int out_channels() const { return out_; }
  int kernel() const { return k_; }
  int stride() const { return stride_; }
  int padding() const { return pad_; }

 private:
  void Im2Col(const T *x, int h, int w, int ho, int wo, T *cols) const;
  void Col2Im(const T *cols, int h, int w, int ho, int wo, T *dx) const;

  int in_ = 0, out_ = 0, k_ = 1, stride_ = 1, pad_ = 0;
  bool has_bias_ = false;
  Param<T> weight_;  // out x in x k x k
  Param<T> bias_;    // 1 x out x 1 x 1
  Tensor4<T> input_;
  bool cached_ = false;
};

/// Per-channel batch normalization with running statistics (momentum 0.1,
/// unbiased running variance, eps 1e-5).
template <typename T>
class BatchNorm2d {
 public:
  BatchNorm2d() = default;
  BatchNorm2d(const std::string &name, int channels, double momentum = 0.1,
              double eps = 1e-5);

  Tensor4<T> Forward(const Tensor4<T> &x, Mode mode);
  Tensor4<T> Backward(const Tensor4<T> &dy);
  void CollectParams(ParamList<T> *out);
  void CollectBuffers(BufferList<T> *out);

  Param<T> &gamma() { return gamma_; }
  Param<T> &beta() { return beta_; }
  Buffer<T> &running_mean() { return running_mean_; }
  Buffer<T> &running_var() { return running_var_; }
  double eps() const { return eps_; }

 private:
  int channels_ = 0;
  double momentum_ = 0.1, eps_ = 1e-5;
  Param<T> gamma_, beta_;
  Buffer<T> running_mean_, running_var_;
  Tensor4<T> x_hat_;
  std::vector<double> inv_std_;
  bool cached_ = false;
};

template <typename T>
class Relu {
 public:
  Tensor4<T> Forward(const Tensor4<T> &x, Mode mode);
  Tensor4<T> Backward(const Tensor4<T> &dy);

 private:
  std::vector<std::uint8_t> mask_;
  bool cached_ = false;
};

/// Max pooling with implicit -inf padding.  Ties go to the first maximum in
/// row-major window order.
template <typename T>
class MaxPool2d {
 public:
  MaxPool2d() = default;
  MaxPool2d(int kernel, int stride, int padding)
      : k_(kernel), stride_(stride), pad_(padding) {}

  Tensor4<T> Forward(const Tensor4<T> &x, Mode mode);
  Tensor4<T> Backward(const Tensor4<T> &dy);

 private:
  int k_ = 1, stride_ = 1, pad_ = 0;
  int in_n_ = 0, in_c_ = 0, in_h_ = 0, in_w_ = 0;
  std::vector<std::size_t> argmax_;
  bool cached_ = false;
};

/// N x C x H x W -> N x C x 1 x 1 spatial mean.
template <typename T>
class GlobalAvgPool {
 public:
  Tensor4<T> Forward(const Tensor4<T> &x, Mode mode);
  Tensor4<T> Backward(const Tensor4<T> &dy);

 private:
  int in_n_ = 0, in_c_ = 0, in_h_ = 0, in_w_ = 0;
  bool cached_ = false;
};

/// Affine map on N x in x 1 x 1 tensors.
template <typename T>
class Linear {
 public:
  Linear() = default;
  Linear(const std::string &name, int in_features, int out_features);

  void Init(Rng *rng);
  Tensor4<T> Forward(const Tensor4<T> &x, Mode mode);
  Tensor4<T> Backward(const Tensor4<T> &dy);
  void CollectParams(ParamList<T> *out);

  Param<T> &weight() { return weight_; }  // out x in x 1 x 1
  Param<T> &bias() { return bias_; }      // 1 x out x 1 x 1

 private:
  int in_ = 0, out_ = 0;
  Param<T> weight_, bias_;
  Tensor4<T> input_;
  bool cached_ = false;
};

template <typename T>
class Sigmoid {
 public:
  Tensor4<T> Forward(const Tensor4<T> &x, Mode mode);
  Tensor4<T> Backward(const Tensor4<T> &dy);

 private:
  Tensor4<T> out_;
  bool cached_ = false;
};

/// Kaiming-normal sample: N(0, 2 / fan_in).
template <typename T>
void KaimingNormal(Tensor4<T> *t, int fan_in, Rng *rng);

}  // namespace subspoof::net

#endif  // SUBSPOOF_NET_LAYERS_H_
