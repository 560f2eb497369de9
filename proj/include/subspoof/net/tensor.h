// include/subspoof/net/tensor.h

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

#ifndef SUBSPOOF_NET_TENSOR_H_
#define SUBSPOOF_NET_TENSOR_H_

#include <algorithm>
#include <cstddef>
#include <string>
#include <vector>

#include "subspoof/common.h"

namespace subspoof::net {

/// Dense NCHW tensor.  For feature inputs H indexes frequency bins and W
/// indexes frames.  Vectors and matrices use the trailing dims as 1.
template <typename T>
class Tensor4 {
 public:
  Tensor4() = default;
  Tensor4(int n, int c, int h, int w, T fill = T(0)) : n_(n), c_(c), h_(h), w_(w) {
    if (n <= 0 || c <= 0 || h <= 0 || w <= 0)
      Fail("tensor dims must be positive, got ", n, "x", c, "x", h, "x", w);
    data_.assign(static_cast<std::size_t>(n) * c * h * w, fill);
  }

  int n() const { return n_; }
  int c() const { return c_; }
  int h() const { return h_; }
  int w() const { return w_; }
  std::size_t size() const { return data_.size(); }
  std::size_t plane() const { return static_cast<std::size_t>(h_) * w_; }
  bool empty() const { return data_.empty(); }

  T *data() { return data_.data(); }
  const T *data() const { return data_.data(); }
  std::vector<T> &vec() { return data_; }
  const std::vector<T> &vec() const { return data_; }

  std::size_t Index(int n, int c, int h, int w) const {
    return ((static_cast<std::size_t>(n) * c_ + c) * h_ + h) * w_ + w;
  }
  T &at(int n, int c, int h, int w) { return data_[Index(n, c, h, w)]; }
  T at(int n, int c, int h, int w) const { return data_[Index(n, c, h, w)]; }
  T &operator[](std::size_t i) { return data_[i]; }
  T operator[](std::size_t i) const { return data_[i]; }

  /// Start of the (n, c) plane.
  T *Plane(int n, int c) { return data_.data() + Index(n, c, 0, 0); }
  const T *Plane(int n, int c) const { return data_.data() + Index(n, c, 0, 0); }
  /// Start of sample n.
  T *Sample(int n) { return data_.data() + Index(n, 0, 0, 0); }
  const T *Sample(int n) const { return data_.data() + Index(n, 0, 0, 0); }

  bool SameShape(const Tensor4 &o) const {
    return n_ == o.n_ && c_ == o.c_ && h_ == o.h_ && w_ == o.w_;
  }
  void Fill(T v) { std::fill(data_.begin(), data_.end(), v); }

  std::string ShapeString() const {
    return std::to_string(n_) + "x" + std::to_string(c_) + "x" + std::to_string(h_) +
           "x" + std::to_string(w_);
  }

  bool operator==(const Tensor4 &) const = default;

 private:
  int n_ = 0, c_ = 0, h_ = 0, w_ = 0;
  std::vector<T> data_;
};

template <typename T>
Tensor4<T> ZerosLike(const Tensor4<T> &t) {
  return Tensor4<T>(t.n(), t.c(), t.h(), t.w());
}

/// A trainable tensor with its gradient.  decay marks tensors that receive
/// weight decay (convolution and affine weights, not biases or batchnorm).
template <typename T>
struct Param {
  std::string name;
  Tensor4<T> value;
  Tensor4<T> grad;
  bool decay = true;

  void Reset(std::string param_name, Tensor4<T> init, bool with_decay) {
    name = std::move(param_name);
    value = std::move(init);
    grad = ZerosLike(value);
    decay = with_decay;
  }
  void ZeroGrad() { grad.Fill(T(0)); }
};

/// Non-trainable state saved with the model (batchnorm running statistics).
template <typename T>
struct Buffer {
  std::string name;
  Tensor4<T> value;
};

template <typename T>
using ParamList = std::vector<Param<T> *>;
template <typename T>
using BufferList = std::vector<Buffer<T> *>;

enum class Mode { kTrain, kEval };

/// Output size of a strided window: floor((in + 2 pad - kernel) / stride) + 1.
inline int PooledSize(int in, int kernel, int stride, int pad) {
  int span = in + 2 * pad - kernel;
  if (span < 0 || stride <= 0)
    Fail("window of size ", kernel, " does not fit input ", in, " with padding ", pad);
  return span / stride + 1;
}

}  // namespace subspoof::net

#endif  // SUBSPOOF_NET_TENSOR_H_
