// include/subspoof/net/senet.h

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

#ifndef SUBSPOOF_NET_SENET_H_
#define SUBSPOOF_NET_SENET_H_

#include <cstdint>
#include <map>
#include <string>
#include <vector>

#include "subspoof/net/layers.h"
#include "subspoof/net/se_block.h"

namespace subspoof::net {

struct StageSpec {
  int blocks = 1;
  int channels = 16;
  int stride = 1;

  bool operator==(const StageSpec &) const = default;
};

/// SE-ResNet34-style classifier.  Defaults give the full-width network:
///   stem   conv 7x7/2 pad 3 (16 ch), batchnorm, relu, maxpool 3x3/2 pad 1
///   stages (3 x 16, /1) (4 x 32, /2) (6 x 64, /1) (3 x 128, /2)
///   head   global average pooling, A-Softmax over 2 classes
/// width_multiplier scales every channel count (rounded, at least 1).
struct SenetConfig {
  int in_channels = 1;
  int stem_channels = 16;
  int stem_kernel = 7;
  int stem_stride = 2;
  int stem_padding = 3;
  int pool_kernel = 3;
  int pool_stride = 2;
  int pool_padding = 1;
  std::vector<StageSpec> stages = {{3, 16, 1}, {4, 32, 2}, {6, 64, 1}, {3, 128, 2}};
  int se_reduction = 16;
  int num_classes = 2;
  double width_multiplier = 1.0;

  int Scaled(int channels) const;
  int EmbeddingDim() const;
  /// Throws on non-positive sizes or an empty stage list.
  void Validate() const;

  /// key=value text, one per line; stages as "blocks:channels:stride,...".
  std::string Serialize() const;
  static SenetConfig Deserialize(const std::string &text);

  bool operator==(const SenetConfig &) const = default;
};

/// Smallest spatial size allowed after the stem (convolution + max pool).
inline constexpr int kMinStemOutput = 8;

template <typename T>
class Senet {
 public:
  explicit Senet(const SenetConfig &config);

  /// Deterministic initialization from a seed.
  void Init(std::uint64_t seed);

  const SenetConfig &config() const { return config_; }

  /// Input N x in_channels x H x W -> embedding N x D x 1 x 1.
  /// Throws if the stem output would be smaller than kMinStemOutput.
  Tensor4<T> Embed(const Tensor4<T> &x, Mode mode);
  /// Gradient of the embedding -> gradient of the input.
  Tensor4<T> BackwardEmbed(const Tensor4<T> &d_embedding);

  /// Cosine logits, N x num_classes row-major.
  std::vector<double> Forward(const Tensor4<T> &x, Mode mode);

  Param<T> &head() { return head_; }

  ParamList<T> Params();
  BufferList<T> Buffers();
  void ZeroGrad();

  std::vector<SeBlock<T>> &blocks() { return blocks_; }

 private:
  void CheckInput(const Tensor4<T> &x) const;

  SenetConfig config_;
  Conv2d<T> stem_conv_;
  BatchNorm2d<T> stem_bn_;
  Relu<T> stem_relu_;
  MaxPool2d<T> stem_pool_;
  std::vector<SeBlock<T>> blocks_;
  GlobalAvgPool<T> pool_;
  Param<T> head_;  // num_classes x D x 1 x 1
};

/// Copies of all parameter and buffer values, keyed by name.
template <typename T>
struct ModelSnapshot {
  std::map<std::string, Tensor4<T>> tensors;
};

template <typename T>
ModelSnapshot<T> TakeSnapshot(Senet<T> &model);
template <typename T>
void RestoreSnapshot(const ModelSnapshot<T> &snap, Senet<T> *model);

}  // namespace subspoof::net

#endif  // SUBSPOOF_NET_SENET_H_
