// src/net/senet.cc

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

#include "subspoof/net/senet.h"

#include <cmath>
#include <cstdio>
#include <sstream>

#include "subspoof/kv_config.h"
#include "subspoof/net/asoftmax.h"

namespace subspoof::net {

int SenetConfig::Scaled(int channels) const {
  return std::max(1, static_cast<int>(std::lround(channels * width_multiplier)));
}

int SenetConfig::EmbeddingDim() const { return Scaled(stages.back().channels); }

void SenetConfig::Validate() const {
  if (in_channels <= 0 || stem_channels <= 0 || stem_kernel <= 0 || stem_stride <= 0 ||
      stem_padding < 0 || pool_kernel <= 0 || pool_stride <= 0 || pool_padding < 0)
    Fail("SenetConfig: stem sizes must be positive");
  if (stages.empty()) Fail("SenetConfig: at least one stage is required");
  for (const auto &s : stages)
    if (s.blocks < 1 || s.channels < 1 || s.stride < 1)
      Fail("SenetConfig: stage block counts, channels and strides must be >= 1");
  if (se_reduction < 1) Fail("SenetConfig: se_reduction must be >= 1");
  if (num_classes < 2) Fail("SenetConfig: need at least two classes");
  if (!(width_multiplier > 0.0)) Fail("SenetConfig: width_multiplier must be positive");
}

std::string SenetConfig::Serialize() const {
  std::ostringstream os;
  char wm[32];
  std::snprintf(wm, sizeof wm, "%.17g", width_multiplier);
  os << "in_channels=" << in_channels << '\n'
     << "stem_channels=" << stem_channels << '\n'
     << "stem_kernel=" << stem_kernel << '\n'
     << "stem_stride=" << stem_stride << '\n'
     << "stem_padding=" << stem_padding << '\n'
     << "pool_kernel=" << pool_kernel << '\n'
     << "pool_stride=" << pool_stride << '\n'
     << "pool_padding=" << pool_padding << '\n'
     << "stages=";
  for (std::size_t i = 0; i < stages.size(); ++i)
    os << (i ? "," : "") << stages[i].blocks << ':' << stages[i].channels << ':'
       << stages[i].stride;
  os << '\n'
     << "se_reduction=" << se_reduction << '\n'
     << "num_classes=" << num_classes << '\n'
     << "width_multiplier=" << wm << '\n';
  return os.str();
}

SenetConfig SenetConfig::Deserialize(const std::string &text) {
  std::istringstream in(text);
  auto kv = ParseKeyValue(in);
  auto get = [&](const char *key) -> const std::string & {
    auto it = kv.find(key);
    if (it == kv.end()) Fail("SenetConfig: missing key '", key, "'");
    return it->second;
  };
  auto get_int = [&](const char *key) {
    try {
      return std::stoi(get(key));
    } catch (const std::logic_error &) {
      Fail("SenetConfig: bad integer for '", key, "'");
    }
  };
  SenetConfig c;
  c.in_channels = get_int("in_channels");
  c.stem_channels = get_int("stem_channels");
  c.stem_kernel = get_int("stem_kernel");
  c.stem_stride = get_int("stem_stride");
  c.stem_padding = get_int("stem_padding");
  c.pool_kernel = get_int("pool_kernel");
  c.pool_stride = get_int("pool_stride");
  c.pool_padding = get_int("pool_padding");
  c.se_reduction = get_int("se_reduction");
  c.num_classes = get_int("num_classes");
  try {
    c.width_multiplier = std::stod(get("width_multiplier"));
  } catch (const std::logic_error &) {
    Fail("SenetConfig: bad width_multiplier");
  }
  c.stages.clear();
  std::istringstream stages(get("stages"));
  for (std::string item; std::getline(stages, item, ',');) {
    StageSpec s;
    if (std::sscanf(item.c_str(), "%d:%d:%d", &s.blocks, &s.channels, &s.stride) != 3)
      Fail("SenetConfig: bad stage '", item, "'");
    c.stages.push_back(s);
  }
  c.Validate();
  return c;
}

template <typename T>
Senet<T>::Senet(const SenetConfig &config) : config_(config) {
  config_.Validate();
  const int stem = config_.Scaled(config_.stem_channels);
  stem_conv_ = Conv2d<T>("stem.conv", config_.in_channels, stem, config_.stem_kernel,
                         config_.stem_stride, config_.stem_padding, false);
  stem_bn_ = BatchNorm2d<T>("stem.bn", stem);
  stem_pool_ = MaxPool2d<T>(config_.pool_kernel, config_.pool_stride, config_.pool_padding);
  int in = stem;
  for (std::size_t s = 0; s < config_.stages.size(); ++s) {
    const StageSpec &spec = config_.stages[s];
    const int out = config_.Scaled(spec.channels);
    for (int b = 0; b < spec.blocks; ++b) {
      std::string name = "layer" + std::to_string(s + 1) + "." + std::to_string(b);
      blocks_.emplace_back(name, in, out, b == 0 ? spec.stride : 1, config_.se_reduction);
      in = out;
    }
  }
  head_.Reset("head.weight", Tensor4<T>(config_.num_classes, in, 1, 1), true);
}

template <typename T>
void Senet<T>::Init(std::uint64_t seed) {
  Rng rng(seed);
  stem_conv_.Init(&rng);
  for (auto &b : blocks_) b.Init(&rng);
  KaimingNormal(&head_.value, head_.value.c(), &rng);
  for (auto *b : Buffers()) {
    bool is_var = b->name.size() >= 3 && b->name.ends_with("var");
    b->value.Fill(is_var ? T(1) : T(0));
  }
}

template <typename T>
void Senet<T>::CheckInput(const Tensor4<T> &x) const {
  if (x.c() != config_.in_channels)
    Fail("SENet input has ", x.c(), " channels, expected ", config_.in_channels);
  auto stem_out = [&](int size) {
    int span = size + 2 * config_.stem_padding - config_.stem_kernel;
    if (span < 0) return -1;
    int conv = span / config_.stem_stride + 1;
    int pspan = conv + 2 * config_.pool_padding - config_.pool_kernel;
    if (pspan < 0) return -1;
    return pspan / config_.pool_stride + 1;
  };
  int h = stem_out(x.h()), w = stem_out(x.w());
  if (h < kMinStemOutput || w < kMinStemOutput)
    Fail("SENet input ", x.h(), "x", x.w(), " too small for the stride schedule: stem output ",
         h, "x", w, " is below ", kMinStemOutput, "x", kMinStemOutput);
}

template <typename T>
Tensor4<T> Senet<T>::Embed(const Tensor4<T> &x, Mode mode) {
  CheckInput(x);
  Tensor4<T> h = stem_pool_.Forward(
      stem_relu_.Forward(stem_bn_.Forward(stem_conv_.Forward(x, mode), mode), mode), mode);
  for (auto &b : blocks_) h = b.Forward(h, mode);
  return pool_.Forward(h, mode);
}

template <typename T>
Tensor4<T> Senet<T>::BackwardEmbed(const Tensor4<T> &d_embedding) {
  Tensor4<T> d = pool_.Backward(d_embedding);
  for (auto it = blocks_.rbegin(); it != blocks_.rend(); ++it) d = it->Backward(d);
  return stem_conv_.Backward(
      stem_bn_.Backward(stem_relu_.Backward(stem_pool_.Backward(d))));
}

template <typename T>
std::vector<double> Senet<T>::Forward(const Tensor4<T> &x, Mode mode) {
  return CosineLogits(Embed(x, mode), head_.value);
}

template <typename T>
ParamList<T> Senet<T>::Params() {
  ParamList<T> out;
  stem_conv_.CollectParams(&out);
  stem_bn_.CollectParams(&out);
  for (auto &b : blocks_) b.CollectParams(&out);
  out.push_back(&head_);
  return out;
}

template <typename T>
BufferList<T> Senet<T>::Buffers() {
  BufferList<T> out;
  stem_bn_.CollectBuffers(&out);
  for (auto &b : blocks_) b.CollectBuffers(&out);
  return out;
}

template <typename T>
void Senet<T>::ZeroGrad() {
  for (auto *p : Params()) p->ZeroGrad();
}

template <typename T>
ModelSnapshot<T> TakeSnapshot(Senet<T> &model) {
  ModelSnapshot<T> snap;
  for (auto *p : model.Params()) snap.tensors[p->name] = p->value;
  for (auto *b : model.Buffers()) snap.tensors[b->name] = b->value;
  return snap;
}

template <typename T>
void RestoreSnapshot(const ModelSnapshot<T> &snap, Senet<T> *model) {
  for (auto *p : model->Params()) p->value = snap.tensors.at(p->name);
  for (auto *b : model->Buffers()) b->value = snap.tensors.at(b->name);
}

template class Senet<float>;
template class Senet<double>;
template ModelSnapshot<float> TakeSnapshot(Senet<float> &);
template ModelSnapshot<double> TakeSnapshot(Senet<double> &);
template void RestoreSnapshot(const ModelSnapshot<float> &, Senet<float> *);
template void RestoreSnapshot(const ModelSnapshot<double> &, Senet<double> *);

}  // namespace subspoof::net
