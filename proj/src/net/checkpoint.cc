// src/net/checkpoint.cc

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

#include "subspoof/net/checkpoint.h"

#include <cstring>
#include <map>

#include "subspoof/binary.h"

namespace subspoof::net {

namespace {

constexpr char kMagic[4] = {'S', 'B', 'C', 'K'};

struct StoredTensor {
  int dims[4] = {0, 0, 0, 0};
  std::vector<float> data;
};

struct ParsedCheckpoint {
  SenetConfig config;
  std::uint64_t adam_step = 0;
  std::vector<std::string> order;
  std::map<std::string, StoredTensor> tensors;
};

void PutTensor(ByteWriter *w, const std::string &name, const Tensor4<float> &t) {
  w->String(name);
  w->U8(4);
  w->U32(t.n());
  w->U32(t.c());
  w->U32(t.h());
  w->U32(t.w());
  for (std::size_t i = 0; i < t.size(); ++i) w->F32(t[i]);
}

ParsedCheckpoint Parse(const std::filesystem::path &path) {
  std::vector<std::uint8_t> bytes = ReadFileBytes(path);
  ByteReader r(bytes);
  try {
    char magic[4];
    r.Bytes(magic, 4);
    if (std::memcmp(magic, kMagic, 4) != 0) Fail("not a checkpoint (bad magic)");
    std::uint16_t version = r.U16();
    if (version != kCheckpointVersion)
      Fail("unsupported checkpoint version ", version, " (expected ", kCheckpointVersion,
           ")");
    ParsedCheckpoint ck;
    ck.config = SenetConfig::Deserialize(r.String());
    ck.adam_step = r.U64();
    std::uint32_t count = r.U32();
    for (std::uint32_t k = 0; k < count; ++k) {
      std::string name = r.String();
      std::uint8_t ndims = r.U8();
      if (ndims != 4) Fail("tensor ", name, " has ", int(ndims), " dims, expected 4");
      StoredTensor t;
      std::size_t total = 1;
      for (int d = 0; d < 4; ++d) {
        t.dims[d] = static_cast<int>(r.U32());
        if (t.dims[d] <= 0) Fail("tensor ", name, " has a non-positive dimension");
        total *= static_cast<std::size_t>(t.dims[d]);
      }
      if (total > r.remaining() / 4) Fail("unexpected end of payload");
      t.data.resize(total);
      for (auto &v : t.data) v = r.F32();
      if (!ck.tensors.emplace(name, std::move(t)).second)
        Fail("duplicate tensor ", name);
      ck.order.push_back(name);
    }
    if (r.remaining() != 0) Fail(r.remaining(), " trailing bytes");
    return ck;
  } catch (const Error &e) {
    Fail("checkpoint ", path.string(), ": ", e.what());
  }
}

bool ShapeMatches(const StoredTensor &s, const Tensor4<float> &t) {
  return s.dims[0] == t.n() && s.dims[1] == t.c() && s.dims[2] == t.h() &&
         s.dims[3] == t.w();
}

std::string DimString(const StoredTensor &s) {
  return std::to_string(s.dims[0]) + "x" + std::to_string(s.dims[1]) + "x" +
         std::to_string(s.dims[2]) + "x" + std::to_string(s.dims[3]);
}

void Assign(const StoredTensor &s, Tensor4<float> *t) {
  std::copy(s.data.begin(), s.data.end(), t->data());
}

}  // namespace

void SaveCheckpoint(const std::filesystem::path &path, Senet<float> &model,
                    const Adam<float> *optimizer) {
  ParamList<float> params = model.Params();
  BufferList<float> buffers = model.Buffers();
  ByteWriter w;
  w.Bytes(kMagic, 4);
  w.U16(kCheckpointVersion);
  w.String(model.config().Serialize());
  w.U64(optimizer ? optimizer->step_count() : 0);
  std::size_t count = params.size() + buffers.size();
  if (optimizer) count += 2 * optimizer->params().size();
  w.U32(static_cast<std::uint32_t>(count));
  for (auto *p : params) PutTensor(&w, "param:" + p->name, p->value);
  for (auto *b : buffers) PutTensor(&w, "buffer:" + b->name, b->value);
  if (optimizer) {
    const Adam<float> &opt = *optimizer;
    for (std::size_t k = 0; k < opt.params().size(); ++k) {
      PutTensor(&w, "adam_m:" + opt.params()[k]->name, opt.first_moments()[k]);
      PutTensor(&w, "adam_v:" + opt.params()[k]->name, opt.second_moments()[k]);
    }
  }
  std::vector<std::uint8_t> bytes = w.Take();
  WriteFileBytes(path, bytes);
}

void LoadCheckpoint(const std::filesystem::path &path, Senet<float> *model,
                    Adam<float> *optimizer) {
  ParsedCheckpoint ck = Parse(path);

  // Every target tensor paired with its stored source; validated up front.
  std::vector<std::pair<const StoredTensor *, Tensor4<float> *>> plan;
  auto want = [&](const std::string &key, Tensor4<float> *target) {
    auto it = ck.tensors.find(key);
    if (it == ck.tensors.end())
      Fail("checkpoint ", path.string(), ": missing tensor ", key);
    if (!ShapeMatches(it->second, *target))
      Fail("checkpoint ", path.string(), ": tensor ", key, " has shape ",
           DimString(it->second), " but the model expects ", target->ShapeString());
    plan.emplace_back(&it->second, target);
  };
  for (auto *p : model->Params()) want("param:" + p->name, &p->value);
  for (auto *b : model->Buffers()) want("buffer:" + b->name, &b->value);
  if (optimizer) {
    for (std::size_t k = 0; k < optimizer->params().size(); ++k) {
      want("adam_m:" + optimizer->params()[k]->name, &optimizer->first_moments()[k]);
      want("adam_v:" + optimizer->params()[k]->name, &optimizer->second_moments()[k]);
    }
  }
  for (const std::string &name : ck.order) {
    bool used = false;
    for (auto &[src, dst] : plan) used = used || src == &ck.tensors.at(name);
    if (!used && !(optimizer == nullptr && (name.starts_with("adam_m:") ||
                                            name.starts_with("adam_v:"))))
      Fail("checkpoint ", path.string(), ": unexpected tensor ", name);
  }

  for (auto &[src, dst] : plan) Assign(*src, dst);
  if (optimizer) optimizer->set_step_count(ck.adam_step);
}

SenetConfig ReadCheckpointConfig(const std::filesystem::path &path) {
  return Parse(path).config;
}

std::unique_ptr<Senet<float>> LoadModel(const std::filesystem::path &path) {
  auto model = std::make_unique<Senet<float>>(ReadCheckpointConfig(path));
  LoadCheckpoint(path, model.get());
  return model;
}

}  // namespace subspoof::net
