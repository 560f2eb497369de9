// include/subspoof/net/checkpoint.h

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

// Checkpoint file layout (little-endian):
//   "SBCK"  u16 version (1)  string config  u64 adam_step  u32 tensor_count
//   per tensor: string name, u8 ndims (4), u32 dims[4], float32 payload
// Strings are u32 length-prefixed.  Tensor names carry a prefix: "param:",
// "buffer:", "adam_m:" or "adam_v:".

#ifndef SUBSPOOF_NET_CHECKPOINT_H_
#define SUBSPOOF_NET_CHECKPOINT_H_

#include <filesystem>
#include <memory>

#include "subspoof/net/adam.h"
#include "subspoof/net/senet.h"

namespace subspoof::net {

inline constexpr std::uint16_t kCheckpointVersion = 1;

/// optimizer may be null, in which case no moments are stored.
void SaveCheckpoint(const std::filesystem::path &path, Senet<float> &model,
                    const Adam<float> *optimizer = nullptr);

/// Validates every tensor against the model (and optimizer, if given) before
/// touching either; on any mismatch nothing is modified and the error names
/// the first offending tensor.
void LoadCheckpoint(const std::filesystem::path &path, Senet<float> *model,
                    Adam<float> *optimizer = nullptr);

SenetConfig ReadCheckpointConfig(const std::filesystem::path &path);

/// Builds a model from the stored configuration and loads its weights.
std::unique_ptr<Senet<float>> LoadModel(const std::filesystem::path &path);

}  // namespace subspoof::net

#endif  // SUBSPOOF_NET_CHECKPOINT_H_
