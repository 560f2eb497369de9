// include/subspoof/feature_io.h

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

#ifndef SUBSPOOF_FEATURE_IO_H_
#define SUBSPOOF_FEATURE_IO_H_

#include <cstdint>
#include <filesystem>
#include <span>
#include <vector>

#include "subspoof/features.h"

namespace subspoof {

// Feature file layout, all little-endian:
//
//   offset  size  field
//   0       4     magic "SBSF"
//   4       2     version (u16, currently 1)
//   6       2     dtype tag (u16: 1 = float32, 2 = float64)
//   8       4     rows (u32)
//   12      4     cols (u32)
//   16      ...   row-major payload
//
// Only the numeric payload is stored.  A file read back carries kind
// kUnspecified, a kCustom band covering all rows, and the file stem as
// trial id.

inline constexpr std::uint16_t kFeatureFileVersion = 1;
inline constexpr std::size_t kFeatureHeaderBytes = 16;

enum class FeatureDtype : std::uint16_t { kFloat32 = 1, kFloat64 = 2 };

std::vector<std::uint8_t> EncodeFeatureFile(const Matrix &data,
                                            FeatureDtype dtype = FeatureDtype::kFloat32);
Matrix DecodeFeatureFile(std::span<const std::uint8_t> bytes);

/// Throws on non-finite entries or I/O failure.
void WriteFeatureFile(const FeatureMatrix &matrix, const std::filesystem::path &path,
                      FeatureDtype dtype = FeatureDtype::kFloat32);
FeatureMatrix ReadFeatureFile(const std::filesystem::path &path);

}  // namespace subspoof

#endif  // SUBSPOOF_FEATURE_IO_H_
