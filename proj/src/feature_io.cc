// src/feature_io.cc

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

#include "subspoof/feature_io.h"

#include <bit>
#include <cmath>
#include <cstring>
#include <fstream>
#include <iterator>
#include <limits>

#include "subspoof/binary.h"

namespace subspoof {

std::vector<std::uint8_t> EncodeFeatureFile(const Matrix &data, FeatureDtype dtype) {
  if (data.rows() > std::numeric_limits<std::uint32_t>::max() ||
      data.cols() > std::numeric_limits<std::uint32_t>::max())
    Fail("feature matrix dimensions overflow the file header: ", data.rows(), "x",
         data.cols());
  for (double v : data.data())
    if (!std::isfinite(v)) Fail("feature matrix contains a non-finite value");

  std::size_t width = dtype == FeatureDtype::kFloat32 ? 4 : 8;
  ByteWriter w;
  w.Reserve(kFeatureHeaderBytes + data.size() * width);
  w.Bytes("SBSF", 4);
  w.U16(kFeatureFileVersion);
  w.U16(static_cast<std::uint16_t>(dtype));
  w.U32(static_cast<std::uint32_t>(data.rows()));
  w.U32(static_cast<std::uint32_t>(data.cols()));
  for (double v : data.data()) {
    if (dtype == FeatureDtype::kFloat32)
      w.F32(static_cast<float>(v));
    else
      w.F64(v);
  }
  return w.Take();
}

Matrix DecodeFeatureFile(std::span<const std::uint8_t> bytes) {
  ByteReader r(bytes);
  if (bytes.size() < kFeatureHeaderBytes) Fail("feature file: truncated header");
  if (std::memcmp(bytes.data(), "SBSF", 4) != 0) Fail("feature file: bad magic");
  r.Skip(4);
  std::uint16_t version = r.U16();
  if (version != kFeatureFileVersion)
    Fail("feature file: unsupported version ", version);
  std::uint16_t tag = r.U16();
  if (tag != 1 && tag != 2) Fail("feature file: unknown dtype tag ", tag);
  std::uint64_t rows = r.U32();
  std::uint64_t cols = r.U32();
  std::uint64_t width = tag == 1 ? 4 : 8;
  unsigned __int128 expected = static_cast<unsigned __int128>(rows) * cols * width;
  if (expected > r.remaining()) Fail("feature file: unexpected end of payload");
  if (expected != r.remaining())
    Fail("feature file: payload size does not match header");
  Matrix m(rows, cols);
  for (auto &v : m.data()) v = tag == 1 ? static_cast<double>(r.F32()) : r.F64();
  return m;
}

void WriteFeatureFile(const FeatureMatrix &matrix, const std::filesystem::path &path,
                      FeatureDtype dtype) {
  WriteFileBytes(path, EncodeFeatureFile(matrix.data, dtype));
}

FeatureMatrix ReadFeatureFile(const std::filesystem::path &path) {
  std::vector<std::uint8_t> bytes = ReadFileBytes(path);
  FeatureMatrix m;
  try {
    m.data = DecodeFeatureFile(bytes);
  } catch (const Error &e) {
    Fail(path.string(), ": ", e.what());
  }
  m.kind = FeatureKind::kUnspecified;
  m.band = {BandName::kCustom, 0, static_cast<int>(m.data.rows())};
  m.trial_id = path.stem().string();
  return m;
}

}  // namespace subspoof
