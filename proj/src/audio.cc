// src/audio.cc

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

#include "subspoof/audio.h"

#include <algorithm>
#include <bit>
#include <cmath>
#include <cstring>
#include <fstream>
#include <iterator>

#include "subspoof/common.h"

namespace subspoof {

namespace {

constexpr std::uint16_t kFormatPcm = 1;
constexpr std::uint16_t kFormatFloat = 3;
constexpr std::uint16_t kFormatExtensible = 0xFFFE;

std::uint16_t U16(const std::uint8_t *p) {
  return static_cast<std::uint16_t>(p[0] | (p[1] << 8));
}
std::uint32_t U32(const std::uint8_t *p) {
  return static_cast<std::uint32_t>(p[0]) | (static_cast<std::uint32_t>(p[1]) << 8) |
         (static_cast<std::uint32_t>(p[2]) << 16) |
         (static_cast<std::uint32_t>(p[3]) << 24);
}

void PutU16(std::vector<std::uint8_t> *out, std::uint16_t v) {
  out->push_back(v & 0xFF);
  out->push_back(v >> 8);
}
void PutU32(std::vector<std::uint8_t> *out, std::uint32_t v) {
  for (int i = 0; i < 4; ++i) out->push_back((v >> (8 * i)) & 0xFF);
}
void PutTag(std::vector<std::uint8_t> *out, const char *tag) {
  out->insert(out->end(), tag, tag + 4);
}

struct FmtChunk {
  std::uint16_t format = 0;
  std::uint16_t channels = 0;
  std::uint32_t sample_rate = 0;
  std::uint16_t bits = 0;
};

double DecodeSample(const std::uint8_t *p, const FmtChunk &fmt) {
  if (fmt.format == kFormatFloat) {
    float f;
    std::uint32_t bits = U32(p);
    std::memcpy(&f, &bits, sizeof f);
    return static_cast<double>(f);
  }
  switch (fmt.bits) {
    case 16:
      return static_cast<std::int16_t>(U16(p)) / 32768.0;
    case 24: {
      std::int32_t v = static_cast<std::int32_t>(p[0] | (p[1] << 8) | (p[2] << 16));
      if (v & 0x800000) v -= 0x1000000;
      return v / 8388608.0;
    }
    case 32:
      return static_cast<std::int32_t>(U32(p)) / 2147483648.0;
    default:
      Fail("unsupported encoding: ", fmt.bits, "-bit PCM");
  }
}

}  // namespace

bool FlacSupported() { return false; }

Waveform DecodeWavBytes(std::span<const std::uint8_t> bytes,
                        const std::string &source_id) {
  if (bytes.size() >= 4 && std::memcmp(bytes.data(), "fLaC", 4) == 0)
    Fail(source_id, ": FLAC decoding is not available in this build");
  if (bytes.size() < 12 || std::memcmp(bytes.data(), "RIFF", 4) != 0 ||
      std::memcmp(bytes.data() + 8, "WAVE", 4) != 0)
    Fail(source_id, ": unsupported encoding (not a RIFF/WAVE file)");

  FmtChunk fmt;
  bool have_fmt = false;
  const std::uint8_t *payload = nullptr;
  std::size_t payload_size = 0;
  std::size_t pos = 12;
  while (pos + 8 <= bytes.size()) {
    const std::uint8_t *chunk = bytes.data() + pos;
    std::size_t size = U32(chunk + 4);
    std::size_t body = pos + 8;
    std::size_t avail = bytes.size() - body;
    if (std::memcmp(chunk, "fmt ", 4) == 0) {
      if (size < 16 || size > avail) Fail(source_id, ": malformed fmt chunk");
      const std::uint8_t *f = bytes.data() + body;
      fmt.format = U16(f);
      fmt.channels = U16(f + 2);
      fmt.sample_rate = U32(f + 4);
      fmt.bits = U16(f + 14);
      if (fmt.format == kFormatExtensible) {
        if (size < 26) Fail(source_id, ": malformed extensible fmt chunk");
        // The first two bytes of the subformat GUID carry the format code.
        fmt.format = U16(f + 24);
      }
      have_fmt = true;
    } else if (std::memcmp(chunk, "data", 4) == 0) {
      payload = bytes.data() + body;
      // Streaming writers leave the size field as 0 or 0xFFFFFFFF.
      payload_size = (size == 0 || size > avail) ? avail : size;
      if (have_fmt) break;
    }
    pos = body + size + (size & 1);
  }
  if (!have_fmt) Fail(source_id, ": missing fmt chunk");
  if (payload == nullptr) Fail(source_id, ": missing data chunk");
  if (fmt.channels == 0) Fail(source_id, ": zero channels");
  if (fmt.sample_rate == 0) Fail(source_id, ": zero sample rate");
  bool pcm_ok = fmt.format == kFormatPcm &&
                (fmt.bits == 16 || fmt.bits == 24 || fmt.bits == 32);
  bool float_ok = fmt.format == kFormatFloat && fmt.bits == 32;
  if (!pcm_ok && !float_ok)
    Fail(source_id, ": unsupported encoding (format ", fmt.format, ", ", fmt.bits,
         " bits)");

  std::size_t bytes_per_sample = fmt.bits / 8;
  std::size_t frame_bytes = bytes_per_sample * fmt.channels;
  std::size_t frames = payload_size / frame_bytes;
  if (frames == 0) Fail(source_id, ": zero-length audio");

  Waveform w;
  w.sample_rate_hz = static_cast<int>(fmt.sample_rate);
  w.source_id = source_id;
  w.samples.resize(frames);
  for (std::size_t i = 0; i < frames; ++i) {
    const std::uint8_t *frame = payload + i * frame_bytes;
    double acc = 0.0;
    for (std::size_t c = 0; c < fmt.channels; ++c)
      acc += DecodeSample(frame + c * bytes_per_sample, fmt);
    w.samples[i] = acc / fmt.channels;
  }
  return w;
}

Waveform DecodeAudio(const std::filesystem::path &path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) Fail("cannot open audio file ", path.string());
  std::vector<std::uint8_t> bytes((std::istreambuf_iterator<char>(in)),
                                  std::istreambuf_iterator<char>());
  if (in.bad()) Fail("error reading audio file ", path.string());
  return DecodeWavBytes(bytes, path.stem().string());
}

void WriteWav(const std::filesystem::path &path,
              std::span<const double> interleaved, int sample_rate_hz,
              int channels, PcmEncoding encoding) {
  if (channels <= 0) Fail("WriteWav: channels must be positive");
  if (sample_rate_hz <= 0) Fail("WriteWav: sample rate must be positive");
  if (interleaved.size() % channels != 0)
    Fail("WriteWav: sample count not a multiple of channel count");

  std::uint16_t bits = 16;
  std::uint16_t format = kFormatPcm;
  switch (encoding) {
    case PcmEncoding::kInt16: bits = 16; break;
    case PcmEncoding::kInt24: bits = 24; break;
    case PcmEncoding::kInt32: bits = 32; break;
    case PcmEncoding::kFloat32: bits = 32; format = kFormatFloat; break;
  }
  std::uint32_t bytes_per_sample = bits / 8;
  std::uint32_t data_size =
      static_cast<std::uint32_t>(interleaved.size() * bytes_per_sample);

  std::vector<std::uint8_t> out;
  out.reserve(44 + data_size);
  PutTag(&out, "RIFF");
  PutU32(&out, 36 + data_size);
  PutTag(&out, "WAVE");
  PutTag(&out, "fmt ");
  PutU32(&out, 16);
  PutU16(&out, format);
  PutU16(&out, static_cast<std::uint16_t>(channels));
  PutU32(&out, static_cast<std::uint32_t>(sample_rate_hz));
  PutU32(&out, sample_rate_hz * channels * bytes_per_sample);
  PutU16(&out, static_cast<std::uint16_t>(channels * bytes_per_sample));
  PutU16(&out, bits);
  PutTag(&out, "data");
  PutU32(&out, data_size);

  auto quantize = [](double x, double scale, double lo, double hi) {
    return static_cast<std::int64_t>(std::clamp(std::round(x * scale), lo, hi));
  };
  for (double x : interleaved) {
    switch (encoding) {
      case PcmEncoding::kInt16:
        PutU16(&out, static_cast<std::uint16_t>(
                         quantize(x, 32768.0, -32768.0, 32767.0)));
        break;
      case PcmEncoding::kInt24: {
        auto v = static_cast<std::uint32_t>(
            quantize(x, 8388608.0, -8388608.0, 8388607.0));
        out.push_back(v & 0xFF);
        out.push_back((v >> 8) & 0xFF);
        out.push_back((v >> 16) & 0xFF);
        break;
      }
      case PcmEncoding::kInt32:
        PutU32(&out, static_cast<std::uint32_t>(
                         quantize(x, 2147483648.0, -2147483648.0, 2147483647.0)));
        break;
      case PcmEncoding::kFloat32:
        PutU32(&out, std::bit_cast<std::uint32_t>(static_cast<float>(x)));
        break;
    }
  }

  std::ofstream os(path, std::ios::binary);
  if (!os) Fail("cannot open ", path.string(), " for writing");
  os.write(reinterpret_cast<const char *>(out.data()),
           static_cast<std::streamsize>(out.size()));
  if (!os) Fail("error writing ", path.string());
}

}  // namespace subspoof
