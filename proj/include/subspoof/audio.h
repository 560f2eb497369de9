// include/subspoof/audio.h

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

#ifndef SUBSPOOF_AUDIO_H_
#define SUBSPOOF_AUDIO_H_

#include <cstdint>
#include <filesystem>
#include <span>
#include <string>
#include <vector>

namespace subspoof {

/// Mono audio with samples in [-1, 1].
struct Waveform {
  std::vector<double> samples;
  int sample_rate_hz = 16000;
  std::string source_id;
};

/// Sample encodings understood by the WAV reader and writer.
enum class PcmEncoding { kInt16, kInt24, kInt32, kFloat32 };

/// True when the library was built with FLAC decoding.
bool FlacSupported();

/// Decodes a PCM WAV file (16/24/32-bit integer or 32-bit float, plain or
/// WAVE_FORMAT_EXTENSIBLE).  Multi-channel audio is averaged to mono.
/// FLAC files are accepted only when FlacSupported() is true.
/// source_id is set to the file stem.
Waveform DecodeAudio(const std::filesystem::path &path);

/// Decodes a WAV image held in memory.
Waveform DecodeWavBytes(std::span<const std::uint8_t> bytes,
                        const std::string &source_id);

/// Writes interleaved samples as a WAV file.  Integer encodings clip to
/// [-1, 1] and round to the nearest code.
void WriteWav(const std::filesystem::path &path,
              std::span<const double> interleaved, int sample_rate_hz,
              int channels = 1, PcmEncoding encoding = PcmEncoding::kInt16);

}  // namespace subspoof

#endif  // SUBSPOOF_AUDIO_H_
