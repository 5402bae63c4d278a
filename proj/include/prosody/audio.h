// prosody/audio.h

// Copyright 2026  The prosody-eval Authors
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

#ifndef PROSODY_AUDIO_H_
#define PROSODY_AUDIO_H_

#include <filesystem>
#include <string>
#include <string_view>
#include <vector>

namespace prosody {

// Mono PCM audio with samples in [-1, 1].
struct AudioBuffer {
  std::vector<double> samples;
  int sample_rate_hz = 0;

  double DurationSeconds() const {
    return sample_rate_hz > 0
               ? static_cast<double>(samples.size()) / sample_rate_hz
               : 0.0;
  }
};

inline constexpr int kMinSampleRateHz = 8000;

// Decodes a RIFF/WAVE file held in memory. Accepts 16-bit integer PCM and
// 32-bit IEEE float (plain or WAVE_FORMAT_EXTENSIBLE), mono only, sample
// rate >= 8 kHz. Integer samples are divided by 32768; float samples are
// clamped to [-1, 1]. Throws ParseError for malformed containers and
// ValidationError for well-formed but unsupported content (multichannel,
// compressed codecs, low sample rates).
AudioBuffer ReadAudio(std::string_view bytes);

AudioBuffer ReadAudioFile(const std::filesystem::path &path);

enum class WavEncoding { kPcm16, kFloat32 };

// Encodes mono audio as a canonical 44-byte-header WAV. PCM16 rounds to the
// nearest integer and saturates at [-32768, 32767].
std::string EncodeWav(const AudioBuffer &audio,
                      WavEncoding encoding = WavEncoding::kPcm16);

std::string ReadFileBytes(const std::filesystem::path &path);
void WriteFileBytes(const std::filesystem::path &path, std::string_view bytes);

}  // namespace prosody

#endif  // PROSODY_AUDIO_H_
