// prosody/audio.cc

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

#include "prosody/audio.h"

#include <algorithm>
#include <cmath>
#include <cstdint>
#include <cstring>
#include <fstream>
#include <iterator>
#include <sstream>

#include "prosody/errors.h"

namespace prosody {

namespace {

constexpr std::uint16_t kFormatPcm = 1;
constexpr std::uint16_t kFormatFloat = 3;
constexpr std::uint16_t kFormatExtensible = 0xFFFE;

std::uint16_t ReadU16(std::string_view b, std::size_t pos) {
  return static_cast<std::uint16_t>(static_cast<unsigned char>(b[pos]) |
                                    (static_cast<unsigned char>(b[pos + 1]) << 8));
}

std::uint32_t ReadU32(std::string_view b, std::size_t pos) {
  return static_cast<std::uint32_t>(ReadU16(b, pos)) |
         (static_cast<std::uint32_t>(ReadU16(b, pos + 2)) << 16);
}

void PutU16(std::string *out, std::uint16_t v) {
  out->push_back(static_cast<char>(v & 0xFF));
  out->push_back(static_cast<char>((v >> 8) & 0xFF));
}

void PutU32(std::string *out, std::uint32_t v) {
  PutU16(out, static_cast<std::uint16_t>(v & 0xFFFF));
  PutU16(out, static_cast<std::uint16_t>(v >> 16));
}

struct FmtChunk {
  std::uint16_t format = 0;
  std::uint16_t channels = 0;
  std::uint32_t sample_rate = 0;
  std::uint16_t bits_per_sample = 0;
  std::uint16_t block_align = 0;
};

}  // namespace

AudioBuffer ReadAudio(std::string_view bytes) {
  if (bytes.size() < 12 || bytes.substr(0, 4) != "RIFF" ||
      bytes.substr(8, 4) != "WAVE")
    throw ParseError("not a RIFF/WAVE file");

  FmtChunk fmt;
  bool have_fmt = false;
  std::string_view data;
  bool have_data = false;

  std::size_t pos = 12;
  while (pos + 8 <= bytes.size()) {
    std::string_view id = bytes.substr(pos, 4);
    std::uint32_t size = ReadU32(bytes, pos + 4);
    std::size_t body = pos + 8;
    if (size > bytes.size() - body) {
      throw ParseError("chunk '" + std::string(id) + "' runs past end of file");
    }
    if (id == "fmt ") {
      if (size < 16) throw ParseError("fmt chunk too short");
      fmt.format = ReadU16(bytes, body);
      fmt.channels = ReadU16(bytes, body + 2);
      fmt.sample_rate = ReadU32(bytes, body + 4);
      fmt.block_align = ReadU16(bytes, body + 12);
      fmt.bits_per_sample = ReadU16(bytes, body + 14);
      if (fmt.format == kFormatExtensible) {
        if (size < 40) throw ParseError("extensible fmt chunk too short");
        // First two bytes of the subformat GUID carry the real format tag.
        fmt.format = ReadU16(bytes, body + 24);
      }
      have_fmt = true;
    } else if (id == "data") {
      data = bytes.substr(body, size);
      have_data = true;
    }
    pos = body + size + (size & 1);
  }
  if (!have_fmt) throw ParseError("missing fmt chunk");
  if (!have_data) throw ParseError("missing data chunk");

  if (fmt.channels != 1)
    throw ValidationError("mono required (file has " +
                          std::to_string(fmt.channels) + " channels)");
  if (fmt.sample_rate < static_cast<std::uint32_t>(kMinSampleRateHz) ||
      fmt.sample_rate > 1000000)
    throw ValidationError("unsupported sample rate " +
                          std::to_string(fmt.sample_rate) + " Hz");

  AudioBuffer audio;
  audio.sample_rate_hz = static_cast<int>(fmt.sample_rate);
  if (fmt.format == kFormatPcm && fmt.bits_per_sample == 16) {
    std::size_t n = data.size() / 2;
    audio.samples.resize(n);
    for (std::size_t i = 0; i < n; ++i) {
      auto v = static_cast<std::int16_t>(ReadU16(data, 2 * i));
      audio.samples[i] = v / 32768.0;
    }
  } else if (fmt.format == kFormatFloat && fmt.bits_per_sample == 32) {
    std::size_t n = data.size() / 4;
    audio.samples.resize(n);
    for (std::size_t i = 0; i < n; ++i) {
      std::uint32_t bits = ReadU32(data, 4 * i);
      float f;
      std::memcpy(&f, &bits, sizeof f);
      if (!std::isfinite(f))
        throw ValidationError("non-finite float sample at index " +
                              std::to_string(i));
      audio.samples[i] = std::clamp(static_cast<double>(f), -1.0, 1.0);
    }
  } else {
    throw ValidationError(
        "unsupported encoding (format tag " + std::to_string(fmt.format) +
        ", " + std::to_string(fmt.bits_per_sample) +
        " bits); only PCM16 and float32 are accepted");
  }
  if (audio.samples.empty()) throw ValidationError("audio has no samples");
  return audio;
}

AudioBuffer ReadAudioFile(const std::filesystem::path &path) {
  try {
    return ReadAudio(ReadFileBytes(path));
  } catch (const ParseError &e) {
    throw ParseError(path.string() + ": " + e.what());
  } catch (const ValidationError &e) {
    throw ValidationError(path.string() + ": " + e.what());
  }
}

std::string EncodeWav(const AudioBuffer &audio, WavEncoding encoding) {
  const bool pcm = encoding == WavEncoding::kPcm16;
  const std::uint16_t bytes_per_sample = pcm ? 2 : 4;
  const auto data_size =
      static_cast<std::uint32_t>(audio.samples.size() * bytes_per_sample);
  std::string out;
  out.reserve(44 + data_size);
  out += "RIFF";
  PutU32(&out, 36 + data_size);
  out += "WAVEfmt ";
  PutU32(&out, 16);
  PutU16(&out, pcm ? kFormatPcm : kFormatFloat);
  PutU16(&out, 1);
  PutU32(&out, static_cast<std::uint32_t>(audio.sample_rate_hz));
  PutU32(&out, static_cast<std::uint32_t>(audio.sample_rate_hz) *
                   bytes_per_sample);
  PutU16(&out, bytes_per_sample);
  PutU16(&out, static_cast<std::uint16_t>(bytes_per_sample * 8));
  out += "data";
  PutU32(&out, data_size);
  for (double s : audio.samples) {
    if (pcm) {
      double v = std::round(s * 32768.0);
      v = std::clamp(v, -32768.0, 32767.0);
      PutU16(&out, static_cast<std::uint16_t>(static_cast<std::int16_t>(v)));
    } else {
      float f = static_cast<float>(s);
      std::uint32_t bits;
      std::memcpy(&bits, &f, sizeof bits);
      PutU32(&out, bits);
    }
  }
  return out;
}

std::string ReadFileBytes(const std::filesystem::path &path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw Error("cannot open " + path.string());
  std::ostringstream ss;
  ss << in.rdbuf();
  return ss.str();
}

void WriteFileBytes(const std::filesystem::path &path, std::string_view bytes) {
  if (path.has_parent_path())
    std::filesystem::create_directories(path.parent_path());
  std::ofstream out(path, std::ios::binary | std::ios::trunc);
  if (!out) throw Error("cannot write " + path.string());
  out.write(bytes.data(), static_cast<std::streamsize>(bytes.size()));
  if (!out) throw Error("write failed: " + path.string());
}

}  // namespace prosody
