// prosody/tests/support/synth.h

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

#ifndef PROSODY_TESTS_SUPPORT_SYNTH_H_
#define PROSODY_TESTS_SUPPORT_SYNTH_H_

#include <algorithm>
#include <cmath>
#include <cstdint>
#include <numbers>
#include <random>
#include <vector>

#include "prosody/audio.h"

namespace prosody::testing {

// Portable generator: mt19937_64 is fully specified by the standard, while
// the standard distributions are not, so uniforms and normals are derived
// here by hand.
class Rng {
 public:
  explicit Rng(std::uint64_t seed) : engine_(seed) {}

  // Uniform in (0, 1).
  double Uniform() {
    return (static_cast<double>(engine_() >> 11) + 0.5) * 0x1.0p-53;
  }

  double Normal() {
    if (has_spare_) {
      has_spare_ = false;
      return spare_;
    }
    double r = std::sqrt(-2.0 * std::log(Uniform()));
    double theta = 2.0 * std::numbers::pi * Uniform();
    spare_ = r * std::sin(theta);
    has_spare_ = true;
    return r * std::cos(theta);
  }

  // Uniform integer in [0, n).
  std::uint64_t Below(std::uint64_t n) {
    return static_cast<std::uint64_t>(Uniform() * static_cast<double>(n));
  }

  bool Bit(double p_one = 0.5) { return Uniform() < p_one; }

 private:
  std::mt19937_64 engine_;
  bool has_spare_ = false;
  double spare_ = 0.0;
};

inline AudioBuffer Sine(double freq_hz, double amplitude, double seconds,
                        int sr = 16000, double phase = 0.0) {
  AudioBuffer a;
  a.sample_rate_hz = sr;
  auto n = static_cast<std::size_t>(std::lround(seconds * sr));
  a.samples.resize(n);
  for (std::size_t i = 0; i < n; ++i)
    a.samples[i] = amplitude * std::sin(2.0 * std::numbers::pi * freq_hz *
                                            static_cast<double>(i) / sr +
                                        phase);
  return a;
}

inline AudioBuffer Silence(double seconds, int sr = 16000) {
  AudioBuffer a;
  a.sample_rate_hz = sr;
  a.samples.assign(static_cast<std::size_t>(std::lround(seconds * sr)), 0.0);
  return a;
}

// Gaussian noise clipped to [-1, 1].
inline AudioBuffer WhiteNoise(double stddev, double seconds, std::uint64_t seed,
                              int sr = 16000) {
  Rng rng(seed);
  AudioBuffer a;
  a.sample_rate_hz = sr;
  a.samples.resize(static_cast<std::size_t>(std::lround(seconds * sr)));
  for (double &s : a.samples) s = std::clamp(stddev * rng.Normal(), -1.0, 1.0);
  return a;
}

// Unit impulses every sr/freq samples (rounded per pulse), scaled.
inline AudioBuffer PulseTrain(double freq_hz, double amplitude, double seconds,
                              int sr = 16000) {
  AudioBuffer a = Silence(seconds, sr);
  double period = sr / freq_hz;
  for (double t = 0.0; t < static_cast<double>(a.samples.size()); t += period)
    a.samples[static_cast<std::size_t>(t)] = amplitude;
  return a;
}

inline double Rms(const AudioBuffer &a) {
  double acc = 0.0;
  for (double s : a.samples) acc += s * s;
  return std::sqrt(acc / static_cast<double>(a.samples.size()));
}

inline void ScaleTo(AudioBuffer *a, double rms) {
  double g = rms / Rms(*a);
  for (double &s : a->samples) s *= g;
}

}  // namespace prosody::testing

#endif  // PROSODY_TESTS_SUPPORT_SYNTH_H_
