// prosody/tests/support/fixture.h

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

#ifndef PROSODY_TESTS_SUPPORT_FIXTURE_H_
#define PROSODY_TESTS_SUPPORT_FIXTURE_H_

#include <cstdint>
#include <filesystem>
#include <string>
#include <vector>

namespace prosody::testing {

// A small corpus synthesized from per-sentence prosodic contours: every
// speaker realizes the same contour plus word-level Gaussian noise (in
// standard-score units), rendered as harmonic-plus-noise audio.
struct FixtureOptions {
  std::vector<std::string> humans = {"S1", "S2", "S3", "S4", "S5"};
  std::vector<std::string> synthetic = {"TTS_A", "TTS_B", "TTS_C"};
  // Noise per synthetic speaker; humans use human_noise.
  std::vector<double> synthetic_noise = {0.4, 0.8, 1.2};
  double human_noise = 0.2;
  int sentences = 3;
  int sample_rate_hz = 16000;
  std::uint64_t seed = 7;
  int listeners = 12;  // for ratings.csv and pairs.csv
};

struct FixturePaths {
  std::filesystem::path manifest;
  std::filesystem::path ratings;
  std::filesystem::path pairs;
};

// Writes manifest.json, wav/, align/ (TextGrid for humans, JSON for
// synthetic speakers), ratings.csv and pairs.csv under `dir`.
FixturePaths WriteFixtureCorpus(const std::filesystem::path &dir,
                                const FixtureOptions &opts = {});

}  // namespace prosody::testing

#endif  // PROSODY_TESTS_SUPPORT_FIXTURE_H_
