// prosody/tests/support/fixture.cc

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

#include "fixture.h"

#include <algorithm>
#include <cmath>
#include <numbers>

#include "json.hpp"
#include "prosody/alignment.h"
#include "prosody/audio.h"
#include "prosody/csv.h"
#include "synth.h"

namespace prosody::testing {

namespace {

namespace fs = std::filesystem;

const std::vector<std::vector<std::string>> kSentences = {
    {"anna", "dressed", "the", "baby", "before", "the", "long", "walk"},
    {"we", "never", "heard", "the", "bells", "ring", "that", "morning"},
    {"please", "bring", "the", "green", "lamp", "to", "my", "room"},
    {"the", "river", "was", "cold", "and", "very", "quiet", "today"},
};

// Standard-score contour of one sentence.
struct Contour {
  std::vector<std::string> words;
  std::vector<double> duration, f0, intensity, tilt, clarity;
  std::vector<double> pause_ms;
};

Contour MakeContour(int index, Rng &rng) {
  Contour c;
  c.words = kSentences[static_cast<std::size_t>(index) % kSentences.size()];
  const std::size_t n = c.words.size();
  // Two prominent words and a phrase break per sentence.
  std::size_t p1 = 1 + rng.Below(3), p2 = 5 + rng.Below(2), brk = 3 + rng.Below(2);
  for (std::size_t i = 0; i < n; ++i) {
    double prom = (i == p1 || i == p2) ? 2.2 : 0.0;
    c.duration.push_back(prom * 0.7 + 0.3 * rng.Normal());
    c.f0.push_back(prom + 0.3 * rng.Normal() - 0.08 * static_cast<double>(i));
    c.intensity.push_back(prom * 0.9 + 0.3 * rng.Normal());
    c.tilt.push_back(prom * 0.8 + 0.3 * rng.Normal());
    c.clarity.push_back(prom * 0.6 + 0.3 * rng.Normal());
    c.pause_ms.push_back(i == brk ? 180.0 : 0.0);
  }
  return c;
}

struct Voice {
  double f0_hz;
  double noise;  // word-level jitter of the contour
};

// Renders one speaker's take on a contour; returns audio and alignment.
std::pair<AudioBuffer, AlignedUtterance> Render(const Contour &c, const Voice &v,
                                                int sr, Rng &rng) {
  AudioBuffer audio;
  audio.sample_rate_hz = sr;
  AlignedUtterance utt;
  auto append_silence = [&](double seconds) {
    std::size_t start = audio.samples.size();
    audio.samples.resize(start + static_cast<std::size_t>(std::lround(seconds * sr)), 0.0);
    utt.silences.push_back({static_cast<double>(start) / sr,
                            static_cast<double>(audio.samples.size()) / sr});
  };
  append_silence(0.1);
  double phase = 0.0;
  for (std::size_t i = 0; i < c.words.size(); ++i) {
    auto jitter = [&](double z) { return z + v.noise * rng.Normal(); };
    double dur_s = std::clamp(0.22 * std::exp(0.2 * jitter(c.duration[i])), 0.08, 0.6);
    double f0 = v.f0_hz * std::pow(2.0, 0.12 * jitter(c.f0[i]));
    double amp = 0.2 * std::pow(10.0, 2.0 * jitter(c.intensity[i]) / 20.0);
    double beta = std::max(0.4, 1.4 - 0.25 * jitter(c.tilt[i]));
    double noise_mix = 0.03 * std::exp(-0.4 * jitter(c.clarity[i]));
    double pause = std::max(0.0, c.pause_ms[i] + 50.0 * v.noise * rng.Normal()) / 1000.0;

    const std::size_t start = audio.samples.size();
    const auto n = static_cast<std::size_t>(std::lround(dur_s * sr));
    const auto ramp = static_cast<std::size_t>(0.008 * sr);
    const int harmonics = std::max(1, static_cast<int>(std::min(4000.0, 0.45 * sr) / f0));
    double norm = 0.0;
    for (int k = 1; k <= harmonics; ++k) norm += std::pow(k, -2.0 * beta);
    norm = std::sqrt(2.0 / norm);
    for (std::size_t t = 0; t < n; ++t) {
      // Slight falling glide inside the word.
      double f = f0 * (1.0 - 0.03 * static_cast<double>(t) / static_cast<double>(n));
      phase += 2.0 * std::numbers::pi * f / sr;
      double s = 0.0;
      for (int k = 1; k <= harmonics; ++k) s += std::pow(k, -beta) * std::sin(k * phase);
      s = s * norm + noise_mix * rng.Normal();
      double gain = 1.0;
      if (t < ramp) gain = 0.5 - 0.5 * std::cos(std::numbers::pi * t / ramp);
      if (n - 1 - t < ramp) gain = 0.5 - 0.5 * std::cos(std::numbers::pi * (n - 1 - t) / ramp);
      audio.samples.push_back(std::clamp(amp * gain * s, -1.0, 1.0));
    }
    utt.words.push_back({c.words[i], static_cast<double>(start) / sr,
                         static_cast<double>(audio.samples.size()) / sr});
    if (pause > 0.005) append_silence(pause);
  }
  append_silence(0.15);
  return {std::move(audio), std::move(utt)};
}

std::string Id(const char *prefix, int i) {
  char buf[32];
  std::snprintf(buf, sizeof buf, "%s%03d", prefix, i + 1);
  return buf;
}

}  // namespace

FixturePaths WriteFixtureCorpus(const fs::path &dir, const FixtureOptions &opts) {
  Rng rng(opts.seed);
  std::vector<Contour> contours;
  for (int s = 0; s < opts.sentences; ++s) contours.push_back(MakeContour(s, rng));

  nlohmann::ordered_json speakers = nlohmann::ordered_json::array();
  auto add_speaker = [&](const std::string &id, bool human, const Voice &voice) {
    nlohmann::ordered_json utts = nlohmann::ordered_json::array();
    for (int s = 0; s < opts.sentences; ++s) {
      std::string sentence = Id("sent_", s);
      auto [audio, utt] = Render(contours[static_cast<std::size_t>(s)], voice,
                                 opts.sample_rate_hz, rng);
      std::string wav = "wav/" + id + "_" + sentence + ".wav";
      std::string align =
          "align/" + id + "_" + sentence + (human ? ".TextGrid" : ".json");
      WriteFileBytes(dir / wav, EncodeWav(audio));
      WriteFileBytes(dir / align,
                     SerializeAlignment(utt, human ? AlignmentFormat::kTextGrid
                                                   : AlignmentFormat::kJson));
      utts.push_back({{"sentence", sentence}, {"audio", wav}, {"alignment", align}});
    }
    speakers.push_back(
        {{"id", id}, {"kind", human ? "human" : "synthetic"}, {"utterances", utts}});
  };
  for (std::size_t h = 0; h < opts.humans.size(); ++h)
    add_speaker(opts.humans[h], true, {105.0 + 25.0 * static_cast<double>(h), opts.human_noise});
  for (std::size_t k = 0; k < opts.synthetic.size(); ++k)
    add_speaker(opts.synthetic[k], false,
                {140.0 + 20.0 * static_cast<double>(k),
                 k < opts.synthetic_noise.size() ? opts.synthetic_noise[k] : 1.0});

  FixturePaths paths{dir / "manifest.json", dir / "ratings.csv", dir / "pairs.csv"};
  WriteFileBytes(paths.manifest, nlohmann::ordered_json{{"speakers", speakers}}.dump(2) + "\n");

  // Listening-test data: humans rate higher and sound human more often;
  // synthetic quality falls with its contour noise.
  std::vector<std::string> all = opts.humans;
  all.insert(all.end(), opts.synthetic.begin(), opts.synthetic.end());
  auto quality = [&](std::size_t i) {
    if (i < opts.humans.size()) return 4.0;
    std::size_t k = i - opts.humans.size();
    double noise = k < opts.synthetic_noise.size() ? opts.synthetic_noise[k] : 1.0;
    return 3.8 - 1.5 * noise;
  };
  std::string ratings = "listener,speaker,sentence,mos,judged_human\n";
  for (int l = 0; l < opts.listeners; ++l)
    for (std::size_t i = 0; i < all.size(); ++i)
      for (int s = 0; s < opts.sentences; ++s) {
        double q = quality(i);
        int mos = static_cast<int>(std::clamp(std::lround(q + 0.8 * rng.Normal()), 1L, 5L));
        bool human = rng.Bit(std::clamp((q - 1.0) / 3.5, 0.02, 0.98));
        ratings += CsvLine({Id("L", l), all[i], Id("sent_", s), std::to_string(mos),
                            human ? "true" : "false"});
      }
  WriteFileBytes(paths.ratings, ratings);

  std::string pairs = "listener,sentence,speaker_a,speaker_b,winner\n";
  for (int l = 0; l < opts.listeners; ++l)
    for (std::size_t a = 0; a < opts.synthetic.size(); ++a)
      for (std::size_t b = a + 1; b < opts.synthetic.size(); ++b)
        for (int s = 0; s < opts.sentences; ++s) {
          double qa = quality(opts.humans.size() + a), qb = quality(opts.humans.size() + b);
          bool a_wins = rng.Bit(1.0 / (1.0 + std::exp(qb - qa)));
          pairs += CsvLine({Id("L", l), Id("sent_", s), opts.synthetic[a], opts.synthetic[b],
                            a_wins ? opts.synthetic[a] : opts.synthetic[b]});
        }
  WriteFileBytes(paths.pairs, pairs);
  return paths;
}

}  // namespace prosody::testing
