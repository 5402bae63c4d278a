// prosody/alignment.h

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

#ifndef PROSODY_ALIGNMENT_H_
#define PROSODY_ALIGNMENT_H_

#include <filesystem>
#include <string>
#include <string_view>
#include <vector>

namespace prosody {

struct Interval {
  double start_s = 0.0;
  double end_s = 0.0;

  double Duration() const { return end_s - start_s; }
  bool operator==(const Interval &) const = default;
};

struct WordInterval {
  std::string token;
  double start_s = 0.0;
  double end_s = 0.0;

  double Duration() const { return end_s - start_s; }
  bool operator==(const WordInterval &) const = default;
};

// One speaker's rendition of one sentence, as produced by a forced aligner.
// Words and silences are each time-ordered and jointly non-overlapping.
struct AlignedUtterance {
  std::string speaker_id;
  std::string sentence_id;
  std::vector<WordInterval> words;
  std::vector<Interval> silences;
  std::filesystem::path audio_path;  // resolved lazily by the caller

  bool operator==(const AlignedUtterance &) const = default;
};

enum class AlignmentFormat { kTextGrid, kJson };

// "textgrid" or "json" (case-insensitive). Throws ValidationError otherwise.
AlignmentFormat ParseAlignmentFormat(std::string_view name);

// Guesses from the file extension: .json is JSON, anything else TextGrid.
AlignmentFormat AlignmentFormatForPath(const std::filesystem::path &path);

struct AlignmentOptions {
  // Interval labels routed to silences (compared trimmed, case-insensitive).
  std::vector<std::string> silence_tokens = {"[SIL]", "sil", "sp", ""};
  // Silences shorter than this are dropped.
  double min_silence_ms = 0.0;
};

bool IsSilenceToken(std::string_view label, const AlignmentOptions &opts);

// Parses a word tier. TextGrid input must be a Praat text TextGrid (long or
// short form) containing an interval tier named "words"; JSON input follows
// {"words":[{"t":token,"s":start,"e":end}, ...]}. Throws ParseError for
// syntax problems and ValidationError for overlapping intervals,
// zero-length words or an empty word tier. speaker/sentence ids and the
// audio path are left empty.
AlignedUtterance ParseAlignment(std::string_view bytes, AlignmentFormat format,
                                const AlignmentOptions &opts = {});

// Inverse of ParseAlignment: silences are written with silence_label, which
// must itself be a silence token under the options used to read it back.
std::string SerializeAlignment(const AlignedUtterance &utt,
                               AlignmentFormat format,
                               std::string_view silence_label = "[SIL]");

// Lower-cases ASCII letters and strips ASCII punctuation and whitespace, so
// tokens from aligners that normalize text differently compare equal.
std::string NormalizeToken(std::string_view token);

}  // namespace prosody

#endif  // PROSODY_ALIGNMENT_H_
