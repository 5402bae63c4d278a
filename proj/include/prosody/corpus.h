// prosody/corpus.h

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

#ifndef PROSODY_CORPUS_H_
#define PROSODY_CORPUS_H_

#include <compare>
#include <filesystem>
#include <map>
#include <string>
#include <string_view>
#include <utility>
#include <vector>

#include "prosody/alignment.h"
#include "prosody/audio.h"

namespace prosody {

enum class SpeakerKind { kHuman, kSynthetic };

std::string_view SpeakerKindName(SpeakerKind kind);

struct UtteranceEntry {
  std::string sentence_id;
  std::filesystem::path audio_path;
  std::filesystem::path alignment_path;
};

struct SpeakerEntry {
  std::string speaker_id;
  SpeakerKind kind = SpeakerKind::kHuman;
  std::vector<UtteranceEntry> utterances;

  const UtteranceEntry *Find(std::string_view sentence_id) const;
};

/*
  Corpus description, read from JSON:

    {
      "silence_tokens": ["[SIL]", "sil", "sp", ""],   (optional)
      "min_silence_ms": 0,                            (optional)
      "speakers": [
        {"id": "S1", "kind": "human",
         "utterances": [{"sentence": "s001",
                         "audio": "wav/S1_s001.wav",
                         "alignment": "align/S1_s001.TextGrid"}]}
      ]
    }

  Relative paths are resolved against the manifest's directory. Alignment
  format follows the file extension (.json or TextGrid).
*/
struct CorpusManifest {
  std::vector<SpeakerEntry> speakers;
  AlignmentOptions alignment;

  const SpeakerEntry *FindSpeaker(std::string_view speaker_id) const;
  std::vector<std::string> SpeakerIds(SpeakerKind kind) const;
  // Sorted, de-duplicated.
  std::vector<std::string> SentenceIds() const;
};

// Throws ParseError (with line/column) for malformed JSON or schema, and
// ValidationError for duplicate ids, or a synthetic speaker's sentence
// recorded by fewer than two human speakers.
CorpusManifest ParseManifest(std::string_view bytes,
                             const std::filesystem::path &base_dir = {});

CorpusManifest LoadManifest(const std::filesystem::path &path);

struct UtteranceKey {
  std::string speaker_id;
  std::string sentence_id;

  auto operator<=>(const UtteranceKey &) const = default;
};

struct LoadIssue {
  std::string speaker_id;
  std::string sentence_id;
  std::string message;
};

struct Corpus {
  CorpusManifest manifest;
  std::map<UtteranceKey, AlignedUtterance> utterances;
  std::vector<LoadIssue> issues;  // utterances that could not be loaded

  const AlignedUtterance *Find(std::string_view speaker_id,
                               std::string_view sentence_id) const;
};

// Parses every alignment in the manifest. Files that fail to read or parse
// are recorded in Corpus::issues and skipped. Throws ValidationError if the
// loaded speakers disagree on the word sequence of a sentence.
Corpus LoadCorpus(const CorpusManifest &manifest, int jobs = 1);

// Every entry is (speaker_id, tokens) for one sentence. Tokens compare after
// NormalizeToken. On mismatch throws ValidationError whose message shows both
// sequences and the first differing position.
void CheckSameTokens(
    std::string_view sentence_id,
    const std::vector<std::pair<std::string, std::vector<std::string>>> &seqs);

// Throws ValidationError unless the audio covers the last interval and the
// summed word and silence durations, each within 10 ms.
void CheckAudioCovers(const AlignedUtterance &utt, const AudioBuffer &audio);

}  // namespace prosody

#endif  // PROSODY_CORPUS_H_
