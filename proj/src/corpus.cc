// prosody/corpus.cc

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

#include "prosody/corpus.h"

#include <algorithm>
#include <mutex>
#include <set>
#include <sstream>

#include "json.hpp"
#include "prosody/errors.h"
#include "prosody/parallel.h"

namespace prosody {

namespace {

using json = nlohmann::json;

constexpr double kCoverageToleranceS = 0.010;

void CheckId(const std::string &id, const char *what) {
  if (id.empty()) throw ValidationError(std::string("empty ") + what);
  if (id == "." || id == ".." ||
      id.find_first_of("/\\") != std::string::npos ||
      id.find('\0') != std::string::npos)
    throw ValidationError(std::string(what) + " \"" + id +
                          "\" may not contain path separators");
}

const json &Member(const json &obj, const char *key, const std::string &where) {
  auto it = obj.find(key);
  if (it == obj.end())
    throw ParseError(where + ": missing \"" + key + "\"");
  return *it;
}

std::string StringMember(const json &obj, const char *key,
                         const std::string &where) {
  const json &v = Member(obj, key, where);
  if (!v.is_string())
    throw ParseError(where + ": \"" + key + "\" must be a string");
  return v.get<std::string>();
}

std::string JoinTokens(const std::vector<std::string> &tokens) {
  std::string out;
  for (std::size_t i = 0; i < tokens.size(); ++i) {
    if (i) out += ' ';
    out += tokens[i];
  }
  return out;
}

}  // namespace

std::string_view SpeakerKindName(SpeakerKind kind) {
  return kind == SpeakerKind::kHuman ? "human" : "synthetic";
}

const UtteranceEntry *SpeakerEntry::Find(std::string_view sentence_id) const {
  for (const UtteranceEntry &u : utterances)
    if (u.sentence_id == sentence_id) return &u;
  return nullptr;
}

const SpeakerEntry *CorpusManifest::FindSpeaker(std::string_view speaker_id) const {
  for (const SpeakerEntry &s : speakers)
    if (s.speaker_id == speaker_id) return &s;
  return nullptr;
}

std::vector<std::string> CorpusManifest::SpeakerIds(SpeakerKind kind) const {
  std::vector<std::string> ids;
  for (const SpeakerEntry &s : speakers)
    if (s.kind == kind) ids.push_back(s.speaker_id);
  return ids;
}

std::vector<std::string> CorpusManifest::SentenceIds() const {
  std::set<std::string> ids;
  for (const SpeakerEntry &s : speakers)
    for (const UtteranceEntry &u : s.utterances) ids.insert(u.sentence_id);
  return {ids.begin(), ids.end()};
}

CorpusManifest ParseManifest(std::string_view bytes,
                             const std::filesystem::path &base_dir) {
  json doc;
  try {
    doc = json::parse(bytes);
  } catch (const json::parse_error &e) {
    std::size_t offset = e.byte > 0 ? e.byte - 1 : 0;
    std::size_t line = 1, column = 1;
    for (std::size_t i = 0; i < offset && i < bytes.size(); ++i) {
      if (bytes[i] == '\n') {
        ++line;
        column = 1;
      } else {
        ++column;
      }
    }
    throw ParseError("malformed manifest JSON", line, column);
  }
  if (!doc.is_object()) throw ParseError("manifest must be a JSON object");

  CorpusManifest manifest;
  if (auto it = doc.find("silence_tokens"); it != doc.end()) {
    if (!it->is_array()) throw ParseError("\"silence_tokens\" must be an array");
    manifest.alignment.silence_tokens.clear();
    for (const json &t : *it) {
      if (!t.is_string()) throw ParseError("silence tokens must be strings");
      manifest.alignment.silence_tokens.push_back(t.get<std::string>());
    }
  }
  if (auto it = doc.find("min_silence_ms"); it != doc.end()) {
    if (!it->is_number() || it->get<double>() < 0)
      throw ParseError("\"min_silence_ms\" must be a non-negative number");
    manifest.alignment.min_silence_ms = it->get<double>();
  }

  const json &speakers = Member(doc, "speakers", "manifest");
  if (!speakers.is_array()) throw ParseError("\"speakers\" must be an array");

  auto resolve = [&](const std::string &p) {
    std::filesystem::path path(p);
    return path.is_absolute() || base_dir.empty() ? path : base_dir / path;
  };

  std::set<std::string> seen_speakers;
  for (std::size_t si = 0; si < speakers.size(); ++si) {
    const json &sp = speakers[si];
    std::string where = "speakers[" + std::to_string(si) + "]";
    if (!sp.is_object()) throw ParseError(where + " must be an object");
    SpeakerEntry entry;
    entry.speaker_id = StringMember(sp, "id", where);
    CheckId(entry.speaker_id, "speaker id");
    std::string kind = StringMember(sp, "kind", where);
    if (kind == "human") {
      entry.kind = SpeakerKind::kHuman;
    } else if (kind == "synthetic") {
      entry.kind = SpeakerKind::kSynthetic;
    } else {
      throw ParseError(where + ": kind must be \"human\" or \"synthetic\"");
    }
    if (!seen_speakers.insert(entry.speaker_id).second)
      throw ValidationError("duplicate speaker id \"" + entry.speaker_id + "\"");

    const json &utts = Member(sp, "utterances", where);
    if (!utts.is_array()) throw ParseError(where + ": \"utterances\" must be an array");
    std::set<std::string> seen_sentences;
    for (std::size_t ui = 0; ui < utts.size(); ++ui) {
      const json &u = utts[ui];
      std::string uwhere = where + ".utterances[" + std::to_string(ui) + "]";
      if (!u.is_object()) throw ParseError(uwhere + " must be an object");
      UtteranceEntry ue;
      ue.sentence_id = StringMember(u, "sentence", uwhere);
      CheckId(ue.sentence_id, "sentence id");
      ue.audio_path = resolve(StringMember(u, "audio", uwhere));
      ue.alignment_path = resolve(StringMember(u, "alignment", uwhere));
      if (!seen_sentences.insert(ue.sentence_id).second)
        throw ValidationError("duplicate utterance (" + entry.speaker_id +
                              ", " + ue.sentence_id + ")");
      entry.utterances.push_back(std::move(ue));
    }
    manifest.speakers.push_back(std::move(entry));
  }

  // Candidates are scored against the spread of human renditions, which
  // needs at least two of them per sentence.
  std::map<std::string, int> human_count;
  for (const SpeakerEntry &s : manifest.speakers)
    if (s.kind == SpeakerKind::kHuman)
      for (const UtteranceEntry &u : s.utterances) ++human_count[u.sentence_id];
  for (const SpeakerEntry &s : manifest.speakers) {
    if (s.kind != SpeakerKind::kSynthetic) continue;
    for (const UtteranceEntry &u : s.utterances) {
      int n = human_count[u.sentence_id];
      if (n < 2)
        throw ValidationError("sentence \"" + u.sentence_id + "\" of speaker \"" +
                              s.speaker_id + "\" has " + std::to_string(n) +
                              " human reference(s); at least 2 required");
    }
  }
  return manifest;
}

CorpusManifest LoadManifest(const std::filesystem::path &path) {
  std::string bytes = ReadFileBytes(path);
  try {
    return ParseManifest(bytes, path.parent_path());
  } catch (const ParseError &e) {
    throw ParseError(path.string() + ": " + e.what());
  } catch (const ValidationError &e) {
    throw ValidationError(path.string() + ": " + e.what());
  }
}

const AlignedUtterance *Corpus::Find(std::string_view speaker_id,
                                     std::string_view sentence_id) const {
  auto it = utterances.find(
      UtteranceKey{std::string(speaker_id), std::string(sentence_id)});
  return it == utterances.end() ? nullptr : &it->second;
}

Corpus LoadCorpus(const CorpusManifest &manifest, int jobs) {
  struct Job {
    const SpeakerEntry *speaker;
    const UtteranceEntry *utt;
  };
  std::vector<Job> work;
  for (const SpeakerEntry &s : manifest.speakers)
    for (const UtteranceEntry &u : s.utterances) work.push_back({&s, &u});

  std::vector<std::optional<AlignedUtterance>> parsed(work.size());
  std::vector<std::string> errors(work.size());
  ParallelFor(work.size(), jobs, [&](std::size_t i) {
    const Job &job = work[i];
    try {
      std::string bytes = ReadFileBytes(job.utt->alignment_path);
      AlignedUtterance utt =
          ParseAlignment(bytes, AlignmentFormatForPath(job.utt->alignment_path),
                         manifest.alignment);
      utt.speaker_id = job.speaker->speaker_id;
      utt.sentence_id = job.utt->sentence_id;
      utt.audio_path = job.utt->audio_path;
      parsed[i] = std::move(utt);
    } catch (const std::exception &e) {
      errors[i] = job.utt->alignment_path.string() + ": " + e.what();
    }
  });

  Corpus corpus;
  corpus.manifest = manifest;
  for (std::size_t i = 0; i < work.size(); ++i) {
    if (parsed[i]) {
      UtteranceKey key{work[i].speaker->speaker_id, work[i].utt->sentence_id};
      corpus.utterances.emplace(std::move(key), std::move(*parsed[i]));
    } else {
      corpus.issues.push_back({work[i].speaker->speaker_id,
                               work[i].utt->sentence_id, errors[i]});
    }
  }

  std::map<std::string, std::vector<std::pair<std::string, std::vector<std::string>>>>
      by_sentence;
  for (const auto &[key, utt] : corpus.utterances) {
    std::vector<std::string> tokens;
    for (const WordInterval &w : utt.words) tokens.push_back(w.token);
    by_sentence[key.sentence_id].emplace_back(key.speaker_id, std::move(tokens));
  }
  for (const auto &[sentence, seqs] : by_sentence) CheckSameTokens(sentence, seqs);
  return corpus;
}

void CheckSameTokens(
    std::string_view sentence_id,
    const std::vector<std::pair<std::string, std::vector<std::string>>> &seqs) {
  if (seqs.size() < 2) return;
  const auto &[ref_speaker, ref_tokens] = seqs.front();
  std::vector<std::string> ref_norm;
  for (const std::string &t : ref_tokens) ref_norm.push_back(NormalizeToken(t));
  for (std::size_t k = 1; k < seqs.size(); ++k) {
    const auto &[speaker, tokens] = seqs[k];
    std::size_t n = std::min(tokens.size(), ref_norm.size());
    std::size_t first_diff = n;
    for (std::size_t i = 0; i < n; ++i) {
      if (NormalizeToken(tokens[i]) != ref_norm[i]) {
        first_diff = i;
        break;
      }
    }
    if (first_diff == n && tokens.size() == ref_norm.size()) continue;
    std::ostringstream msg;
    msg << "sentence \"" << sentence_id << "\": word sequences differ at word "
        << first_diff + 1 << "\n  " << ref_speaker << " (" << ref_tokens.size()
        << " words): " << JoinTokens(ref_tokens) << "\n  " << speaker << " ("
        << tokens.size() << " words): " << JoinTokens(tokens);
    throw ValidationError(msg.str());
  }
}

void CheckAudioCovers(const AlignedUtterance &utt, const AudioBuffer &audio) {
  double duration = audio.DurationSeconds();
  double last_end = 0.0, total = 0.0;
  for (const WordInterval &w : utt.words) {
    last_end = std::max(last_end, w.end_s);
    total += w.Duration();
  }
  for (const Interval &s : utt.silences) {
    last_end = std::max(last_end, s.end_s);
    total += s.Duration();
  }
  if (last_end > duration + kCoverageToleranceS ||
      total > duration + kCoverageToleranceS) {
    std::ostringstream msg;
    msg << "alignment of (" << utt.speaker_id << ", " << utt.sentence_id
        << ") extends to " << last_end << " s but audio lasts " << duration
        << " s";
    throw ValidationError(msg.str());
  }
}

}  // namespace prosody
