// prosody/pipeline.h

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

#ifndef PROSODY_PIPELINE_H_
#define PROSODY_PIPELINE_H_

#include <array>
#include <cstddef>
#include <filesystem>
#include <map>
#include <optional>
#include <string>
#include <string_view>
#include <vector>

#include "prosody/binary_metrics.h"
#include "prosody/corpus.h"
#include "prosody/dsp.h"
#include "prosody/events.h"
#include "prosody/features.h"
#include "prosody/normalization.h"
#include "prosody/stats.h"

namespace prosody {

// How per-sentence results become one number per speaker and feature.
enum class Aggregation {
  kPerSentence,    // unweighted mean of sentence metrics
  kWeightByWords,  // sentence metrics weighted by word count
  kPooled,         // counts summed over all words, then one metric
};

std::string_view AggregationName(Aggregation a);
Aggregation ParseAggregation(std::string_view name);

struct EvalConfig {
  double threshold = kDefaultThreshold;  // c, in (0, 1]
  EventOptions events;
  // Continuous tier on z-normalized columns; false scores raw units.
  bool normalize = true;
  NormalizationOptions normalization;
  Aggregation aggregation = Aggregation::kPerSentence;
  std::vector<Feature> features{kAllFeatures.begin(), kAllFeatures.end()};
  int jobs = 1;

  void Validate() const;
};

// Word-level features of every loaded utterance, raw and normalized.
struct FeatureCorpus {
  CorpusManifest manifest;
  std::map<UtteranceKey, WordFeatureMatrix> raw;
  std::map<UtteranceKey, WordFeatureMatrix> normalized;
  std::vector<LoadIssue> issues;

  const WordFeatureMatrix *Raw(std::string_view speaker,
                               std::string_view sentence) const;
  const WordFeatureMatrix *Normalized(std::string_view speaker,
                                      std::string_view sentence) const;
};

// Reads each utterance's audio and extracts its features. Unreadable audio
// and audio that does not cover its alignment become issues.
FeatureCorpus ExtractFeatureCorpus(const Corpus &corpus, const AnalysisConfig &cfg,
                                   const NormalizationOptions &norm, int jobs = 1);

// Reads <dir>/<speaker>/<sentence>.csv as written by the extract command.
FeatureCorpus LoadFeatureCorpus(const CorpusManifest &manifest,
                                const std::filesystem::path &dir,
                                const NormalizationOptions &norm, int jobs = 1);

std::filesystem::path FeaturePath(const std::filesystem::path &dir,
                                  std::string_view speaker,
                                  std::string_view sentence);

struct SentenceScore {
  std::string sentence_id;
  std::size_t n_words = 0;
  BinaryScore binary;
  std::optional<double> error;
  std::size_t error_words = 0;  // words entering the error

  bool operator==(const SentenceScore &) const = default;
};

// One speaker's metrics for one feature.
struct TierReport {
  std::string speaker_id;
  Feature feature = Feature::kDuration;
  std::optional<double> zero_one_loss;
  std::optional<double> smoothed_loss;
  std::optional<double> precision;
  std::optional<double> recall;
  std::optional<double> f1;
  std::optional<double> normalized_error;
  std::size_t n_sentences = 0;     // sentences evaluated
  std::size_t n_words = 0;         // words in evaluated sentences
  std::size_t n_words_scored = 0;  // words entering the normalized error
  std::vector<std::string> skipped_sentences;
  std::vector<std::string> references;
  std::vector<SentenceScore> sentences;  // sorted by sentence id

  bool operator==(const TierReport &) const = default;
};

// Scores `candidate` against `references` on every sentence the candidate
// has in the manifest. Throws ValidationError when the candidate is unknown,
// is among its own references, or when a sentence has fewer than 2 reference
// speakers in the manifest (all such sentences are listed). Sentences whose
// candidate or reference files failed to load are skipped and listed in each
// report; if nothing is left to score, throws.
std::vector<TierReport> EvaluateCandidate(const FeatureCorpus &fc,
                                          std::string_view candidate,
                                          const std::vector<std::string> &references,
                                          const EvalConfig &cfg);

// References default to every human speaker.
std::vector<TierReport> EvaluateCandidate(const FeatureCorpus &fc,
                                          std::string_view candidate,
                                          const EvalConfig &cfg);

// Each human against all other humans. Needs at least 3 humans.
std::vector<TierReport> SelfValidate(const FeatureCorpus &fc, const EvalConfig &cfg);

enum class Metric { kZeroOneLoss, kSmoothedLoss, kPrecision, kRecall, kF1, kError };

inline constexpr std::array<Metric, 6> kAllMetrics = {
    Metric::kZeroOneLoss, Metric::kSmoothedLoss, Metric::kPrecision,
    Metric::kRecall,      Metric::kF1,           Metric::kError};

std::string_view MetricName(Metric m);
Metric ParseMetric(std::string_view name);
bool LowerIsBetter(Metric m);

std::optional<double> AggregateValue(const TierReport &r, Metric m);
std::optional<double> SentenceValue(const SentenceScore &s, Metric m);

inline constexpr std::string_view kTie = "tie";

struct GroupComparison {
  Feature feature = Feature::kDuration;
  Metric metric = Metric::kSmoothedLoss;
  std::string speaker_a;  // set for single-speaker comparisons
  std::string speaker_b;
  std::size_t n_a = 0, n_b = 0;
  std::optional<double> mean_a, mean_b;
  std::optional<WelchResult> test;  // null when the test is undefined
  std::string winner;               // a label, or "tie"
  std::string note;
};

// Welch test of per-sentence metric values, group a minus group b, for each
// feature both groups report. The winner has the better mean (lower for
// losses and error, higher for precision, recall and F1).
std::vector<GroupComparison> CompareGroups(const std::vector<TierReport> &a,
                                           const std::vector<TierReport> &b,
                                           Metric metric, std::string_view label_a,
                                           std::string_view label_b);

// Per feature, the best speaker of group a against the worst of group b by
// aggregate metric value.
std::vector<GroupComparison> CompareBestWorst(const std::vector<TierReport> &a,
                                              const std::vector<TierReport> &b,
                                              Metric metric, std::string_view label_a,
                                              std::string_view label_b);

}  // namespace prosody

#endif  // PROSODY_PIPELINE_H_
