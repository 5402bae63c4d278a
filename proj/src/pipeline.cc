// prosody/pipeline.cc

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

#include "prosody/pipeline.h"

#include <algorithm>
#include <cmath>
#include <set>

#include "prosody/continuous_metrics.h"
#include "prosody/errors.h"
#include "prosody/parallel.h"

namespace prosody {

namespace {

struct MatrixSlot {
  std::optional<WordFeatureMatrix> matrix;
  std::string error;
};

FeatureCorpus Assemble(const CorpusManifest &manifest,
                       const std::vector<UtteranceKey> &keys,
                       std::vector<MatrixSlot> &slots,
                       std::vector<LoadIssue> issues,
                       const NormalizationOptions &norm) {
  FeatureCorpus fc;
  fc.manifest = manifest;
  fc.issues = std::move(issues);
  for (std::size_t i = 0; i < keys.size(); ++i) {
    if (!slots[i].matrix) {
      fc.issues.push_back({keys[i].speaker_id, keys[i].sentence_id, slots[i].error});
      continue;
    }
    fc.normalized.emplace(keys[i], ZNormalize(*slots[i].matrix, norm));
    fc.raw.emplace(keys[i], std::move(*slots[i].matrix));
  }
  return fc;
}

const WordFeatureMatrix *Lookup(const std::map<UtteranceKey, WordFeatureMatrix> &m,
                                std::string_view speaker, std::string_view sentence) {
  auto it = m.find(UtteranceKey{std::string(speaker), std::string(sentence)});
  return it == m.end() ? nullptr : &it->second;
}

Signal ColumnSignal(const WordFeatureMatrix &m, Column c) {
  return Signal{m.Values(c), m.Valid(c)};
}

// Averages sentence values, optionally weighted; null when none is defined.
class MeanAccumulator {
 public:
  void Add(const std::optional<double> &v, double weight) {
    if (!v || !(weight > 0.0)) return;
    sum_ += *v * weight;
    weight_ += weight;
  }
  std::optional<double> Mean() const {
    if (!(weight_ > 0.0)) return std::nullopt;
    return sum_ / weight_;
  }

 private:
  double sum_ = 0.0;
  double weight_ = 0.0;
};

struct SentenceResult {
  bool evaluated = false;
  // Per feature, in cfg.features order.
  std::vector<SentenceScore> scores;
  std::vector<BinaryCounts> counts;
  std::vector<ErrorSum> errors;
};

}  // namespace

std::string_view AggregationName(Aggregation a) {
  switch (a) {
    case Aggregation::kPerSentence: return "per_sentence";
    case Aggregation::kWeightByWords: return "weight_by_words";
    case Aggregation::kPooled: return "pooled";
  }
  return "?";
}

Aggregation ParseAggregation(std::string_view name) {
  for (Aggregation a :
       {Aggregation::kPerSentence, Aggregation::kWeightByWords, Aggregation::kPooled})
    if (name == AggregationName(a)) return a;
  throw ValidationError("unknown aggregation \"" + std::string(name) + "\"");
}

void EvalConfig::Validate() const {
  if (!(threshold > 0.0 && threshold <= 1.0))
    throw ValidationError("threshold c must lie in (0, 1]");
  events.peaks.Validate();
  if (!std::isfinite(events.min_pause_ms) || events.min_pause_ms < 0.0)
    throw ValidationError("minimum pause must be a non-negative number of ms");
  if (features.empty()) throw ValidationError("no features selected");
  std::set<Feature> seen(features.begin(), features.end());
  if (seen.size() != features.size()) throw ValidationError("duplicate feature selected");
}

const WordFeatureMatrix *FeatureCorpus::Raw(std::string_view speaker,
                                            std::string_view sentence) const {
  return Lookup(raw, speaker, sentence);
}

const WordFeatureMatrix *FeatureCorpus::Normalized(std::string_view speaker,
                                                   std::string_view sentence) const {
  return Lookup(normalized, speaker, sentence);
}

FeatureCorpus ExtractFeatureCorpus(const Corpus &corpus, const AnalysisConfig &cfg,
                                   const NormalizationOptions &norm, int jobs) {
  cfg.Validate();
  std::vector<UtteranceKey> keys;
  for (const auto &[key, utt] : corpus.utterances) keys.push_back(key);
  std::vector<MatrixSlot> slots(keys.size());
  ParallelFor(keys.size(), jobs, [&](std::size_t i) {
    const AlignedUtterance &utt = corpus.utterances.at(keys[i]);
    try {
      AudioBuffer audio = ReadAudioFile(utt.audio_path);
      slots[i].matrix = ExtractWordFeatures(utt, audio, cfg);
      slots[i].matrix->speaker_id = keys[i].speaker_id;
      slots[i].matrix->sentence_id = keys[i].sentence_id;
    } catch (const std::exception &e) {
      slots[i].error = utt.audio_path.string() + ": " + e.what();
    }
  });
  return Assemble(corpus.manifest, keys, slots, corpus.issues, norm);
}

std::filesystem::path FeaturePath(const std::filesystem::path &dir,
                                  std::string_view speaker, std::string_view sentence) {
  return dir / std::string(speaker) / (std::string(sentence) + ".csv");
}

FeatureCorpus LoadFeatureCorpus(const CorpusManifest &manifest,
                                const std::filesystem::path &dir,
                                const NormalizationOptions &norm, int jobs) {
  std::vector<UtteranceKey> keys;
  for (const SpeakerEntry &s : manifest.speakers)
    for (const UtteranceEntry &u : s.utterances) keys.push_back({s.speaker_id, u.sentence_id});
  std::sort(keys.begin(), keys.end());
  std::vector<MatrixSlot> slots(keys.size());
  ParallelFor(keys.size(), jobs, [&](std::size_t i) {
    std::filesystem::path path = FeaturePath(dir, keys[i].speaker_id, keys[i].sentence_id);
    try {
      slots[i].matrix =
          ParseFeatureCsv(ReadFileBytes(path), keys[i].speaker_id, keys[i].sentence_id);
    } catch (const std::exception &e) {
      slots[i].error = path.string() + ": " + e.what();
    }
  });
  FeatureCorpus fc = Assemble(manifest, keys, slots, {}, norm);
  // Loaded speakers must agree on each sentence's words.
  std::map<std::string, std::vector<std::pair<std::string, std::vector<std::string>>>> seqs;
  for (const auto &[key, m] : fc.raw) seqs[key.sentence_id].emplace_back(key.speaker_id, m.tokens);
  for (const auto &[sentence, s] : seqs) CheckSameTokens(sentence, s);
  return fc;
}

std::vector<TierReport> EvaluateCandidate(const FeatureCorpus &fc,
                                          std::string_view candidate,
                                          const std::vector<std::string> &references,
                                          const EvalConfig &cfg) {
  cfg.Validate();
  const SpeakerEntry *cand = fc.manifest.FindSpeaker(candidate);
  if (!cand)
    throw ValidationError("candidate \"" + std::string(candidate) +
                          "\" is not in the manifest");
  std::set<std::string> ref_set;
  for (const std::string &r : references) {
    if (r == candidate)
      throw ValidationError("candidate \"" + r + "\" is among its own references");
    if (!fc.manifest.FindSpeaker(r))
      throw ValidationError("reference \"" + r + "\" is not in the manifest");
    if (!ref_set.insert(r).second)
      throw ValidationError("reference \"" + r + "\" listed twice");
  }

  std::vector<std::string> sentences;
  for (const UtteranceEntry &u : cand->utterances) sentences.push_back(u.sentence_id);
  std::sort(sentences.begin(), sentences.end());

  // Reference speakers per sentence, in manifest terms.
  std::vector<std::vector<std::string>> refs_for(sentences.size());
  std::vector<std::string> short_of_refs;
  for (std::size_t s = 0; s < sentences.size(); ++s) {
    for (const std::string &r : ref_set)
      if (fc.manifest.FindSpeaker(r)->Find(sentences[s])) refs_for[s].push_back(r);
    if (refs_for[s].size() < 2) short_of_refs.push_back(sentences[s]);
  }
  if (!short_of_refs.empty()) {
    std::string list;
    for (const auto &s : short_of_refs) list += (list.empty() ? "" : ", ") + s;
    throw ValidationError("fewer than 2 reference speakers for sentence(s): " + list);
  }

  const std::size_t nf = cfg.features.size();
  std::vector<SentenceResult> results(sentences.size());
  ParallelFor(sentences.size(), cfg.jobs, [&](std::size_t s) {
    const std::string &sentence = sentences[s];
    const WordFeatureMatrix *c_raw = fc.Raw(candidate, sentence);
    if (!c_raw) return;
    std::vector<const WordFeatureMatrix *> r_raw;
    std::vector<std::pair<std::string, std::vector<std::string>>> seqs{
        {std::string(candidate), c_raw->tokens}};
    for (const std::string &r : refs_for[s])
      if (const WordFeatureMatrix *m = fc.Raw(r, sentence)) {
        r_raw.push_back(m);
        seqs.emplace_back(r, m->tokens);
      }
    if (r_raw.size() < 2) return;
    CheckSameTokens(sentence, seqs);

    SentenceResult &out = results[s];
    out.evaluated = true;
    const WordFeatureMatrix *c_norm = fc.Normalized(candidate, sentence);
    for (Feature f : cfg.features) {
      const Column col = FeatureColumn(f);
      Bits c_bits = FeatureEvents(*c_raw, f, cfg.events).bits;
      std::vector<Bits> r_bits;
      std::vector<Signal> r_sig;
      for (const WordFeatureMatrix *m : r_raw) {
        r_bits.push_back(FeatureEvents(*m, f, cfg.events).bits);
        const WordFeatureMatrix &src =
            cfg.normalize ? *fc.Normalized(m->speaker_id, sentence) : *m;
        r_sig.push_back(ColumnSignal(src, col));
      }
      BinaryCounts counts = CountBinary(c_bits, r_bits, cfg.threshold);
      ReferenceDistribution ref =
          BuildReference(r_sig, cfg.normalization.sample_std);
      ErrorSum err = AccumulateError(ColumnSignal(cfg.normalize ? *c_norm : *c_raw, col), ref);
      SentenceScore score;
      score.sentence_id = sentence;
      score.n_words = c_raw->NumWords();
      score.binary = counts.ToScore();
      score.error = err.Mean();
      score.error_words = err.words;
      out.scores.push_back(std::move(score));
      out.counts.push_back(counts);
      out.errors.push_back(err);
    }
  });

  std::vector<std::string> skipped;
  for (std::size_t s = 0; s < sentences.size(); ++s)
    if (!results[s].evaluated) skipped.push_back(sentences[s]);
  if (skipped.size() == sentences.size())
    throw ValidationError("no sentence of \"" + std::string(candidate) +
                          "\" could be evaluated (candidate or reference files failed to load)");

  std::vector<TierReport> reports;
  for (std::size_t k = 0; k < nf; ++k) {
    TierReport r;
    r.speaker_id = std::string(candidate);
    r.feature = cfg.features[k];
    r.skipped_sentences = skipped;
    r.references.assign(ref_set.begin(), ref_set.end());
    BinaryCounts pooled;
    ErrorSum pooled_err;
    MeanAccumulator zol, sml, prec, rec, f1, err;
    for (const SentenceResult &res : results) {
      if (!res.evaluated) continue;
      const SentenceScore &sc = res.scores[k];
      r.sentences.push_back(sc);
      ++r.n_sentences;
      r.n_words += sc.n_words;
      r.n_words_scored += sc.error_words;
      pooled += res.counts[k];
      pooled_err += res.errors[k];
      const bool by_words = cfg.aggregation == Aggregation::kWeightByWords;
      const double w = by_words ? static_cast<double>(sc.n_words) : 1.0;
      const double we = by_words ? static_cast<double>(sc.error_words) : 1.0;
      zol.Add(sc.binary.zero_one_loss, w);
      sml.Add(sc.binary.smoothed_loss, w);
      prec.Add(sc.binary.precision, w);
      rec.Add(sc.binary.recall, w);
      f1.Add(sc.binary.f1, w);
      err.Add(sc.error, we);
    }
    if (cfg.aggregation == Aggregation::kPooled) {
      BinaryScore b = pooled.ToScore();
      r.zero_one_loss = b.zero_one_loss;
      r.smoothed_loss = b.smoothed_loss;
      r.precision = b.precision;
      r.recall = b.recall;
      r.f1 = b.f1;
      r.normalized_error = pooled_err.Mean();
    } else {
      r.zero_one_loss = zol.Mean();
      r.smoothed_loss = sml.Mean();
      r.precision = prec.Mean();
      r.recall = rec.Mean();
      r.f1 = f1.Mean();
      r.normalized_error = err.Mean();
    }
    reports.push_back(std::move(r));
  }
  return reports;
}

std::vector<TierReport> EvaluateCandidate(const FeatureCorpus &fc,
                                          std::string_view candidate,
                                          const EvalConfig &cfg) {
  std::vector<std::string> refs;
  for (const std::string &h : fc.manifest.SpeakerIds(SpeakerKind::kHuman))
    if (h != candidate) refs.push_back(h);
  return EvaluateCandidate(fc, candidate, refs, cfg);
}

std::vector<TierReport> SelfValidate(const FeatureCorpus &fc, const EvalConfig &cfg) {
  std::vector<std::string> humans = fc.manifest.SpeakerIds(SpeakerKind::kHuman);
  if (humans.size() < 3)
    throw ValidationError("self-validation needs at least 3 human speakers, found " +
                          std::to_string(humans.size()));
  std::vector<TierReport> out;
  for (const std::string &h : humans) {
    std::vector<std::string> others;
    for (const std::string &o : humans)
      if (o != h) others.push_back(o);
    for (TierReport &r : EvaluateCandidate(fc, h, others, cfg)) out.push_back(std::move(r));
  }
  return out;
}

std::string_view MetricName(Metric m) {
  switch (m) {
    case Metric::kZeroOneLoss: return "zero_one_loss";
    case Metric::kSmoothedLoss: return "smoothed_loss";
    case Metric::kPrecision: return "precision";
    case Metric::kRecall: return "recall";
    case Metric::kF1: return "f1";
    case Metric::kError: return "error";
  }
  return "?";
}

Metric ParseMetric(std::string_view name) {
  for (Metric m : kAllMetrics)
    if (name == MetricName(m)) return m;
  throw ValidationError("unknown metric \"" + std::string(name) + "\"");
}

bool LowerIsBetter(Metric m) {
  return m == Metric::kZeroOneLoss || m == Metric::kSmoothedLoss || m == Metric::kError;
}

std::optional<double> AggregateValue(const TierReport &r, Metric m) {
  switch (m) {
    case Metric::kZeroOneLoss: return r.zero_one_loss;
    case Metric::kSmoothedLoss: return r.smoothed_loss;
    case Metric::kPrecision: return r.precision;
    case Metric::kRecall: return r.recall;
    case Metric::kF1: return r.f1;
    case Metric::kError: return r.normalized_error;
  }
  return std::nullopt;
}

std::optional<double> SentenceValue(const SentenceScore &s, Metric m) {
  switch (m) {
    case Metric::kZeroOneLoss: return s.binary.zero_one_loss;
    case Metric::kSmoothedLoss: return s.binary.smoothed_loss;
    case Metric::kPrecision: return s.binary.precision;
    case Metric::kRecall: return s.binary.recall;
    case Metric::kF1: return s.binary.f1;
    case Metric::kError: return s.error;
  }
  return std::nullopt;
}

namespace {

std::vector<double> PooledValues(const std::vector<const TierReport *> &reports,
                                 Metric m) {
  std::vector<double> v;
  for (const TierReport *r : reports)
    for (const SentenceScore &s : r->sentences)
      if (auto x = SentenceValue(s, m)) v.push_back(*x);
  return v;
}

std::optional<double> MeanOf(const std::vector<double> &v) {
  if (v.empty()) return std::nullopt;
  double s = 0.0;
  for (double x : v) s += x;
  return s / static_cast<double>(v.size());
}

GroupComparison Compare(Feature f, Metric m, const std::vector<const TierReport *> &a,
                        const std::vector<const TierReport *> &b,
                        std::string_view label_a, std::string_view label_b) {
  GroupComparison g;
  g.feature = f;
  g.metric = m;
  std::vector<double> va = PooledValues(a, m), vb = PooledValues(b, m);
  g.n_a = va.size();
  g.n_b = vb.size();
  g.mean_a = MeanOf(va);
  g.mean_b = MeanOf(vb);
  try {
    g.test = WelchTTest(va, vb);
  } catch (const ValidationError &e) {
    g.note = e.what();
  }
  if (!g.mean_a || !g.mean_b || *g.mean_a == *g.mean_b) {
    g.winner = kTie;
  } else {
    bool a_lower = *g.mean_a < *g.mean_b;
    g.winner = std::string(a_lower == LowerIsBetter(m) ? label_a : label_b);
  }
  return g;
}

std::vector<Feature> SharedFeatures(const std::vector<TierReport> &a,
                                    const std::vector<TierReport> &b) {
  std::set<Feature> in_b;
  for (const TierReport &r : b) in_b.insert(r.feature);
  std::set<Feature> shared;
  for (const TierReport &r : a)
    if (in_b.count(r.feature)) shared.insert(r.feature);
  return {shared.begin(), shared.end()};
}

std::vector<const TierReport *> OfFeature(const std::vector<TierReport> &rs, Feature f) {
  std::vector<const TierReport *> out;
  for (const TierReport &r : rs)
    if (r.feature == f) out.push_back(&r);
  return out;
}

// Best (or worst) report by aggregate value; reports without a value rank
// last either way. Ties go to the smaller speaker id.
const TierReport *Extreme(const std::vector<const TierReport *> &rs, Metric m, bool best) {
  const TierReport *pick = nullptr;
  for (const TierReport *r : rs) {
    auto v = AggregateValue(*r, m);
    if (!v) continue;
    if (!pick) {
      pick = r;
      continue;
    }
    double cur = *AggregateValue(*pick, m);
    bool better = LowerIsBetter(m) ? *v < cur : *v > cur;
    bool worse = LowerIsBetter(m) ? *v > cur : *v < cur;
    if ((best && better) || (!best && worse) ||
        (*v == cur && r->speaker_id < pick->speaker_id))
      pick = r;
  }
  return pick;
}

}  // namespace

std::vector<GroupComparison> CompareGroups(const std::vector<TierReport> &a,
                                           const std::vector<TierReport> &b,
                                           Metric metric, std::string_view label_a,
                                           std::string_view label_b) {
  if (a.empty() || b.empty()) throw ValidationError("both groups need reports");
  std::vector<GroupComparison> out;
  for (Feature f : SharedFeatures(a, b))
    out.push_back(Compare(f, metric, OfFeature(a, f), OfFeature(b, f), label_a, label_b));
  return out;
}

std::vector<GroupComparison> CompareBestWorst(const std::vector<TierReport> &a,
                                              const std::vector<TierReport> &b,
                                              Metric metric, std::string_view label_a,
                                              std::string_view label_b) {
  if (a.empty() || b.empty()) throw ValidationError("both groups need reports");
  std::vector<GroupComparison> out;
  for (Feature f : SharedFeatures(a, b)) {
    const TierReport *best = Extreme(OfFeature(a, f), metric, true);
    const TierReport *worst = Extreme(OfFeature(b, f), metric, false);
    if (!best || !worst) {
      GroupComparison g;
      g.feature = f;
      g.metric = metric;
      g.winner = kTie;
      g.note = "no speaker has a defined value";
      out.push_back(std::move(g));
      continue;
    }
    GroupComparison g = Compare(f, metric, {best}, {worst}, label_a, label_b);
    g.speaker_a = best->speaker_id;
    g.speaker_b = worst->speaker_id;
    out.push_back(std::move(g));
  }
  return out;
}

}  // namespace prosody
