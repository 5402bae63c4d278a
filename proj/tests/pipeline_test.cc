// prosody/tests/pipeline_test.cc

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

#include <cmath>

#include "doctest.h"
#include "fixture.h"
#include "prosody/errors.h"
#include "prosody/pipeline.h"
#include "prosody/report_io.h"
#include "synth.h"
#include "tempdir.h"

using namespace prosody;
using prosody::testing::Rng;

namespace {

constexpr std::size_t kWords = 12;

// Builds an in-memory feature corpus. Every column of speaker k in sentence s
// is given by value(k, s, column, word).
template <typename F>
FeatureCorpus MakeCorpus(const std::vector<std::string> &humans,
                         const std::vector<std::string> &synthetic, int sentences,
                         F value) {
  FeatureCorpus fc;
  std::vector<std::string> all = humans;
  all.insert(all.end(), synthetic.begin(), synthetic.end());
  for (std::size_t k = 0; k < all.size(); ++k) {
    SpeakerEntry sp;
    sp.speaker_id = all[k];
    sp.kind = k < humans.size() ? SpeakerKind::kHuman : SpeakerKind::kSynthetic;
    for (int s = 0; s < sentences; ++s) {
      std::string sid = "sent_" + std::to_string(s);
      sp.utterances.push_back({sid, sid + ".wav", sid + ".json"});
      std::vector<std::string> tokens;
      for (std::size_t i = 0; i < kWords; ++i) tokens.push_back("w" + std::to_string(i));
      WordFeatureMatrix m = WordFeatureMatrix::Zeros(all[k], sid, tokens);
      for (std::size_t c = 0; c < kNumColumns; ++c)
        for (std::size_t i = 0; i < kWords; ++i)
          m.values[c][i] = value(k, s, c, i);
      fc.normalized.emplace(UtteranceKey{all[k], sid}, ZNormalize(m));
      fc.raw.emplace(UtteranceKey{all[k], sid}, std::move(m));
    }
    fc.manifest.speakers.push_back(std::move(sp));
  }
  return fc;
}

// Peaky base contour: prominent words at fixed positions.
double Base(int s, std::size_t c, std::size_t i) {
  const bool peak = (i + static_cast<std::size_t>(s) + c) % 4 == 1;
  return (peak ? 10.0 : 2.0) + 0.3 * std::sin(1.7 * static_cast<double>(i + c));
}

// Small deterministic noise for speaker k.
double Noise(std::size_t k, int s, std::size_t c, std::size_t i) {
  Rng rng(1000 * k + 100 * static_cast<std::size_t>(s) + 10 * c + i);
  return 0.2 * rng.Normal();
}

const std::vector<std::string> kHumans{"H1", "H2", "H3", "H4"};

}  // namespace

TEST_SUITE("evaluate") {
  TEST_CASE("the reference mean is an optimal candidate") {
    auto human = [](std::size_t k, int s, std::size_t c, std::size_t i) {
      return Base(s, c, i) + Noise(k, s, c, i);
    };
    FeatureCorpus fc = MakeCorpus(kHumans, {"OPT"}, 3,
                                  [&](std::size_t k, int s, std::size_t c, std::size_t i) {
                                    if (k < kHumans.size()) return human(k, s, c, i);
                                    double sum = 0.0;
                                    for (std::size_t j = 0; j < kHumans.size(); ++j)
                                      sum += human(j, s, c, i);
                                    return sum / static_cast<double>(kHumans.size());
                                  });
    EvalConfig cfg;
    cfg.normalize = false;
    for (const TierReport &r : EvaluateCandidate(fc, "OPT", cfg)) {
      CHECK(*r.zero_one_loss == 0.0);
      CHECK(*r.normalized_error <= 1e-20);
      CHECK(*r.f1 == 1.0);
      CHECK(r.n_sentences == 3);
      CHECK(r.references == kHumans);
    }
    cfg.normalize = true;
    for (const TierReport &r : EvaluateCandidate(fc, "OPT", cfg)) {
      CHECK(*r.zero_one_loss == 0.0);
      CHECK(*r.normalized_error < 0.05);
    }
  }
  TEST_CASE("a copy of one human scored against the others is well formed") {
    FeatureCorpus fc = MakeCorpus(kHumans, {"COPY"}, 2,
                                  [](std::size_t k, int s, std::size_t c, std::size_t i) {
                                    return Base(s, c, i) + Noise(k == 4 ? 0 : k, s, c, i);
                                  });
    auto reports = EvaluateCandidate(fc, "COPY", {"H2", "H3", "H4"}, {});
    REQUIRE(reports.size() == kNumFeatures);
    for (std::size_t f = 0; f < kNumFeatures; ++f) {
      const TierReport &r = reports[f];
      CHECK(r.feature == kAllFeatures[f]);
      CHECK(*r.zero_one_loss < 1.0);
      CHECK(std::isfinite(*r.normalized_error));
      CHECK(r.n_words_scored <= r.n_words);
      CHECK(r.n_words == 2 * kWords);
    }
  }
  TEST_CASE("reference set errors") {
    FeatureCorpus fc = MakeCorpus(kHumans, {"T"}, 2,
                                  [](std::size_t k, int s, std::size_t c, std::size_t i) {
                                    return Base(s, c, i) + Noise(k, s, c, i);
                                  });
    CHECK_THROWS_AS(EvaluateCandidate(fc, "H1", {"H1", "H2"}, {}), ValidationError);
    CHECK_THROWS_AS(EvaluateCandidate(fc, "T", {"H1"}, {}), ValidationError);
    CHECK_THROWS_AS(EvaluateCandidate(fc, "T", {"H1", "H1"}, {}), ValidationError);
    CHECK_THROWS_AS(EvaluateCandidate(fc, "T", {"H1", "NOPE"}, {}), ValidationError);
    CHECK_THROWS_AS(EvaluateCandidate(fc, "NOPE", {}), ValidationError);
  }
  TEST_CASE("sentences missing from the loaded candidate are skipped") {
    FeatureCorpus fc = MakeCorpus(kHumans, {"T"}, 3,
                                  [](std::size_t k, int s, std::size_t c, std::size_t i) {
                                    return Base(s, c, i) + Noise(k, s, c, i);
                                  });
    fc.raw.erase(UtteranceKey{"T", "sent_1"});
    fc.normalized.erase(UtteranceKey{"T", "sent_1"});
    auto reports = EvaluateCandidate(fc, "T", {});
    CHECK(reports[0].n_sentences == 2);
    CHECK(reports[0].skipped_sentences == std::vector<std::string>{"sent_1"});
  }
  TEST_CASE("aggregation modes agree on equal-length sentences") {
    FeatureCorpus fc = MakeCorpus(kHumans, {"T"}, 3,
                                  [](std::size_t k, int s, std::size_t c, std::size_t i) {
                                    return Base(s, c, i) + 3.0 * Noise(k, s, c, i);
                                  });
    EvalConfig per;
    EvalConfig by_words = per;
    by_words.aggregation = Aggregation::kWeightByWords;
    EvalConfig pooled = per;
    pooled.aggregation = Aggregation::kPooled;
    auto a = EvaluateCandidate(fc, "T", per), b = EvaluateCandidate(fc, "T", by_words),
         c = EvaluateCandidate(fc, "T", pooled);
    for (std::size_t f = 0; f < a.size(); ++f) {
      CHECK(*a[f].zero_one_loss == doctest::Approx(*b[f].zero_one_loss));
      CHECK(*a[f].zero_one_loss == doctest::Approx(*c[f].zero_one_loss));
      CHECK(*a[f].smoothed_loss == doctest::Approx(*c[f].smoothed_loss));
    }
  }
  TEST_CASE("results do not depend on the worker count") {
    FeatureCorpus fc = MakeCorpus(kHumans, {"T"}, 7,
                                  [](std::size_t k, int s, std::size_t c, std::size_t i) {
                                    return Base(s, c, i) + 2.0 * Noise(k, s, c, i);
                                  });
    EvalConfig one, many;
    many.jobs = 4;
    auto a = EvaluateCandidate(fc, "T", one);
    CHECK(a == EvaluateCandidate(fc, "T", many));
    CHECK(EmitReportDocument(one, a, {}) ==
          EmitReportDocument(one, EvaluateCandidate(fc, "T", one), {}));
  }
}

TEST_SUITE("self-validation") {
  TEST_CASE("needs three humans") {
    FeatureCorpus two = MakeCorpus({"H1", "H2"}, {}, 1,
                                   [](std::size_t k, int s, std::size_t c, std::size_t i) {
                                     return Base(s, c, i) + Noise(k, s, c, i);
                                   });
    CHECK_THROWS_AS(SelfValidate(two, {}), ValidationError);
  }
  TEST_CASE("each human is scored against the rest") {
    FeatureCorpus fc = MakeCorpus(kHumans, {"T"}, 2,
                                  [](std::size_t k, int s, std::size_t c, std::size_t i) {
                                    return Base(s, c, i) + Noise(k, s, c, i);
                                  });
    auto reports = SelfValidate(fc, {});
    CHECK(reports.size() == kHumans.size() * kNumFeatures);
    for (const TierReport &r : reports) {
      CHECK(r.references.size() == kHumans.size() - 1);
      CHECK(std::find(r.references.begin(), r.references.end(), r.speaker_id) ==
            r.references.end());
    }
  }
}

TEST_SUITE("group comparison") {
  TEST_CASE("identical groups tie with t = 0") {
    FeatureCorpus fc = MakeCorpus(kHumans, {"T", "U"}, 4,
                                  [](std::size_t k, int s, std::size_t c, std::size_t i) {
                                    return Base(s, c, i) + 3.0 * Noise(k >= 4 ? 0 : k, s, c, i);
                                  });
    auto a = EvaluateCandidate(fc, "T", {});
    auto b = EvaluateCandidate(fc, "U", {});
    for (const GroupComparison &g : CompareGroups(a, b, Metric::kError, "TTS", "Human")) {
      REQUIRE(g.test);
      CHECK(g.test->t == 0.0);
      CHECK(g.winner == kTie);
    }
  }
  TEST_CASE("well separated groups give tiny p-values") {
    auto report = [](const std::string &who, double base, int i) {
      TierReport r;
      r.speaker_id = who;
      r.feature = Feature::kF0;
      for (int s = 0; s < 10; ++s) {
        SentenceScore sc;
        sc.sentence_id = "s" + std::to_string(s);
        sc.error = base + 0.1 * std::sin(s + i);
        r.sentences.push_back(sc);
      }
      return r;
    };
    std::vector<TierReport> models, humans;
    for (int i = 0; i < 3; ++i) {
      models.push_back(report("M" + std::to_string(i), 5.0, i));
      humans.push_back(report("H" + std::to_string(i), 0.0, i));
    }
    auto rows = CompareGroups(models, humans, Metric::kError, "TTS", "Human");
    REQUIRE(rows.size() == 1);
    REQUIRE(rows[0].test);
    CHECK(rows[0].test->p < 1e-6);
    CHECK(rows[0].winner == "Human");
  }
  TEST_CASE("higher is better for F1") {
    CHECK_FALSE(LowerIsBetter(Metric::kF1));
    CHECK(LowerIsBetter(Metric::kSmoothedLoss));
    CHECK(ParseMetric("error") == Metric::kError);
    CHECK_THROWS_AS(ParseMetric("auc"), ValidationError);
  }
}

TEST_SUITE("report documents") {
  TEST_CASE("JSON round trip preserves every report") {
    Rng rng(5);
    std::vector<TierReport> reports;
    for (int k = 0; k < 50; ++k) {
      TierReport r;
      r.speaker_id = "S" + std::to_string(k);
      r.feature = kAllFeatures[rng.Below(kNumFeatures)];
      auto maybe = [&]() -> std::optional<double> {
        if (rng.Bit(0.2)) return std::nullopt;
        return rng.Uniform() * std::pow(10.0, static_cast<double>(rng.Below(10)) - 5);
      };
      r.zero_one_loss = maybe();
      r.smoothed_loss = maybe();
      r.precision = maybe();
      r.recall = maybe();
      r.f1 = maybe();
      r.normalized_error = maybe();
      r.n_sentences = rng.Below(9);
      r.n_words = rng.Below(900);
      r.n_words_scored = rng.Below(900);
      if (rng.Bit()) r.skipped_sentences = {"a", "b"};
      r.references = {"H1", "H2"};
      for (int s = 0; s < 3; ++s) {
        SentenceScore sc;
        sc.sentence_id = "s" + std::to_string(s);
        sc.n_words = rng.Below(30);
        sc.binary.zero_one_loss = rng.Uniform();
        sc.binary.smoothed_loss = rng.Uniform() * 1e-30;
        sc.binary.precision = maybe();
        sc.binary.f1 = maybe();
        sc.error = maybe();
        sc.error_words = rng.Below(30);
        r.sentences.push_back(sc);
      }
      reports.push_back(std::move(r));
    }
    CHECK(ParseReportDocument(EmitReportDocument({}, reports, {})) == reports);
  }
  TEST_CASE("malformed documents are parse errors") {
    CHECK_THROWS_AS(ParseReportDocument("{"), ParseError);
    CHECK_THROWS_AS(ParseReportDocument(R"({"reports":[{"speaker":"x"}]})"), ParseError);
  }
  TEST_CASE("CSV projection writes nulls as empty cells") {
    TierReport r;
    r.speaker_id = "TTS_A";
    r.feature = Feature::kDuration;
    r.zero_one_loss = 0.014;
    r.smoothed_loss = 0.006;
    r.recall = 0.657;
    r.precision = 0.540;
    r.f1 = 0.767;
    r.normalized_error = 0.047;
    TierReport n = r;
    n.speaker_id = "TTS_B";
    n.precision.reset();
    n.f1.reset();
    CHECK(ReportCsv({r, n}) ==
          "speaker,feature,zero_one_loss,smoothed_loss,recall,precision,f1,error\n"
          "TTS_A,duration,0.014,0.006,0.657,0.540,0.767,0.047\n"
          "TTS_B,duration,0.014,0.006,0.657,,,0.047\n");
  }
}

TEST_SUITE("fixture corpus") {
  TEST_CASE("audio fixture end to end") {
    prosody::testing::TempDir dir;
    prosody::testing::FixtureOptions opts;
    opts.sentences = 2;
    auto paths = prosody::testing::WriteFixtureCorpus(dir.path(), opts);
    Corpus corpus = LoadCorpus(LoadManifest(paths.manifest));
    CHECK(corpus.issues.empty());
    FeatureCorpus fc = ExtractFeatureCorpus(corpus, {}, {}, 2);
    CHECK(fc.raw.size() == 16);
    auto best = EvaluateCandidate(fc, "TTS_A", {});
    auto worst = EvaluateCandidate(fc, "TTS_C", {});
    double best_err = 0.0, worst_err = 0.0;
    for (std::size_t f = 0; f < best.size(); ++f) {
      best_err += *best[f].normalized_error;
      worst_err += *worst[f].normalized_error;
    }
    CHECK(best_err < worst_err);
  }
}
