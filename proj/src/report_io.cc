// prosody/report_io.cc

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

#include "prosody/report_io.h"

#include <algorithm>
#include <cstdio>
#include <map>

#include "prosody/binary_metrics.h"
#include "prosody/csv.h"
#include "prosody/errors.h"

namespace prosody {

namespace {

std::string Fixed3(const std::optional<double> &v) {
  if (!v) return "";
  char buf[64];
  std::snprintf(buf, sizeof buf, "%.3f", *v);
  // Avoid "-0.000".
  if (std::string_view(buf) == "-0.000") return "0.000";
  return buf;
}

std::string Sci(double v) {
  char buf[64];
  std::snprintf(buf, sizeof buf, "%.2e", v);
  return buf;
}

std::optional<double> GetOptional(const Json &j, const char *key) {
  if (!j.contains(key)) throw ParseError(std::string("report field \"") + key + "\" missing");
  const Json &v = j.at(key);
  if (v.is_null()) return std::nullopt;
  if (!v.is_number()) throw ParseError(std::string("report field \"") + key + "\" is not a number");
  return v.get<double>();
}

template <typename T>
T Get(const Json &j, const char *key) {
  if (!j.contains(key)) throw ParseError(std::string("report field \"") + key + "\" missing");
  try {
    return j.at(key).get<T>();
  } catch (const nlohmann::json::exception &) {
    throw ParseError(std::string("report field \"") + key + "\" has the wrong type");
  }
}

}  // namespace

Json OptionalJson(const std::optional<double> &v) {
  return v ? Json(*v) : Json(nullptr);
}

Json ConfigToJson(const EvalConfig &cfg) {
  Json features = Json::array();
  for (Feature f : cfg.features) features.push_back(std::string(FeatureName(f)));
  return Json{
      {"threshold", cfg.threshold},
      {"window", cfg.events.peaks.window_words},
      {"rho_mult", cfg.events.peaks.rho_multiplier},
      {"endpoints", cfg.events.peaks.endpoint_policy == EndpointPolicy::kAllowEndpoints},
      {"duration_tier", std::string(DurationTierName(cfg.events.duration_tier))},
      {"min_pause_ms", cfg.events.min_pause_ms},
      {"normalize", cfg.normalize},
      {"sample_std", cfg.normalization.sample_std},
      {"aggregation", std::string(AggregationName(cfg.aggregation))},
      {"features", features},
  };
}

Json ReportToJson(const TierReport &r) {
  Json sentences = Json::array();
  for (const SentenceScore &s : r.sentences)
    sentences.push_back(Json{
        {"sentence", s.sentence_id},
        {"n_words", s.n_words},
        {"zero_one_loss", s.binary.zero_one_loss},
        {"smoothed_loss", s.binary.smoothed_loss},
        {"precision", OptionalJson(s.binary.precision)},
        {"recall", OptionalJson(s.binary.recall)},
        {"f1", OptionalJson(s.binary.f1)},
        {"error", OptionalJson(s.error)},
        {"error_words", s.error_words},
    });
  return Json{
      {"speaker", r.speaker_id},
      {"feature", std::string(FeatureName(r.feature))},
      {"zero_one_loss", OptionalJson(r.zero_one_loss)},
      {"smoothed_loss", OptionalJson(r.smoothed_loss)},
      {"recall", OptionalJson(r.recall)},
      {"precision", OptionalJson(r.precision)},
      {"f1", OptionalJson(r.f1)},
      {"error", OptionalJson(r.normalized_error)},
      {"n_sentences", r.n_sentences},
      {"n_words", r.n_words},
      {"n_words_scored", r.n_words_scored},
      {"skipped_sentences", r.skipped_sentences},
      {"references", r.references},
      {"sentences", sentences},
  };
}

TierReport ReportFromJson(const Json &j) {
  if (!j.is_object()) throw ParseError("report entry is not an object");
  TierReport r;
  r.speaker_id = Get<std::string>(j, "speaker");
  auto f = FeatureFromName(Get<std::string>(j, "feature"));
  if (!f) throw ParseError("unknown feature \"" + Get<std::string>(j, "feature") + "\"");
  r.feature = *f;
  r.zero_one_loss = GetOptional(j, "zero_one_loss");
  r.smoothed_loss = GetOptional(j, "smoothed_loss");
  r.recall = GetOptional(j, "recall");
  r.precision = GetOptional(j, "precision");
  r.f1 = GetOptional(j, "f1");
  r.normalized_error = GetOptional(j, "error");
  r.n_sentences = Get<std::size_t>(j, "n_sentences");
  r.n_words = Get<std::size_t>(j, "n_words");
  r.n_words_scored = Get<std::size_t>(j, "n_words_scored");
  r.skipped_sentences = Get<std::vector<std::string>>(j, "skipped_sentences");
  r.references = Get<std::vector<std::string>>(j, "references");
  const Json &sentences = j.at("sentences");
  if (!sentences.is_array()) throw ParseError("\"sentences\" is not an array");
  for (const Json &s : sentences) {
    if (!s.is_object()) throw ParseError("sentence entry is not an object");
    SentenceScore sc;
    sc.sentence_id = Get<std::string>(s, "sentence");
    sc.n_words = Get<std::size_t>(s, "n_words");
    sc.binary.zero_one_loss = Get<double>(s, "zero_one_loss");
    sc.binary.smoothed_loss = Get<double>(s, "smoothed_loss");
    sc.binary.precision = GetOptional(s, "precision");
    sc.binary.recall = GetOptional(s, "recall");
    sc.binary.f1 = GetOptional(s, "f1");
    sc.error = GetOptional(s, "error");
    sc.error_words = Get<std::size_t>(s, "error_words");
    r.sentences.push_back(std::move(sc));
  }
  return r;
}

std::string EmitReportDocument(const EvalConfig &cfg,
                               const std::vector<TierReport> &reports,
                               const std::vector<LoadIssue> &issues) {
  Json doc;
  doc["config"] = ConfigToJson(cfg);
  doc["reports"] = Json::array();
  for (const TierReport &r : reports) doc["reports"].push_back(ReportToJson(r));
  doc["issues"] = Json::array();
  for (const LoadIssue &i : issues)
    doc["issues"].push_back(
        Json{{"speaker", i.speaker_id}, {"sentence", i.sentence_id}, {"message", i.message}});
  return doc.dump(2) + "\n";
}

std::vector<TierReport> ParseReportDocument(std::string_view text) {
  Json doc;
  try {
    doc = Json::parse(text);
  } catch (const nlohmann::json::parse_error &e) {
    throw ParseError(std::string("report JSON: ") + e.what());
  }
  if (!doc.is_object() || !doc.contains("reports") || !doc["reports"].is_array())
    throw ParseError("report JSON lacks a \"reports\" array");
  std::vector<TierReport> out;
  for (const Json &r : doc["reports"]) out.push_back(ReportFromJson(r));
  return out;
}

std::string ReportCsv(const std::vector<TierReport> &reports) {
  std::string out =
      "speaker,feature,zero_one_loss,smoothed_loss,recall,precision,f1,error\n";
  for (const TierReport &r : reports)
    out += CsvLine({r.speaker_id, std::string(FeatureName(r.feature)),
                    Fixed3(r.zero_one_loss), Fixed3(r.smoothed_loss), Fixed3(r.recall),
                    Fixed3(r.precision), Fixed3(r.f1), Fixed3(r.normalized_error)});
  return out;
}

std::string RadarCsv(const std::vector<TierReport> &reports) {
  std::string out = "feature,speaker,f1_minmax,one_minus_error\n";
  for (Feature f : kAllFeatures) {
    std::vector<const TierReport *> rows;
    for (const TierReport &r : reports)
      if (r.feature == f) rows.push_back(&r);
    if (rows.empty()) continue;
    std::vector<std::optional<double>> f1s;
    for (const TierReport *r : rows) f1s.push_back(r->f1);
    std::vector<std::optional<double>> scaled = MinMaxNormalize(f1s);
    for (std::size_t i = 0; i < rows.size(); ++i) {
      std::optional<double> complement;
      if (rows[i]->normalized_error)
        complement = std::clamp(1.0 - *rows[i]->normalized_error, 0.0, 1.0);
      out += CsvLine({std::string(FeatureName(f)), rows[i]->speaker_id, Fixed3(scaled[i]),
                      Fixed3(complement)});
    }
  }
  return out;
}

Json ComparisonToJson(const GroupComparison &g, std::string_view label_a,
                      std::string_view label_b) {
  Json j{{"feature", std::string(FeatureName(g.feature))},
         {"metric", std::string(MetricName(g.metric))}};
  if (!g.speaker_a.empty() || !g.speaker_b.empty()) {
    j[std::string(label_a)] = g.speaker_a;
    j[std::string(label_b)] = g.speaker_b;
  }
  j["n_" + std::string(label_a)] = g.n_a;
  j["n_" + std::string(label_b)] = g.n_b;
  j["mean_" + std::string(label_a)] = OptionalJson(g.mean_a);
  j["mean_" + std::string(label_b)] = OptionalJson(g.mean_b);
  j["t"] = g.test ? Json(g.test->t) : Json(nullptr);
  j["p"] = g.test ? Json(g.test->p) : Json(nullptr);
  j["df"] = g.test ? Json(g.test->df) : Json(nullptr);
  j["winner"] = g.winner;
  if (!g.note.empty()) j["note"] = g.note;
  return j;
}

std::string ComparisonCsv(const std::vector<GroupComparison> &rows, bool with_speakers) {
  std::string out = with_speakers ? "feature,metric,speaker_a,speaker_b,t,p,df,winner\n"
                                  : "feature,metric,t,p,df,winner\n";
  for (const GroupComparison &g : rows) {
    std::vector<std::string> f{std::string(FeatureName(g.feature)),
                               std::string(MetricName(g.metric))};
    if (with_speakers) {
      f.push_back(g.speaker_a);
      f.push_back(g.speaker_b);
    }
    f.push_back(g.test ? Fixed3(g.test->t) : "");
    f.push_back(g.test ? Sci(g.test->p) : "");
    f.push_back(g.test ? Fixed3(g.test->df) : "");
    f.push_back(g.winner);
    out += CsvLine(f);
  }
  return out;
}

std::string EventsCsv(const std::vector<EventSeries> &series) {
  std::string out = "word,feature,event\n";
  if (series.empty()) return out;
  const std::size_t n = series.front().bits.size();
  for (std::size_t i = 0; i < n; ++i)
    for (const EventSeries &s : series)
      out += CsvLine({std::to_string(i + 1), std::string(FeatureName(s.feature)),
                      s.bits[i] ? "1" : "0"});
  return out;
}

Json MosToJson(const std::vector<MosSummary> &rows) {
  Json a = Json::array();
  for (const MosSummary &m : rows)
    a.push_back(Json{{"speaker", m.speaker_id},
                     {"mos", m.mean},
                     {"std_error", OptionalJson(m.std_error)},
                     {"n", m.n}});
  return a;
}

Json HumannessToJson(const std::vector<HumannessSummary> &rows) {
  Json a = Json::array();
  for (const HumannessSummary &h : rows)
    a.push_back(Json{{"speaker", h.speaker_id}, {"proportion", h.proportion}, {"n", h.n}});
  return a;
}

Json WinMatrixToJson(const WinMatrix &w) {
  Json rows = Json::array();
  for (std::size_t a = 0; a < w.speakers.size(); ++a)
    for (std::size_t b = 0; b < w.speakers.size(); ++b) {
      if (a == b || w.Trials(a, b) == 0) continue;
      rows.push_back(Json{{"speaker", w.speakers[a]},
                          {"opponent", w.speakers[b]},
                          {"wins", w.wins[a][b]},
                          {"trials", w.Trials(a, b)},
                          {"proportion", OptionalJson(w.Proportion(a, b))}});
    }
  return Json{{"speakers", w.speakers}, {"pairs", rows}};
}

Json BtmToJson(const BtmResult &r) {
  std::vector<std::pair<std::string, double>> sorted(r.scores.begin(), r.scores.end());
  std::stable_sort(sorted.begin(), sorted.end(),
                   [](const auto &a, const auto &b) { return a.second > b.second; });
  Json scores = Json::array();
  for (const auto &[speaker, s] : sorted)
    scores.push_back(Json{{"speaker", speaker}, {"score", s}});
  return Json{{"scores", scores}, {"converged", r.converged}, {"iterations", r.iterations}};
}

}  // namespace prosody
