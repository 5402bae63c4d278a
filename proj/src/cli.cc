// prosody/cli.cc

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

#include "prosody/cli.h"

#include <spdlog/sinks/stdout_sinks.h>
#include <spdlog/spdlog.h>

#include <cstdlib>
#include <filesystem>
#include <map>
#include <memory>
#include <optional>
#include <set>
#include <string>
#include <vector>

#include "CLI11.hpp"
#include "prosody/audio.h"
#include "prosody/corpus.h"
#include "prosody/errors.h"
#include "prosody/events.h"
#include "prosody/perception.h"
#include "prosody/pipeline.h"
#include "prosody/report_io.h"
#include "prosody/stats.h"

namespace prosody {

namespace {

namespace fs = std::filesystem;

std::shared_ptr<spdlog::logger> Logger() {
  static std::shared_ptr<spdlog::logger> logger = [] {
    auto l = std::make_shared<spdlog::logger>(
        "prosody-eval", std::make_shared<spdlog::sinks::stderr_sink_mt>());
    l->set_pattern("%n: %l: %v");
    return l;
  }();
  const char *env = std::getenv("PROSODY_EVAL_LOG");
  logger->set_level(env && *env ? spdlog::level::from_str(env) : spdlog::level::info);
  return logger;
}

// Options shared by the subcommands that evaluate.
struct Options {
  fs::path manifest;
  fs::path out;
  fs::path features_dir;
  bool from_audio = false;
  bool normalized_output = false;
  std::vector<std::string> candidates;
  std::vector<std::string> features;
  double threshold = kDefaultThreshold;
  int window = 7;
  double rho_mult = 0.5;
  bool interior_only = false;
  bool pooled = false;
  bool weight_by_words = false;
  bool raw = false;
  bool sample_std = false;
  double min_pause_ms = kDefaultMinPauseMs;
  std::string duration_tier = "or_combined";
  double pitch_floor = 75.0;
  double pitch_ceiling = 500.0;
  int jobs = 0;
  // perception / report
  fs::path ratings, pairs;
  std::vector<std::string> humans;
  fs::path models_report, humans_report;
  std::vector<std::string> metrics{"smoothed_loss", "f1", "error"};
};

EvalConfig MakeEvalConfig(const Options &o) {
  EvalConfig cfg;
  cfg.threshold = o.threshold;
  cfg.events.peaks.window_words = o.window;
  cfg.events.peaks.rho_multiplier = o.rho_mult;
  cfg.events.peaks.endpoint_policy =
      o.interior_only ? EndpointPolicy::kInteriorOnly : EndpointPolicy::kAllowEndpoints;
  cfg.events.duration_tier = ParseDurationTier(o.duration_tier);
  cfg.events.min_pause_ms = o.min_pause_ms;
  cfg.normalize = !o.raw;
  cfg.normalization.sample_std = o.sample_std;
  if (o.pooled && o.weight_by_words)
    throw ValidationError("--pooled and --weight-by-words are exclusive");
  cfg.aggregation = o.pooled            ? Aggregation::kPooled
                    : o.weight_by_words ? Aggregation::kWeightByWords
                                        : Aggregation::kPerSentence;
  if (!o.features.empty()) {
    cfg.features.clear();
    for (const std::string &name : o.features) {
      auto f = FeatureFromName(name);
      if (!f) throw ValidationError("unknown feature \"" + name + "\"");
      cfg.features.push_back(*f);
    }
  }
  cfg.jobs = o.jobs;
  cfg.Validate();
  return cfg;
}

AnalysisConfig MakeAnalysisConfig(const Options &o) {
  AnalysisConfig cfg;
  cfg.pitch_floor_hz = o.pitch_floor;
  cfg.pitch_ceiling_hz = o.pitch_ceiling;
  cfg.Validate();
  return cfg;
}

void LogIssues(const std::vector<LoadIssue> &issues) {
  for (const LoadIssue &i : issues)
    Logger()->warn("skipped {}/{}: {}", i.speaker_id, i.sentence_id, i.message);
}

// Loads features from --features-dir or computes them with --from-audio.
FeatureCorpus ObtainFeatures(const Options &o, const EvalConfig &cfg) {
  if (o.from_audio == !o.features_dir.empty())
    throw ValidationError("give exactly one of --from-audio or --features-dir");
  CorpusManifest manifest = LoadManifest(o.manifest);
  FeatureCorpus fc;
  if (o.from_audio) {
    Corpus corpus = LoadCorpus(manifest, o.jobs);
    fc = ExtractFeatureCorpus(corpus, MakeAnalysisConfig(o), cfg.normalization, o.jobs);
  } else {
    fc = LoadFeatureCorpus(manifest, o.features_dir, cfg.normalization, o.jobs);
  }
  LogIssues(fc.issues);
  return fc;
}

// Output files are assembled in memory and written only once everything
// has been computed.
using Outputs = std::vector<std::pair<fs::path, std::string>>;

void WriteOutputs(const Outputs &outputs) {
  for (const auto &[path, bytes] : outputs) WriteFileBytes(path, bytes);
}

int CmdExtract(const Options &o) {
  CorpusManifest manifest = LoadManifest(o.manifest);
  Corpus corpus = LoadCorpus(manifest, o.jobs);
  NormalizationOptions norm;
  norm.sample_std = o.sample_std;
  FeatureCorpus fc = ExtractFeatureCorpus(corpus, MakeAnalysisConfig(o), norm, o.jobs);
  LogIssues(fc.issues);
  Outputs outputs;
  const auto &source = o.normalized_output ? fc.normalized : fc.raw;
  for (const auto &[key, m] : source)
    outputs.emplace_back(FeaturePath(o.out, key.speaker_id, key.sentence_id),
                         WriteFeatureCsv(m));
  WriteOutputs(outputs);
  Logger()->info("wrote {} feature files to {}", outputs.size(), o.out.string());
  return fc.issues.empty() ? kExitOk : kExitPartial;
}

int CmdEvents(const Options &o) {
  EvalConfig cfg = MakeEvalConfig(o);
  FeatureCorpus fc = ObtainFeatures(o, cfg);
  Outputs outputs;
  for (const auto &[key, m] : fc.raw) {
    std::vector<EventSeries> series;
    for (Feature f : cfg.features) series.push_back(FeatureEvents(m, f, cfg.events));
    outputs.emplace_back(FeaturePath(o.out, key.speaker_id, key.sentence_id),
                         EventsCsv(series));
  }
  WriteOutputs(outputs);
  return fc.issues.empty() ? kExitOk : kExitPartial;
}

bool AnySkipped(const std::vector<TierReport> &reports) {
  for (const TierReport &r : reports)
    if (!r.skipped_sentences.empty()) return true;
  return false;
}

int CmdEvaluate(const Options &o) {
  EvalConfig cfg = MakeEvalConfig(o);
  FeatureCorpus fc = ObtainFeatures(o, cfg);
  std::vector<std::string> candidates = o.candidates;
  if (candidates.empty()) candidates = fc.manifest.SpeakerIds(SpeakerKind::kSynthetic);
  if (candidates.empty())
    throw ValidationError("no candidate given and the manifest has no synthetic speakers");
  std::vector<TierReport> reports;
  for (const std::string &c : candidates) {
    for (TierReport &r : EvaluateCandidate(fc, c, cfg)) reports.push_back(std::move(r));
  }
  for (const TierReport &r : reports)
    if (!r.skipped_sentences.empty() && r.feature == cfg.features.front())
      Logger()->warn("{}: {} sentence(s) skipped", r.speaker_id, r.skipped_sentences.size());
  WriteOutputs({{o.out / "report.json", EmitReportDocument(cfg, reports, fc.issues)},
                {o.out / "report.csv", ReportCsv(reports)},
                {o.out / "radar.csv", RadarCsv(reports)}});
  return fc.issues.empty() && !AnySkipped(reports) ? kExitOk : kExitPartial;
}

int CmdSelfValidate(const Options &o) {
  EvalConfig cfg = MakeEvalConfig(o);
  FeatureCorpus fc = ObtainFeatures(o, cfg);
  std::vector<TierReport> reports = SelfValidate(fc, cfg);
  WriteOutputs({{o.out / "self_validation.json", EmitReportDocument(cfg, reports, fc.issues)},
                {o.out / "self_validation.csv", ReportCsv(reports)}});
  return fc.issues.empty() && !AnySkipped(reports) ? kExitOk : kExitPartial;
}

// Per-rating MOS samples of a set of speakers.
std::vector<double> MosSample(const std::vector<RatingRecord> &records,
                              const std::set<std::string> &speakers) {
  std::vector<double> v;
  for (const RatingRecord &r : records)
    if (speakers.count(r.speaker_id)) v.push_back(r.mos);
  return v;
}

std::vector<double> HumanSample(const std::vector<RatingRecord> &records,
                                const std::set<std::string> &speakers) {
  std::vector<double> v;
  for (const RatingRecord &r : records)
    if (speakers.count(r.speaker_id)) v.push_back(r.judged_human ? 1.0 : 0.0);
  return v;
}

Json TestJson(std::string_view comparison, std::string_view what,
              const std::vector<double> &a, const std::vector<double> &b,
              std::string_view a_label, std::string_view b_label) {
  Json j{{"comparison", std::string(comparison)},
         {"measure", std::string(what)},
         {"n_tts", a.size()},
         {"n_human", b.size()}};
  double ma = 0, mb = 0;
  for (double x : a) ma += x;
  for (double x : b) mb += x;
  if (!a.empty()) ma /= static_cast<double>(a.size());
  if (!b.empty()) mb /= static_cast<double>(b.size());
  j["mean_tts"] = a.empty() ? Json(nullptr) : Json(ma);
  j["mean_human"] = b.empty() ? Json(nullptr) : Json(mb);
  try {
    WelchResult w = WelchTTest(a, b);
    j["t"] = w.t;
    j["p"] = w.p;
    j["df"] = w.df;
  } catch (const ValidationError &e) {
    j["t"] = nullptr;
    j["p"] = nullptr;
    j["df"] = nullptr;
    j["note"] = e.what();
  }
  std::string winner(kTie);
  if (!a.empty() && !b.empty() && ma != mb) winner = std::string(ma > mb ? a_label : b_label);
  j["winner"] = winner;
  return j;
}

int CmdPerception(const Options &o) {
  if (o.ratings.empty() && o.pairs.empty())
    throw ValidationError("give --ratings and/or --pairs");
  Outputs outputs;
  if (!o.ratings.empty()) {
    std::vector<RatingRecord> ratings = ParseRatings(ReadFileBytes(o.ratings));
    std::vector<MosSummary> mos = SummarizeMos(ratings);
    std::vector<HumannessSummary> human = HumannessProportions(ratings);
    outputs.emplace_back(o.out / "table1.json",
                         Json{{"humanness", HumannessToJson(human)}}.dump(2) + "\n");
    outputs.emplace_back(o.out / "table2.json", Json{{"mos", MosToJson(mos)}}.dump(2) + "\n");

    std::set<std::string> humans(o.humans.begin(), o.humans.end());
    if (!o.manifest.empty())
      for (const std::string &h : LoadManifest(o.manifest).SpeakerIds(SpeakerKind::kHuman))
        humans.insert(h);
    Json tests = Json::array();
    if (humans.empty()) {
      Logger()->warn("no human speakers given (--humans or --manifest); ttest.json is empty");
    } else {
      std::set<std::string> models;
      for (const MosSummary &m : mos)
        if (!humans.count(m.speaker_id)) models.insert(m.speaker_id);
      tests.push_back(TestJson("all_models_vs_all_humans", "mos", MosSample(ratings, models),
                               MosSample(ratings, humans), "TTS", "Human"));
      tests.push_back(TestJson("all_models_vs_all_humans", "humanness",
                               HumanSample(ratings, models), HumanSample(ratings, humans),
                               "TTS", "Human"));
      // Best model against worst human by MOS; the summary is sorted best first.
      const MosSummary *best_model = nullptr, *worst_human = nullptr;
      for (const MosSummary &m : mos) {
        if (!humans.count(m.speaker_id) && !best_model) best_model = &m;
        if (humans.count(m.speaker_id)) worst_human = &m;
      }
      if (best_model && worst_human) {
        Json j = TestJson("best_model_vs_worst_human", "mos",
                          MosSample(ratings, {best_model->speaker_id}),
                          MosSample(ratings, {worst_human->speaker_id}), "TTS", "Human");
        j["tts"] = best_model->speaker_id;
        j["human"] = worst_human->speaker_id;
        tests.push_back(std::move(j));
      }
    }
    outputs.emplace_back(o.out / "ttest.json", Json{{"tests", tests}}.dump(2) + "\n");
  }
  if (!o.pairs.empty()) {
    std::vector<PairwiseRecord> pairs = ParsePairs(ReadFileBytes(o.pairs));
    WinMatrix w = BuildWinMatrix(pairs);
    BtmResult btm = FitBradleyTerry(w);
    if (!btm.converged)
      Logger()->warn("Bradley-Terry scores diverge (some speaker never loses or never wins)");
    outputs.emplace_back(o.out / "table3.json",
                         Json{{"win_proportions", WinMatrixToJson(w)}}.dump(2) + "\n");
    outputs.emplace_back(o.out / "table4.json", Json{{"btm", BtmToJson(btm)}}.dump(2) + "\n");
  }
  WriteOutputs(outputs);
  return kExitOk;
}

int CmdReport(const Options &o) {
  std::vector<TierReport> models = ParseReportDocument(ReadFileBytes(o.models_report));
  std::vector<TierReport> humans = ParseReportDocument(ReadFileBytes(o.humans_report));
  std::vector<GroupComparison> group, extreme;
  Json group_json = Json::array(), extreme_json = Json::array();
  for (const std::string &name : o.metrics) {
    Metric m = ParseMetric(name);
    for (GroupComparison &g : CompareGroups(models, humans, m, "TTS", "Human")) {
      group_json.push_back(ComparisonToJson(g, "tts", "human"));
      group.push_back(std::move(g));
    }
    for (GroupComparison &g : CompareBestWorst(models, humans, m, "TTS", "Human")) {
      extreme_json.push_back(ComparisonToJson(g, "tts", "human"));
      extreme.push_back(std::move(g));
    }
  }
  WriteOutputs({{o.out / "group_ttest.json", Json{{"tests", group_json}}.dump(2) + "\n"},
                {o.out / "group_ttest.csv", ComparisonCsv(group, false)},
                {o.out / "best_vs_worst.json", Json{{"tests", extreme_json}}.dump(2) + "\n"},
                {o.out / "best_vs_worst.csv", ComparisonCsv(extreme, true)}});
  return kExitOk;
}

void AddEvalFlags(CLI::App *cmd, Options &o) {
  cmd->add_option("--threshold", o.threshold, "agreement threshold c in (0, 1]");
  cmd->add_option("--window", o.window, "peak median window in words (odd, >= 3)");
  cmd->add_option("--rho-mult", o.rho_mult, "threshold offset as a multiple of the std");
  cmd->add_flag("--interior-only", o.interior_only, "never mark the first or last word");
  cmd->add_flag("--pooled", o.pooled, "pool words over sentences before scoring");
  cmd->add_flag("--weight-by-words", o.weight_by_words, "weight sentence scores by words");
  cmd->add_flag("--raw", o.raw, "score the continuous tier in raw units");
  cmd->add_flag("--sample-std", o.sample_std, "use the n-1 standard deviation");
  cmd->add_option("--min-pause-ms", o.min_pause_ms, "shortest pause counted as an event");
  cmd->add_option("--duration-tier", o.duration_tier,
                  "or_combined, duration_only or pause_only");
  cmd->add_option("--features", o.features, "comma-separated feature names")->delimiter(',');
}

void AddSourceFlags(CLI::App *cmd, Options &o) {
  cmd->add_option("--manifest", o.manifest, "corpus manifest (JSON)")->required();
  cmd->add_option("--out", o.out, "output directory")->required();
  cmd->add_option("--jobs", o.jobs, "worker threads (0 = all cores)");
  cmd->add_option("--pitch-floor", o.pitch_floor, "lowest F0 in Hz");
  cmd->add_option("--pitch-ceiling", o.pitch_ceiling, "highest F0 in Hz");
}

void AddFeatureSource(CLI::App *cmd, Options &o) {
  cmd->add_flag("--from-audio", o.from_audio, "extract features from the audio");
  cmd->add_option("--features-dir", o.features_dir, "directory written by extract");
}

}  // namespace

int RunCli(int argc, const char *const *argv) {
  CLI::App app{"Word-level prosody evaluation against a human reference corpus",
               "prosody-eval"};
  app.require_subcommand(1);
  Options o;

  auto *extract = app.add_subcommand("extract", "write word-level feature CSVs");
  AddSourceFlags(extract, o);
  extract->add_flag("--normalized", o.normalized_output, "write z-normalized values");
  extract->add_flag("--sample-std", o.sample_std, "use the n-1 standard deviation");

  auto *events = app.add_subcommand("events", "write per-utterance event CSVs");
  AddSourceFlags(events, o);
  AddFeatureSource(events, o);
  AddEvalFlags(events, o);

  auto *evaluate = app.add_subcommand("evaluate", "score candidates against the humans");
  AddSourceFlags(evaluate, o);
  AddFeatureSource(evaluate, o);
  AddEvalFlags(evaluate, o);
  evaluate->add_option("--candidate", o.candidates,
                       "candidate speaker (repeatable; default every synthetic speaker)")
      ->delimiter(',');

  auto *self = app.add_subcommand("self-validate", "leave-one-out scores of the humans");
  AddSourceFlags(self, o);
  AddFeatureSource(self, o);
  AddEvalFlags(self, o);

  auto *perception = app.add_subcommand("perception", "listening-test statistics");
  perception->add_option("--ratings", o.ratings, "ratings CSV");
  perception->add_option("--pairs", o.pairs, "pairwise comparisons CSV");
  perception->add_option("--humans", o.humans, "human speaker ids")->delimiter(',');
  perception->add_option("--manifest", o.manifest, "manifest naming the human speakers");
  perception->add_option("--out", o.out, "output directory")->required();

  auto *report = app.add_subcommand("report", "t-tests of model against human reports");
  report->add_option("--models", o.models_report, "report.json of the models")->required();
  report->add_option("--humans", o.humans_report, "self_validation.json")->required();
  report->add_option("--metrics", o.metrics, "metrics to test")->delimiter(',');
  report->add_option("--out", o.out, "output directory")->required();

  try {
    app.parse(argc, argv);
  } catch (const CLI::CallForHelp &e) {
    return app.exit(e) == 0 ? kExitOk : kExitFatal;
  } catch (const CLI::CallForAllHelp &e) {
    return app.exit(e) == 0 ? kExitOk : kExitFatal;
  } catch (const CLI::ParseError &e) {
    app.exit(e);
    return kExitFatal;
  }

  try {
    if (*extract) return CmdExtract(o);
    if (*events) return CmdEvents(o);
    if (*evaluate) return CmdEvaluate(o);
    if (*self) return CmdSelfValidate(o);
    if (*perception) return CmdPerception(o);
    if (*report) return CmdReport(o);
  } catch (const std::exception &e) {
    Logger()->error("{}", e.what());
    return kExitFatal;
  }
  return kExitFatal;
}

int RunCli(const std::vector<std::string> &args) {
  std::vector<const char *> argv;
  for (const std::string &a : args) argv.push_back(a.c_str());
  return RunCli(static_cast<int>(argv.size()), argv.data());
}

}  // namespace prosody
