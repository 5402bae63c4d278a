// prosody/perception.cc

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

#include "prosody/perception.h"

#include <algorithm>
#include <cctype>
#include <cmath>
#include <limits>
#include <numeric>

#include "prosody/csv.h"
#include "prosody/errors.h"

namespace prosody {

namespace {

std::string Lower(std::string_view s) {
  std::string out(s);
  for (char &c : out) c = static_cast<char>(std::tolower(static_cast<unsigned char>(c)));
  return out;
}

std::string Trim(std::string_view s) {
  std::size_t b = 0, e = s.size();
  while (b < e && std::isspace(static_cast<unsigned char>(s[b]))) ++b;
  while (e > b && std::isspace(static_cast<unsigned char>(s[e - 1]))) --e;
  return std::string(s.substr(b, e - b));
}

// Parses rows after checking the header; returns trimmed fields per row.
std::vector<CsvRow> ReadTable(std::string_view text,
                              const std::vector<std::string> &header,
                              std::string_view what) {
  std::vector<CsvRow> rows = ParseCsv(text);
  if (rows.empty()) throw ParseError(std::string(what) + " is empty", 1, 1);
  std::vector<std::string> got;
  for (const auto &f : rows[0].fields) got.push_back(Lower(Trim(f)));
  if (got != header) {
    std::string expected;
    for (const auto &h : header) expected += (expected.empty() ? "" : ",") + h;
    throw ParseError(std::string(what) + " header must be " + expected, rows[0].line, 1);
  }
  rows.erase(rows.begin());
  for (CsvRow &r : rows) {
    if (r.fields.size() != header.size())
      throw ParseError(std::string(what) + " row has " + std::to_string(r.fields.size()) +
                           " fields, expected " + std::to_string(header.size()),
                       r.line, 1);
    for (auto &f : r.fields) f = Trim(f);
    for (std::size_t i = 0; i < r.fields.size(); ++i)
      if (r.fields[i].empty())
        throw ValidationError(std::string(what) + " line " + std::to_string(r.line) +
                              ": empty " + header[i]);
  }
  return rows;
}

bool ParseBool(const std::string &s, std::size_t line) {
  std::string v = Lower(s);
  if (v == "true" || v == "yes" || v == "1") return true;
  if (v == "false" || v == "no" || v == "0") return false;
  throw ValidationError("ratings line " + std::to_string(line) +
                        ": judged_human must be true/false, got \"" + s + "\"");
}

// Connected components of the undirected comparison graph.
std::vector<std::vector<std::size_t>> Components(const WinMatrix &w) {
  const std::size_t n = w.speakers.size();
  std::vector<int> comp(n, -1);
  std::vector<std::vector<std::size_t>> out;
  for (std::size_t s = 0; s < n; ++s) {
    if (comp[s] >= 0) continue;
    out.emplace_back();
    std::vector<std::size_t> stack{s};
    comp[s] = static_cast<int>(out.size() - 1);
    while (!stack.empty()) {
      std::size_t u = stack.back();
      stack.pop_back();
      out.back().push_back(u);
      for (std::size_t v = 0; v < n; ++v)
        if (comp[v] < 0 && w.Trials(u, v) > 0) {
          comp[v] = comp[s];
          stack.push_back(v);
        }
    }
    std::sort(out.back().begin(), out.back().end());
  }
  return out;
}

// True when every speaker can reach every other along "beat" edges, which
// is when the likelihood has a finite maximum.
bool StronglyConnected(const WinMatrix &w) {
  const std::size_t n = w.speakers.size();
  auto reaches_all = [&](bool forward) {
    std::vector<bool> seen(n, false);
    std::vector<std::size_t> stack{0};
    seen[0] = true;
    std::size_t count = 1;
    while (!stack.empty()) {
      std::size_t u = stack.back();
      stack.pop_back();
      for (std::size_t v = 0; v < n; ++v) {
        std::size_t edge = forward ? w.wins[u][v] : w.wins[v][u];
        if (!seen[v] && edge > 0) {
          seen[v] = true;
          ++count;
          stack.push_back(v);
        }
      }
    }
    return count == n;
  };
  return n <= 1 || (reaches_all(true) && reaches_all(false));
}

}  // namespace

std::vector<RatingRecord> ParseRatings(std::string_view text) {
  std::vector<RatingRecord> out;
  for (const CsvRow &r : ReadTable(
           text, {"listener", "speaker", "sentence", "mos", "judged_human"}, "ratings")) {
    RatingRecord rec;
    rec.listener_id = r.fields[0];
    rec.speaker_id = r.fields[1];
    rec.sentence_id = r.fields[2];
    const std::string &mos = r.fields[3];
    int v = 0;
    bool ok = mos.size() == 1 && mos[0] >= '0' && mos[0] <= '9';
    if (ok) v = mos[0] - '0';
    if (!ok || v < 1 || v > 5)
      throw ValidationError("ratings line " + std::to_string(r.line) +
                            ": mos must be an integer 1-5, got \"" + mos + "\"");
    rec.mos = v;
    rec.judged_human = ParseBool(r.fields[4], r.line);
    out.push_back(std::move(rec));
  }
  return out;
}

std::vector<PairwiseRecord> ParsePairs(std::string_view text) {
  std::vector<PairwiseRecord> out;
  for (const CsvRow &r : ReadTable(
           text, {"listener", "sentence", "speaker_a", "speaker_b", "winner"}, "pairs")) {
    PairwiseRecord rec{r.fields[0], r.fields[1], r.fields[2], r.fields[3], r.fields[4]};
    const std::string where = "pairs line " + std::to_string(r.line) + ": ";
    if (rec.speaker_a == rec.speaker_b)
      throw ValidationError(where + "speaker_a and speaker_b are both \"" +
                            rec.speaker_a + "\"");
    if (rec.winner != rec.speaker_a && rec.winner != rec.speaker_b)
      throw ValidationError(where + "winner \"" + rec.winner +
                            "\" is neither speaker_a nor speaker_b");
    out.push_back(std::move(rec));
  }
  return out;
}

std::vector<MosSummary> SummarizeMos(const std::vector<RatingRecord> &records) {
  if (records.empty()) throw ValidationError("no ratings to summarize");
  std::map<std::string, std::vector<int>> by_speaker;
  for (const RatingRecord &r : records) by_speaker[r.speaker_id].push_back(r.mos);
  std::vector<MosSummary> out;
  for (auto &[speaker, v] : by_speaker) {
    // Integer totals keep the mean independent of record order.
    long long sum = std::accumulate(v.begin(), v.end(), 0LL);
    MosSummary s;
    s.speaker_id = speaker;
    s.n = v.size();
    s.mean = static_cast<double>(sum) / static_cast<double>(s.n);
    if (s.n > 1) {
      long long sq = 0;
      for (int x : v) sq += static_cast<long long>(x) * x;
      double n = static_cast<double>(s.n);
      double ss = static_cast<double>(sq) - static_cast<double>(sum) * static_cast<double>(sum) / n;
      s.std_error = std::sqrt(std::max(0.0, ss) / (n - 1.0) / n);
    }
    out.push_back(std::move(s));
  }
  std::stable_sort(out.begin(), out.end(), [](const MosSummary &a, const MosSummary &b) {
    return a.mean > b.mean;
  });
  return out;
}

std::vector<HumannessSummary> HumannessProportions(
    const std::vector<RatingRecord> &records) {
  std::map<std::string, std::pair<std::size_t, std::size_t>> counts;
  for (const RatingRecord &r : records) {
    auto &[yes, n] = counts[r.speaker_id];
    yes += r.judged_human;
    ++n;
  }
  std::vector<HumannessSummary> out;
  for (const auto &[speaker, c] : counts)
    out.push_back({speaker, static_cast<double>(c.first) / static_cast<double>(c.second),
                   c.second});
  std::stable_sort(out.begin(), out.end(),
                   [](const HumannessSummary &a, const HumannessSummary &b) {
                     return a.proportion > b.proportion;
                   });
  return out;
}

std::size_t WinMatrix::Index(std::string_view speaker) const {
  auto it = std::lower_bound(speakers.begin(), speakers.end(), speaker);
  if (it == speakers.end() || *it != speaker)
    throw ValidationError("unknown speaker \"" + std::string(speaker) + "\"");
  return static_cast<std::size_t>(it - speakers.begin());
}

std::optional<double> WinMatrix::Proportion(std::size_t a, std::size_t b) const {
  std::size_t n = Trials(a, b);
  if (a == b || n == 0) return std::nullopt;
  return static_cast<double>(wins[a][b]) / static_cast<double>(n);
}

WinMatrix BuildWinMatrix(const std::vector<PairwiseRecord> &records) {
  WinMatrix w;
  for (const PairwiseRecord &r : records) {
    w.speakers.push_back(r.speaker_a);
    w.speakers.push_back(r.speaker_b);
  }
  std::sort(w.speakers.begin(), w.speakers.end());
  w.speakers.erase(std::unique(w.speakers.begin(), w.speakers.end()), w.speakers.end());
  const std::size_t n = w.speakers.size();
  w.wins.assign(n, std::vector<std::size_t>(n, 0));
  for (const PairwiseRecord &r : records) {
    std::size_t win = w.Index(r.winner);
    std::size_t lose = w.Index(r.winner == r.speaker_a ? r.speaker_b : r.speaker_a);
    ++w.wins[win][lose];
  }
  return w;
}

BtmResult FitBradleyTerry(const WinMatrix &w, double tol, std::size_t max_iter) {
  const std::size_t n = w.speakers.size();
  if (n < 2) throw ValidationError("Bradley-Terry fit needs at least 2 speakers");
  auto comps = Components(w);
  if (comps.size() > 1) {
    std::string msg = "comparison graph is disconnected:";
    for (std::size_t c = 0; c < comps.size(); ++c) {
      msg += c ? " |" : "";
      msg += " {";
      for (std::size_t i = 0; i < comps[c].size(); ++i)
        msg += (i ? ", " : "") + w.speakers[comps[c][i]];
      msg += "}";
    }
    throw ValidationError(msg);
  }
  const bool finite_mle = StronglyConnected(w);

  std::vector<double> total_wins(n, 0.0);
  for (std::size_t i = 0; i < n; ++i)
    for (std::size_t j = 0; j < n; ++j) total_wins[i] += static_cast<double>(w.wins[i][j]);

  // Log-strengths; each MM update is gamma_i = W_i / sum_j n_ij / (gamma_i + gamma_j).
  std::vector<double> s(n, 0.0), next(n);
  BtmResult result;
  for (std::size_t it = 1; it <= max_iter; ++it) {
    for (std::size_t i = 0; i < n; ++i) {
      double denom = 0.0;
      for (std::size_t j = 0; j < n; ++j) {
        std::size_t nij = w.Trials(i, j);
        if (i == j || nij == 0) continue;
        // 1 / (gamma_i + gamma_j) scaled by gamma_i: 1 / (1 + exp(s_j - s_i)).
        denom += static_cast<double>(nij) / (1.0 + std::exp(s[j] - s[i]));
      }
      next[i] = total_wins[i] > 0.0 ? s[i] + std::log(total_wins[i] / denom)
                                    : -std::numeric_limits<double>::infinity();
    }
    // Keep strengths within a finite range, then fix the scale by centering.
    double top = *std::max_element(next.begin(), next.end());
    for (double &v : next) v = std::max(v, top - 2.0 * kBtmScoreClamp);
    double mean = std::accumulate(next.begin(), next.end(), 0.0) / static_cast<double>(n);
    double change = 0.0;
    for (std::size_t i = 0; i < n; ++i) {
      next[i] = std::clamp(next[i] - mean, -kBtmScoreClamp, kBtmScoreClamp);
      change = std::max(change, std::fabs(next[i] - s[i]));
    }
    s.swap(next);
    result.iterations = it;
    if (change < tol) {
      result.converged = finite_mle;
      break;
    }
  }
  for (std::size_t i = 0; i < n; ++i) result.scores[w.speakers[i]] = s[i];
  return result;
}

BtmResult FitBradleyTerry(const std::vector<PairwiseRecord> &records, double tol,
                          std::size_t max_iter) {
  return FitBradleyTerry(BuildWinMatrix(records), tol, max_iter);
}

}  // namespace prosody
