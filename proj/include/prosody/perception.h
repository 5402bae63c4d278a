// prosody/perception.h

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

#ifndef PROSODY_PERCEPTION_H_
#define PROSODY_PERCEPTION_H_

#include <cstddef>
#include <map>
#include <optional>
#include <string>
#include <string_view>
#include <vector>

namespace prosody {

struct RatingRecord {
  std::string listener_id;
  std::string speaker_id;
  std::string sentence_id;
  int mos = 0;  // 1 .. 5
  bool judged_human = false;
};

struct PairwiseRecord {
  std::string listener_id;
  std::string sentence_id;
  std::string speaker_a;
  std::string speaker_b;
  std::string winner;  // speaker_a or speaker_b
};

// CSV with header listener,speaker,sentence,mos,judged_human. judged_human
// accepts true/false, yes/no or 1/0. Errors report the CSV line.
std::vector<RatingRecord> ParseRatings(std::string_view text);

// CSV with header listener,sentence,speaker_a,speaker_b,winner.
std::vector<PairwiseRecord> ParsePairs(std::string_view text);

struct MosSummary {
  std::string speaker_id;
  double mean = 0.0;
  std::optional<double> std_error;  // sample std / sqrt(n); null when n == 1
  std::size_t n = 0;
};

// Per speaker, sorted by mean (highest first, ties by id). Throws on an
// empty record set.
std::vector<MosSummary> SummarizeMos(const std::vector<RatingRecord> &records);

struct HumannessSummary {
  std::string speaker_id;
  double proportion = 0.0;
  std::size_t n = 0;
};

// Share of ratings judging the speaker human, sorted highest first.
std::vector<HumannessSummary> HumannessProportions(
    const std::vector<RatingRecord> &records);

// Pairwise win counts over the sorted set of speakers seen in the records.
struct WinMatrix {
  std::vector<std::string> speakers;
  std::vector<std::vector<std::size_t>> wins;  // wins[a][b]: a beat b

  std::size_t Index(std::string_view speaker) const;
  std::size_t Trials(std::size_t a, std::size_t b) const {
    return wins[a][b] + wins[b][a];
  }
  // wins / trials, null when a and b never met.
  std::optional<double> Proportion(std::size_t a, std::size_t b) const;
};

WinMatrix BuildWinMatrix(const std::vector<PairwiseRecord> &records);

inline constexpr double kBtmScoreClamp = 20.0;

struct BtmResult {
  std::map<std::string, double> scores;  // log-strengths summing to zero
  bool converged = false;
  std::size_t iterations = 0;
};

// Maximum-likelihood Bradley-Terry log-strengths by minorization-
// maximization. A disconnected comparison graph throws ValidationError
// naming its components. When the likelihood has no finite maximum (some
// group never loses to the rest) the result is flagged not converged and
// scores are clamped to +/-kBtmScoreClamp.
BtmResult FitBradleyTerry(const WinMatrix &wins, double tol = 1e-9,
                          std::size_t max_iter = 10000);
BtmResult FitBradleyTerry(const std::vector<PairwiseRecord> &records,
                          double tol = 1e-9, std::size_t max_iter = 10000);

}  // namespace prosody

#endif  // PROSODY_PERCEPTION_H_
