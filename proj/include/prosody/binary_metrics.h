// prosody/binary_metrics.h

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

#ifndef PROSODY_BINARY_METRICS_H_
#define PROSODY_BINARY_METRICS_H_

#include <cstddef>
#include <optional>
#include <vector>

#include "prosody/events.h"

namespace prosody {

inline constexpr double kDefaultThreshold = 0.5;

// Fraction of reference speakers whose bit matches the candidate, per word.
struct AgreementVector {
  std::vector<double> alpha;
  std::size_t m = 0;  // number of references
};

// Throws ValidationError when no references are given or lengths differ.
AgreementVector Agreement(const Bits &candidate, const std::vector<Bits> &refs);

// Share of words with alpha < c. A word is correct iff alpha >= c.
double ZeroOneLoss(const AgreementVector &a, double c = kDefaultThreshold);

// exp(-(4 pi alpha)^2): 1 at total disagreement, negligible from alpha = 0.5.
double SmoothedCorrectness(double alpha);

// Mean SmoothedCorrectness over words.
double SmoothedLoss(const AgreementVector &a);

struct BinaryScore {
  double zero_one_loss = 0.0;
  double smoothed_loss = 0.0;
  std::optional<double> precision;  // null without predicted events
  std::optional<double> recall;     // null without majority reference events
  std::optional<double> f1;         // null iff precision or recall is null

  bool operator==(const BinaryScore &) const = default;
};

// Sufficient statistics of a BinaryScore; summing them pools words across
// sentences.
struct BinaryCounts {
  std::size_t words = 0;
  std::size_t incorrect = 0;          // alpha < c
  double smoothed_sum = 0.0;
  std::size_t predicted = 0;          // candidate bit set
  std::size_t predicted_correct = 0;  // candidate bit set and alpha >= c
  std::size_t reference_events = 0;   // reference mean >= c

  BinaryCounts &operator+=(const BinaryCounts &o);
  BinaryScore ToScore() const;
};

BinaryCounts CountBinary(const Bits &candidate, const std::vector<Bits> &refs,
                         double c = kDefaultThreshold);

BinaryScore ScoreBinary(const Bits &candidate, const std::vector<Bits> &refs,
                        double c = kDefaultThreshold);

// (v - min) / (max - min) over the non-null values; nulls stay null and a
// zero range maps every value to 0.5.
std::vector<std::optional<double>> MinMaxNormalize(
    const std::vector<std::optional<double>> &values);

}  // namespace prosody

#endif  // PROSODY_BINARY_METRICS_H_
