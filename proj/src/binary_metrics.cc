// prosody/binary_metrics.cc

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

#include "prosody/binary_metrics.h"

#include <algorithm>
#include <cmath>
#include <numbers>

#include "prosody/errors.h"

namespace prosody {

namespace {

void CheckShapes(const Bits &candidate, const std::vector<Bits> &refs) {
  if (refs.empty()) throw ValidationError("agreement needs at least one reference");
  for (std::size_t j = 0; j < refs.size(); ++j)
    if (refs[j].size() != candidate.size())
      throw ValidationError("reference " + std::to_string(j) + " has " +
                            std::to_string(refs[j].size()) + " words, candidate has " +
                            std::to_string(candidate.size()));
}

std::optional<double> Ratio(std::size_t num, std::size_t den) {
  if (den == 0) return std::nullopt;
  return static_cast<double>(num) / static_cast<double>(den);
}

}  // namespace

AgreementVector Agreement(const Bits &candidate, const std::vector<Bits> &refs) {
  CheckShapes(candidate, refs);
  AgreementVector a;
  a.m = refs.size();
  a.alpha.resize(candidate.size());
  for (std::size_t i = 0; i < candidate.size(); ++i) {
    std::size_t agree = 0;
    for (const Bits &r : refs) agree += (r[i] != 0) == (candidate[i] != 0);
    a.alpha[i] = static_cast<double>(agree) / static_cast<double>(a.m);
  }
  return a;
}

double ZeroOneLoss(const AgreementVector &a, double c) {
  if (a.alpha.empty()) return 0.0;
  std::size_t wrong = std::count_if(a.alpha.begin(), a.alpha.end(),
                                    [c](double x) { return x < c; });
  return static_cast<double>(wrong) / static_cast<double>(a.alpha.size());
}

double SmoothedCorrectness(double alpha) {
  double z = 4.0 * std::numbers::pi * alpha;
  return std::exp(-(z * z));
}

double SmoothedLoss(const AgreementVector &a) {
  if (a.alpha.empty()) return 0.0;
  double sum = 0.0;
  for (double x : a.alpha) sum += SmoothedCorrectness(x);
  return sum / static_cast<double>(a.alpha.size());
}

BinaryCounts &BinaryCounts::operator+=(const BinaryCounts &o) {
  words += o.words;
  incorrect += o.incorrect;
  smoothed_sum += o.smoothed_sum;
  predicted += o.predicted;
  predicted_correct += o.predicted_correct;
  reference_events += o.reference_events;
  return *this;
}

BinaryScore BinaryCounts::ToScore() const {
  BinaryScore s;
  if (words > 0) {
    s.zero_one_loss = static_cast<double>(incorrect) / static_cast<double>(words);
    s.smoothed_loss = smoothed_sum / static_cast<double>(words);
  }
  s.precision = Ratio(predicted_correct, predicted);
  s.recall = Ratio(predicted_correct, reference_events);
  if (s.precision && s.recall) {
    double p = *s.precision, r = *s.recall;
    s.f1 = p + r > 0.0 ? 2.0 * p * r / (p + r) : 0.0;
  }
  return s;
}

BinaryCounts CountBinary(const Bits &candidate, const std::vector<Bits> &refs,
                         double c) {
  AgreementVector a = Agreement(candidate, refs);
  BinaryCounts k;
  k.words = candidate.size();
  for (std::size_t i = 0; i < candidate.size(); ++i) {
    bool correct = a.alpha[i] >= c;
    k.incorrect += !correct;
    k.smoothed_sum += SmoothedCorrectness(a.alpha[i]);
    if (candidate[i]) {
      ++k.predicted;
      k.predicted_correct += correct;
    }
    std::size_t ones = 0;
    for (const Bits &r : refs) ones += r[i] != 0;
    k.reference_events += static_cast<double>(ones) / static_cast<double>(a.m) >= c;
  }
  return k;
}

BinaryScore ScoreBinary(const Bits &candidate, const std::vector<Bits> &refs,
                        double c) {
  return CountBinary(candidate, refs, c).ToScore();
}

std::vector<std::optional<double>> MinMaxNormalize(
    const std::vector<std::optional<double>> &values) {
  std::optional<double> lo, hi;
  for (const auto &v : values) {
    if (!v) continue;
    lo = lo ? std::min(*lo, *v) : *v;
    hi = hi ? std::max(*hi, *v) : *v;
  }
  std::vector<std::optional<double>> out(values.size());
  for (std::size_t i = 0; i < values.size(); ++i) {
    if (!values[i]) continue;
    out[i] = *hi > *lo ? (*values[i] - *lo) / (*hi - *lo) : 0.5;
  }
  return out;
}

}  // namespace prosody
