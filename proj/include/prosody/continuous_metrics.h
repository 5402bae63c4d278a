// prosody/continuous_metrics.h

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

#ifndef PROSODY_CONTINUOUS_METRICS_H_
#define PROSODY_CONTINUOUS_METRICS_H_

#include <cstddef>
#include <optional>
#include <vector>

#include "prosody/features.h"

namespace prosody {

// A word-level signal with its validity mask.
struct Signal {
  std::vector<double> values;
  Mask valid;
};

inline constexpr double kMinReferenceStd = 1e-9;

// Per-word moments of the valid reference values. A word is scorable when it
// has at least two valid values and a spread of at least kMinReferenceStd.
struct ReferenceDistribution {
  std::vector<double> mean;
  std::vector<double> stddev;
  std::vector<std::size_t> count;
  Mask scorable;

  std::size_t NumWords() const { return mean.size(); }
};

// Throws ValidationError with fewer than two signals or unequal lengths.
ReferenceDistribution BuildReference(const std::vector<Signal> &refs,
                                     bool sample_std = false);

// Squared z-score total over the scorable, valid words of a candidate.
struct ErrorSum {
  double sum = 0.0;
  std::size_t words = 0;

  ErrorSum &operator+=(const ErrorSum &o) {
    sum += o.sum;
    words += o.words;
    return *this;
  }
  std::optional<double> Mean() const {
    if (words == 0) return std::nullopt;
    return sum / static_cast<double>(words);
  }
};

ErrorSum AccumulateError(const Signal &candidate, const ReferenceDistribution &ref);

// Mean squared z-score of the candidate against the reference; null when no
// word is scorable.
std::optional<double> NormalizedError(const Signal &candidate,
                                      const ReferenceDistribution &ref);

}  // namespace prosody

#endif  // PROSODY_CONTINUOUS_METRICS_H_
