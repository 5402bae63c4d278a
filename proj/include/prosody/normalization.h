// prosody/normalization.h

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

#ifndef PROSODY_NORMALIZATION_H_
#define PROSODY_NORMALIZATION_H_

#include <array>
#include <vector>

#include "prosody/features.h"

namespace prosody {

struct NormalizationOptions {
  bool sample_std = false;  // divide by count - 1 instead of count
  // Columns left in their raw units. All columns are normalized by default.
  std::array<bool, kNumColumns> keep_raw{};
};

// Mean and standard deviation over the valid entries of `values`.
struct MaskedMoments {
  double mean = 0.0;
  double stddev = 0.0;
  std::size_t count = 0;
};

MaskedMoments ComputeMoments(const std::vector<double> &values, const Mask &valid,
                             bool sample_std = false);

// z-scores of the valid entries. With fewer than two valid entries or a
// spread below 1e-9 every entry becomes 0. Invalid entries are set to 0;
// validity is the caller's mask, unchanged.
std::vector<double> ZScore(const std::vector<double> &values, const Mask &valid,
                           bool sample_std = false);

// Applies ZScore to each column of one (speaker, sentence) matrix.
WordFeatureMatrix ZNormalize(const WordFeatureMatrix &m,
                             const NormalizationOptions &opts = {});

}  // namespace prosody

#endif  // PROSODY_NORMALIZATION_H_
