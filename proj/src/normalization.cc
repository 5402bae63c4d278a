// prosody/normalization.cc

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

#include "prosody/normalization.h"

#include <cmath>

namespace prosody {

MaskedMoments ComputeMoments(const std::vector<double> &values, const Mask &valid,
                             bool sample_std) {
  MaskedMoments m;
  double sum = 0.0;
  for (std::size_t i = 0; i < values.size(); ++i)
    if (valid[i]) {
      sum += values[i];
      ++m.count;
    }
  if (m.count == 0) return m;
  m.mean = sum / static_cast<double>(m.count);
  double ss = 0.0;
  for (std::size_t i = 0; i < values.size(); ++i)
    if (valid[i]) ss += (values[i] - m.mean) * (values[i] - m.mean);
  std::size_t dof = sample_std ? m.count - 1 : m.count;
  m.stddev = dof > 0 ? std::sqrt(ss / static_cast<double>(dof)) : 0.0;
  return m;
}

std::vector<double> ZScore(const std::vector<double> &values, const Mask &valid,
                           bool sample_std) {
  std::vector<double> out(values.size(), 0.0);
  MaskedMoments m = ComputeMoments(values, valid, sample_std);
  if (m.count < 2 || m.stddev < 1e-9) return out;
  for (std::size_t i = 0; i < values.size(); ++i)
    if (valid[i]) out[i] = (values[i] - m.mean) / m.stddev;
  return out;
}

WordFeatureMatrix ZNormalize(const WordFeatureMatrix &m,
                             const NormalizationOptions &opts) {
  WordFeatureMatrix out = m;
  for (Column c : kAllColumns) {
    if (opts.keep_raw[static_cast<std::size_t>(c)]) continue;
    out.Values(c) = ZScore(m.Values(c), m.Valid(c), opts.sample_std);
  }
  return out;
}

}  // namespace prosody
