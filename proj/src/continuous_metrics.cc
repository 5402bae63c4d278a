// prosody/continuous_metrics.cc

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

#include "prosody/continuous_metrics.h"

#include <cmath>
#include <string>

#include "prosody/errors.h"

namespace prosody {

ReferenceDistribution BuildReference(const std::vector<Signal> &refs,
                                     bool sample_std) {
  if (refs.size() < 2)
    throw ValidationError("a reference distribution needs at least 2 speakers, got " +
                          std::to_string(refs.size()));
  const std::size_t n = refs[0].values.size();
  for (const Signal &s : refs)
    if (s.values.size() != n || s.valid.size() != n)
      throw ValidationError("reference signals differ in length");
  ReferenceDistribution d;
  d.mean.assign(n, 0.0);
  d.stddev.assign(n, 0.0);
  d.count.assign(n, 0);
  d.scorable.assign(n, false);
  for (std::size_t i = 0; i < n; ++i) {
    double sum = 0.0;
    std::size_t k = 0;
    for (const Signal &s : refs)
      if (s.valid[i]) {
        sum += s.values[i];
        ++k;
      }
    d.count[i] = k;
    if (k == 0) continue;
    double mean = sum / static_cast<double>(k);
    double ss = 0.0;
    for (const Signal &s : refs)
      if (s.valid[i]) ss += (s.values[i] - mean) * (s.values[i] - mean);
    std::size_t dof = sample_std ? k - 1 : k;
    d.mean[i] = mean;
    d.stddev[i] = dof > 0 ? std::sqrt(ss / static_cast<double>(dof)) : 0.0;
    d.scorable[i] = k >= 2 && d.stddev[i] >= kMinReferenceStd;
  }
  return d;
}

ErrorSum AccumulateError(const Signal &candidate, const ReferenceDistribution &ref) {
  if (candidate.values.size() != ref.NumWords() ||
      candidate.valid.size() != ref.NumWords())
    throw ValidationError("candidate has " + std::to_string(candidate.values.size()) +
                          " words, reference has " + std::to_string(ref.NumWords()));
  ErrorSum e;
  for (std::size_t i = 0; i < ref.NumWords(); ++i) {
    if (!ref.scorable[i] || !candidate.valid[i]) continue;
    double z = (candidate.values[i] - ref.mean[i]) / ref.stddev[i];
    e.sum += z * z;
    ++e.words;
  }
  return e;
}

std::optional<double> NormalizedError(const Signal &candidate,
                                      const ReferenceDistribution &ref) {
  return AccumulateError(candidate, ref).Mean();
}

}  // namespace prosody
