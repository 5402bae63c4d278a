// prosody/events.cc

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

#include "prosody/events.h"

#include <algorithm>
#include <cmath>

#include "prosody/dsp.h"
#include "prosody/errors.h"
#include "prosody/normalization.h"

namespace prosody {

namespace {

double Median(std::vector<double> v) {
  std::sort(v.begin(), v.end());
  std::size_t n = v.size();
  return n % 2 ? v[n / 2] : 0.5 * (v[n / 2 - 1] + v[n / 2]);
}

double PopulationStd(const std::vector<double> &x) {
  return ComputeMoments(x, Mask(x.size(), true)).stddev;
}

}  // namespace

void PeakConfig::Validate() const {
  if (window_words < 3 || window_words % 2 == 0)
    throw ValidationError("peak window must be odd and at least 3 words, got " +
                          std::to_string(window_words));
  if (!std::isfinite(rho_multiplier))
    throw ValidationError("threshold offset multiplier must be finite");
}

std::vector<double> MedianThreshold(const std::vector<double> &x,
                                    const PeakConfig &cfg) {
  cfg.Validate();
  const auto n = static_cast<std::ptrdiff_t>(x.size());
  const std::ptrdiff_t half = cfg.window_words / 2;
  const double offset = n ? cfg.rho_multiplier * PopulationStd(x) : 0.0;
  std::vector<double> t(x.size());
  for (std::ptrdiff_t i = 0; i < n; ++i) {
    auto lo = x.begin() + std::max<std::ptrdiff_t>(0, i - half);
    auto hi = x.begin() + std::min<std::ptrdiff_t>(n, i + half + 1);
    t[static_cast<std::size_t>(i)] = offset + Median(std::vector<double>(lo, hi));
  }
  return t;
}

Bits DetectPeaks(const std::vector<double> &x, const Mask &valid,
                 const PeakConfig &cfg) {
  if (x.size() != valid.size())
    throw ValidationError("signal and mask lengths differ");
  std::vector<double> kept;
  std::vector<std::size_t> where;
  for (std::size_t i = 0; i < x.size(); ++i)
    if (valid[i]) {
      kept.push_back(x[i]);
      where.push_back(i);
    }
  Bits bits(x.size(), 0);
  if (kept.empty()) {
    cfg.Validate();
    return bits;
  }
  std::vector<double> t = MedianThreshold(kept, cfg);
  const std::size_t n = kept.size();
  const bool endpoints = cfg.endpoint_policy == EndpointPolicy::kAllowEndpoints;
  for (std::size_t i = 0; i < n; ++i) {
    if (!(kept[i] > t[i])) continue;
    bool has_left = i > 0, has_right = i + 1 < n;
    if (!has_left && !has_right) continue;
    if ((!has_left || !has_right) && !endpoints) continue;
    if (has_left && !(kept[i] > kept[i - 1])) continue;
    if (has_right && !(kept[i] > kept[i + 1])) continue;
    bits[where[i]] = 1;
  }
  return bits;
}

Bits PauseEvents(const std::vector<double> &pause_ms, double min_pause_ms) {
  Bits bits(pause_ms.size(), 0);
  for (std::size_t i = 0; i < pause_ms.size(); ++i)
    bits[i] = pause_ms[i] >= min_pause_ms ? 1 : 0;
  return bits;
}

Bits PauseEvents(const AlignedUtterance &utt, double min_pause_ms) {
  return PauseEvents(ExtractDurations(utt).pause_ms, min_pause_ms);
}

std::string_view DurationTierName(DurationTier t) {
  switch (t) {
    case DurationTier::kOrCombined: return "or_combined";
    case DurationTier::kDurationOnly: return "duration_only";
    case DurationTier::kPauseOnly: return "pause_only";
  }
  return "?";
}

DurationTier ParseDurationTier(std::string_view name) {
  for (DurationTier t : {DurationTier::kOrCombined, DurationTier::kDurationOnly,
                         DurationTier::kPauseOnly})
    if (name == DurationTierName(t)) return t;
  throw ValidationError("unknown duration tier '" + std::string(name) +
                        "' (expected or_combined, duration_only or pause_only)");
}

EventSeries FeatureEvents(const WordFeatureMatrix &raw, Feature feature,
                          const EventOptions &opts) {
  EventSeries ev{raw.speaker_id, raw.sentence_id, feature, {}};
  Column col = FeatureColumn(feature);
  if (feature != Feature::kDuration) {
    ev.bits = DetectPeaks(raw.Values(col), raw.Valid(col), opts.peaks);
    return ev;
  }
  Bits pauses = PauseEvents(raw.Values(Column::kPauseMs), opts.min_pause_ms);
  switch (opts.duration_tier) {
    case DurationTier::kPauseOnly:
      ev.bits = std::move(pauses);
      break;
    case DurationTier::kDurationOnly:
      ev.bits = DetectPeaks(raw.Values(col), raw.Valid(col), opts.peaks);
      break;
    case DurationTier::kOrCombined:
      ev.bits = DetectPeaks(raw.Values(col), raw.Valid(col), opts.peaks);
      for (std::size_t i = 0; i < ev.bits.size(); ++i) ev.bits[i] |= pauses[i];
      break;
  }
  return ev;
}

}  // namespace prosody
