// prosody/events.h

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

#ifndef PROSODY_EVENTS_H_
#define PROSODY_EVENTS_H_

#include <cstdint>
#include <string>
#include <string_view>
#include <vector>

#include "prosody/alignment.h"
#include "prosody/features.h"

namespace prosody {

// One bit per word, 1 = prosodic event.
using Bits = std::vector<std::uint8_t>;

enum class EndpointPolicy { kInteriorOnly, kAllowEndpoints };

struct PeakConfig {
  int window_words = 7;         // odd, >= 3
  double rho_multiplier = 0.5;  // offset = multiplier * population std
  EndpointPolicy endpoint_policy = EndpointPolicy::kAllowEndpoints;

  void Validate() const;
};

// t_i = offset + median of x over [i - h/2, i + h/2] clipped to the signal.
// The offset is one value per signal. An even-sized clipped window takes the
// mean of its two middle values.
std::vector<double> MedianThreshold(const std::vector<double> &x,
                                    const PeakConfig &cfg);

// Words above their threshold that are strict local maxima. Invalid words
// are removed before thresholding (so neighbors skip over them) and come
// back as non-events.
Bits DetectPeaks(const std::vector<double> &x, const Mask &valid,
                 const PeakConfig &cfg);

inline constexpr double kDefaultMinPauseMs = 50.0;

Bits PauseEvents(const std::vector<double> &pause_ms,
                 double min_pause_ms = kDefaultMinPauseMs);
Bits PauseEvents(const AlignedUtterance &utt,
                 double min_pause_ms = kDefaultMinPauseMs);

// How the duration feature's binary tier is formed.
enum class DurationTier { kOrCombined, kDurationOnly, kPauseOnly };

std::string_view DurationTierName(DurationTier t);
DurationTier ParseDurationTier(std::string_view name);

struct EventOptions {
  PeakConfig peaks;
  DurationTier duration_tier = DurationTier::kOrCombined;
  double min_pause_ms = kDefaultMinPauseMs;
};

struct EventSeries {
  std::string speaker_id;
  std::string sentence_id;
  Feature feature = Feature::kDuration;
  Bits bits;
};

// Events for one feature of one utterance, from its raw (unnormalized)
// matrix. Peak picking is unaffected by positive affine rescaling, and
// pause thresholds are in milliseconds.
EventSeries FeatureEvents(const WordFeatureMatrix &raw, Feature feature,
                          const EventOptions &opts = {});

}  // namespace prosody

#endif  // PROSODY_EVENTS_H_
