// prosody/dsp.h

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

#ifndef PROSODY_DSP_H_
#define PROSODY_DSP_H_

#include <cstddef>
#include <vector>

#include "prosody/alignment.h"
#include "prosody/audio.h"
#include "prosody/features.h"

namespace prosody {

struct AnalysisConfig {
  double frame_length_s = 0.040;
  double frame_step_s = 0.010;
  double pitch_floor_hz = 75.0;
  double pitch_ceiling_hz = 500.0;
  double intensity_floor_db = -120.0;
  double spectral_floor_db = -120.0;
  // Minimum normalized cross-correlation for a frame to count as voiced.
  double voicing_threshold = 0.45;
  // Penalty per octave of lag, so the shortest of equally strong period
  // candidates wins and subharmonics are not reported.
  double octave_cost = 0.01;
  int cpps_time_frames = 7;
  int cpps_quefrency_bins = 11;

  // Throws ValidationError on non-positive step, step > length,
  // floor >= ceiling or even/non-positive smoothing widths.
  void Validate() const;
};

// Frame-level measurement track. `mask` is per-frame validity; for F0 it is
// the voicing decision.
struct FrameTrack {
  std::vector<double> values;
  std::vector<double> frame_times_s;  // frame centers
  Mask mask;
};

// Sample-exact framing shared by every analysis: frame k covers samples
// [k*step, k*step + length), zero-padded past the end of the signal.
struct FrameLayout {
  std::size_t length = 0;
  std::size_t step = 0;
  std::size_t count = 0;
  int sample_rate_hz = 0;

  std::size_t Start(std::size_t k) const { return k * step; }
  double CenterSeconds(std::size_t k) const {
    return (static_cast<double>(Start(k)) + 0.5 * static_cast<double>(length)) /
           sample_rate_hz;
  }
};

FrameLayout MakeFrameLayout(const AudioBuffer &audio, const AnalysisConfig &cfg);

// Per-frame F0 by normalized cross-correlation over lags
// [sr/ceiling, sr/floor] with parabolic peak interpolation. Frames whose
// best correlation is below the voicing threshold, or whose frequency falls
// outside [floor, ceiling], are unvoiced (value 0, mask false).
FrameTrack EstimateF0(const AudioBuffer &audio, const AnalysisConfig &cfg);

// 10*log10 of the Hann-weighted mean square, in dB re full scale, clamped
// below at intensity_floor_db. Every frame is valid.
FrameTrack FrameIntensity(const AudioBuffer &audio, const AnalysisConfig &cfg);

struct SpectralTracks {
  FrameTrack alpha_ratio;  // level[1, 5 kHz) - level[50 Hz, 1 kHz)
  FrameTrack l1_l0;        // level[300, 800 Hz) - level[0, 300 Hz)
};

// Band levels from the Hann-windowed power spectrum (FFT size: next power of
// two >= 4x the frame length), bins assigned to half-open bands. Band levels
// are floored at spectral_floor_db. Silent frames are invalid; alpha ratio
// is invalid throughout when the sample rate is below 10 kHz.
SpectralTracks SpectralBandMeasures(const AudioBuffer &audio,
                                    const AnalysisConfig &cfg);

// Smoothed cepstral peak prominence in dB. Silent frames are invalid.
FrameTrack ComputeCpps(const AudioBuffer &audio, const AnalysisConfig &cfg);

struct FeatureTracks {
  int sample_rate_hz = 0;
  FrameTrack f0;
  FrameTrack intensity;
  FrameTrack alpha_ratio;
  FrameTrack l1_l0;
  FrameTrack cpps;
};

// All frame tracks of one recording; the power spectrogram is computed once
// and shared by the spectral measures and CPPS.
FeatureTracks ComputeTracks(const AudioBuffer &audio, const AnalysisConfig &cfg);

struct DurationColumns {
  std::vector<double> duration_ms;
  std::vector<double> pause_ms;  // silence following each word, 0 if none
};

DurationColumns ExtractDurations(const AlignedUtterance &utt);

// Averages each track over the frames whose centers fall in [start, end) of
// each word (F0 over voiced frames only; dB values averaged as dB). Entries
// with no qualifying frames, or words shorter than one frame step, are
// invalid.
WordFeatureMatrix AggregateToWords(const AlignedUtterance &utt,
                                   const FeatureTracks &tracks,
                                   const AnalysisConfig &cfg);

// ComputeTracks + AggregateToWords, after checking the audio covers the
// alignment.
WordFeatureMatrix ExtractWordFeatures(const AlignedUtterance &utt,
                                      const AudioBuffer &audio,
                                      const AnalysisConfig &cfg);

}  // namespace prosody

#endif  // PROSODY_DSP_H_
