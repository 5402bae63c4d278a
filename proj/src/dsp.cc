// prosody/dsp.cc

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

#include "prosody/dsp.h"

#include <algorithm>
#include <cmath>
#include <numbers>
#include <numeric>

#include "prosody/corpus.h"
#include "prosody/errors.h"
#include "prosody/fft.h"

namespace prosody {

namespace {

constexpr double kTiny = 1e-30;

std::vector<double> HannWindow(std::size_t n) {
  std::vector<double> w(n, 1.0);
  if (n < 2) return w;
  for (std::size_t i = 0; i < n; ++i)
    w[i] = 0.5 - 0.5 * std::cos(2.0 * std::numbers::pi * static_cast<double>(i) /
                                static_cast<double>(n - 1));
  return w;
}

// Copies frame k into `frame` (size layout.length), zero-padding past the end.
void GetFrame(const AudioBuffer &audio, const FrameLayout &layout, std::size_t k,
              std::vector<double> *frame) {
  frame->assign(layout.length, 0.0);
  std::size_t start = layout.Start(k);
  if (start >= audio.samples.size()) return;
  std::size_t m = std::min(layout.length, audio.samples.size() - start);
  std::copy_n(audio.samples.begin() + static_cast<std::ptrdiff_t>(start), m,
              frame->begin());
}

FrameTrack EmptyTrack(const FrameLayout &layout) {
  FrameTrack t;
  t.values.assign(layout.count, 0.0);
  t.mask.assign(layout.count, false);
  t.frame_times_s.resize(layout.count);
  for (std::size_t k = 0; k < layout.count; ++k)
    t.frame_times_s[k] = layout.CenterSeconds(k);
  return t;
}

struct PowerSpectrogram {
  std::size_t nfft = 0;
  double window_power = 0.0;          // sum of squared window weights
  std::vector<double> frame_energy;   // sum of squared windowed samples
  std::vector<std::vector<double>> power;  // |X_k|^2, k = 0 .. nfft/2
};

PowerSpectrogram ComputePowerSpectrogram(const AudioBuffer &audio,
                                         const FrameLayout &layout) {
  PowerSpectrogram spec;
  spec.nfft = NextPowerOfTwo(4 * layout.length);
  std::vector<double> window = HannWindow(layout.length);
  for (double w : window) spec.window_power += w * w;
  RealFft fft(spec.nfft);
  spec.frame_energy.resize(layout.count);
  spec.power.resize(layout.count);
  std::vector<double> frame;
  for (std::size_t k = 0; k < layout.count; ++k) {
    GetFrame(audio, layout, k, &frame);
    double energy = 0.0;
    for (std::size_t i = 0; i < frame.size(); ++i) {
      frame[i] *= window[i];
      energy += frame[i] * frame[i];
    }
    spec.frame_energy[k] = energy;
    spec.power[k].assign(fft.num_bins(), 0.0);
    if (energy > 0.0) fft.PowerSpectrum(frame, spec.power[k]);
  }
  return spec;
}

double BandEnergy(const std::vector<double> &power, double bin_hz, double lo_hz,
                  double hi_hz) {
  auto first = static_cast<std::size_t>(std::max(0.0, std::ceil(lo_hz / bin_hz)));
  double e = 0.0;
  for (std::size_t k = first; k < power.size(); ++k) {
    double f = static_cast<double>(k) * bin_hz;
    if (f < lo_hz) continue;
    if (f >= hi_hz) break;
    e += power[k];
  }
  return e;
}

SpectralTracks BandMeasuresFromSpectrogram(const PowerSpectrogram &spec,
                                           const FrameLayout &layout,
                                           const AnalysisConfig &cfg) {
  SpectralTracks out{EmptyTrack(layout), EmptyTrack(layout)};
  const double sr = layout.sample_rate_hz;
  const double bin_hz = sr / static_cast<double>(spec.nfft);
  const bool alpha_ok = sr >= 10000.0;
  // One-sided band energy -> mean square re full scale.
  const double scale = 2.0 / (static_cast<double>(spec.nfft) * spec.window_power);
  auto level = [&](double e) {
    double db = e > 0.0 ? 10.0 * std::log10(e * scale) : cfg.spectral_floor_db;
    return std::max(db, cfg.spectral_floor_db);
  };
  for (std::size_t k = 0; k < layout.count; ++k) {
    if (!(spec.frame_energy[k] > 0.0)) continue;
    const std::vector<double> &p = spec.power[k];
    if (alpha_ok) {
      out.alpha_ratio.values[k] = level(BandEnergy(p, bin_hz, 1000.0, 5000.0)) -
                                  level(BandEnergy(p, bin_hz, 50.0, 1000.0));
      out.alpha_ratio.mask[k] = true;
    }
    out.l1_l0.values[k] = level(BandEnergy(p, bin_hz, 300.0, 800.0)) -
                          level(BandEnergy(p, bin_hz, 0.0, 300.0));
    out.l1_l0.mask[k] = true;
  }
  return out;
}

// Moving average over a centered window of `width` items, shrinking at the
// ends.
std::vector<double> CenteredMean(const std::vector<double> &x, int width) {
  const auto n = static_cast<std::ptrdiff_t>(x.size());
  const std::ptrdiff_t half = width / 2;
  std::vector<double> prefix(x.size() + 1, 0.0);
  for (std::size_t i = 0; i < x.size(); ++i) prefix[i + 1] = prefix[i] + x[i];
  std::vector<double> out(x.size());
  for (std::ptrdiff_t i = 0; i < n; ++i) {
    std::ptrdiff_t lo = std::max<std::ptrdiff_t>(0, i - half);
    std::ptrdiff_t hi = std::min<std::ptrdiff_t>(n - 1, i + half);
    out[static_cast<std::size_t>(i)] =
        (prefix[static_cast<std::size_t>(hi + 1)] - prefix[static_cast<std::size_t>(lo)]) /
        static_cast<double>(hi - lo + 1);
  }
  return out;
}

FrameTrack CppsFromSpectrogram(const PowerSpectrogram &spec,
                               const FrameLayout &layout,
                               const AnalysisConfig &cfg) {
  FrameTrack track = EmptyTrack(layout);
  const std::size_t nfft = spec.nfft;
  const std::size_t nq = nfft / 2 + 1;
  const double sr = layout.sample_rate_hz;

  // Power cepstrum per frame: square of the real cepstrum of the dB
  // spectrum. The dB spectrum is floored relative to its own maximum so the
  // result does not depend on overall level.
  RealFft fft(nfft);
  std::vector<std::vector<double>> ceps(layout.count, std::vector<double>(nq, 0.0));
  std::vector<double> symmetric(nfft), real(nq);
  const double floor_ratio = std::pow(10.0, cfg.spectral_floor_db / 10.0);
  for (std::size_t k = 0; k < layout.count; ++k) {
    if (!(spec.frame_energy[k] > 0.0)) continue;
    const std::vector<double> &p = spec.power[k];
    double pmax = *std::max_element(p.begin(), p.end());
    double pfloor = std::max(pmax * floor_ratio, kTiny);
    for (std::size_t j = 0; j < nfft; ++j) {
      std::size_t bin = j <= nfft / 2 ? j : nfft - j;
      symmetric[j] = 10.0 * std::log10(std::max(p[bin], pfloor));
    }
    fft.RealPart(symmetric, real);
    for (std::size_t q = 0; q < nq; ++q) {
      double c = real[q] / static_cast<double>(nfft);
      ceps[k][q] = c * c;
    }
    track.mask[k] = true;
  }

  // Smooth across time, then across quefrency.
  std::vector<double> column(layout.count);
  for (std::size_t q = 0; q < nq; ++q) {
    for (std::size_t k = 0; k < layout.count; ++k) column[k] = ceps[k][q];
    std::vector<double> smoothed = CenteredMean(column, cfg.cpps_time_frames);
    for (std::size_t k = 0; k < layout.count; ++k) ceps[k][q] = smoothed[k];
  }

  const auto peak_lo = static_cast<std::size_t>(std::floor(sr / cfg.pitch_ceiling_hz));
  const auto peak_hi =
      std::min(nq - 1, static_cast<std::size_t>(std::ceil(sr / cfg.pitch_floor_hz)));
  const auto fit_lo = std::max<std::size_t>(1, static_cast<std::size_t>(std::lround(0.001 * sr)));
  const std::size_t fit_hi = std::min(nq - 1, layout.length);

  for (std::size_t k = 0; k < layout.count; ++k) {
    if (!track.mask[k]) continue;
    std::vector<double> db = CenteredMean(ceps[k], cfg.cpps_quefrency_bins);
    for (double &v : db) v = 10.0 * std::log10(v + kTiny);

    // Least-squares trend line of dB against quefrency (s).
    double sx = 0, sy = 0, sxx = 0, sxy = 0;
    std::size_t n = 0;
    for (std::size_t q = fit_lo; q <= fit_hi; ++q) {
      double x = static_cast<double>(q) / sr;
      sx += x;
      sy += db[q];
      sxx += x * x;
      sxy += x * db[q];
      ++n;
    }
    double denom = static_cast<double>(n) * sxx - sx * sx;
    double slope = denom > 0 ? (static_cast<double>(n) * sxy - sx * sy) / denom : 0.0;
    double intercept = n > 0 ? (sy - slope * sx) / static_cast<double>(n) : 0.0;

    std::size_t best = peak_lo;
    for (std::size_t q = peak_lo; q <= peak_hi; ++q)
      if (db[q] > db[best]) best = q;
    double trend = intercept + slope * static_cast<double>(best) / sr;
    track.values[k] = db[best] - trend;
  }
  return track;
}

}  // namespace

void AnalysisConfig::Validate() const {
  if (!(frame_step_s > 0.0) || !(frame_length_s >= frame_step_s))
    throw ValidationError("analysis frames need 0 < step <= length");
  if (!(pitch_floor_hz > 0.0) || !(pitch_floor_hz < pitch_ceiling_hz))
    throw ValidationError("pitch floor must be positive and below the ceiling");
  if (cpps_time_frames < 1 || cpps_time_frames % 2 == 0 ||
      cpps_quefrency_bins < 1 || cpps_quefrency_bins % 2 == 0)
    throw ValidationError("CPPS smoothing widths must be odd and positive");
}

FrameLayout MakeFrameLayout(const AudioBuffer &audio, const AnalysisConfig &cfg) {
  cfg.Validate();
  if (audio.sample_rate_hz <= 0 || audio.samples.empty())
    throw ValidationError("audio is empty");
  FrameLayout layout;
  layout.sample_rate_hz = audio.sample_rate_hz;
  layout.length = std::max<std::size_t>(
      2, static_cast<std::size_t>(std::lround(cfg.frame_length_s * audio.sample_rate_hz)));
  layout.step = std::max<std::size_t>(
      1, static_cast<std::size_t>(std::lround(cfg.frame_step_s * audio.sample_rate_hz)));
  std::size_t n = audio.samples.size();
  layout.count = n >= layout.length ? (n - layout.length) / layout.step + 1 : 1;
  return layout;
}

FrameTrack EstimateF0(const AudioBuffer &audio, const AnalysisConfig &cfg) {
  const FrameLayout layout = MakeFrameLayout(audio, cfg);
  FrameTrack track = EmptyTrack(layout);
  const double sr = audio.sample_rate_hz;
  const auto min_lag = std::max<std::ptrdiff_t>(
      2, static_cast<std::ptrdiff_t>(std::floor(sr / cfg.pitch_ceiling_hz)));
  const auto max_lag = static_cast<std::ptrdiff_t>(std::ceil(sr / cfg.pitch_floor_hz));
  const auto len = static_cast<std::ptrdiff_t>(layout.length);
  // Correlation span: the frame minus the largest lag examined (max_lag + 1
  // for interpolation).
  const std::ptrdiff_t span = len - max_lag - 1;
  if (span < 8) return track;

  std::vector<double> frame, r(static_cast<std::size_t>(max_lag + 2), 0.0);
  std::vector<double> prefix(layout.length + 1);
  for (std::size_t k = 0; k < layout.count; ++k) {
    GetFrame(audio, layout, k, &frame);
    double mean = std::accumulate(frame.begin(), frame.end(), 0.0) /
                  static_cast<double>(frame.size());
    for (double &v : frame) v -= mean;
    prefix[0] = 0.0;
    for (std::size_t i = 0; i < frame.size(); ++i)
      prefix[i + 1] = prefix[i] + frame[i] * frame[i];
    const double e0 = prefix[static_cast<std::size_t>(span)];
    if (!(e0 > 1e-20)) continue;

    for (std::ptrdiff_t lag = min_lag - 1; lag <= max_lag + 1; ++lag) {
      double el = prefix[static_cast<std::size_t>(lag + span)] -
                  prefix[static_cast<std::size_t>(lag)];
      double acc = 0.0;
      for (std::ptrdiff_t t = 0; t < span; ++t)
        acc += frame[static_cast<std::size_t>(t)] * frame[static_cast<std::size_t>(t + lag)];
      r[static_cast<std::size_t>(lag)] = el > 1e-20 ? acc / std::sqrt(e0 * el) : 0.0;
    }

    double best_score = -std::numeric_limits<double>::infinity();
    double best_lag = 0.0, best_peak = 0.0;
    for (std::ptrdiff_t lag = min_lag; lag <= max_lag; ++lag) {
      double prev = r[static_cast<std::size_t>(lag - 1)];
      double cur = r[static_cast<std::size_t>(lag)];
      double next = r[static_cast<std::size_t>(lag + 1)];
      if (!(cur >= prev && cur > next) || cur <= 0.0) continue;
      double curvature = prev - 2.0 * cur + next;
      double delta = curvature < 0.0 ? 0.5 * (prev - next) / curvature : 0.0;
      delta = std::clamp(delta, -0.5, 0.5);
      double peak = cur - 0.25 * (prev - next) * delta;
      double refined = static_cast<double>(lag) + delta;
      double score =
          peak - cfg.octave_cost * std::log2(cfg.pitch_floor_hz * refined / sr);
      if (score > best_score) {
        best_score = score;
        best_lag = refined;
        best_peak = peak;
      }
    }
    if (best_lag <= 0.0 || best_peak < cfg.voicing_threshold) continue;
    double f0 = sr / best_lag;
    if (f0 < cfg.pitch_floor_hz || f0 > cfg.pitch_ceiling_hz) continue;
    track.values[k] = f0;
    track.mask[k] = true;
  }
  return track;
}

FrameTrack FrameIntensity(const AudioBuffer &audio, const AnalysisConfig &cfg) {
  const FrameLayout layout = MakeFrameLayout(audio, cfg);
  FrameTrack track = EmptyTrack(layout);
  std::vector<double> window = HannWindow(layout.length);
  double wpow = 0.0;
  for (double w : window) wpow += w * w;
  std::vector<double> frame;
  for (std::size_t k = 0; k < layout.count; ++k) {
    GetFrame(audio, layout, k, &frame);
    double acc = 0.0;
    for (std::size_t i = 0; i < frame.size(); ++i) {
      double v = frame[i] * window[i];
      acc += v * v;
    }
    double db = acc > 0.0 ? 10.0 * std::log10(acc / wpow) : cfg.intensity_floor_db;
    track.values[k] = std::max(db, cfg.intensity_floor_db);
    track.mask[k] = true;
  }
  return track;
}

SpectralTracks SpectralBandMeasures(const AudioBuffer &audio,
                                    const AnalysisConfig &cfg) {
  const FrameLayout layout = MakeFrameLayout(audio, cfg);
  return BandMeasuresFromSpectrogram(ComputePowerSpectrogram(audio, layout), layout,
                                     cfg);
}

FrameTrack ComputeCpps(const AudioBuffer &audio, const AnalysisConfig &cfg) {
  const FrameLayout layout = MakeFrameLayout(audio, cfg);
  return CppsFromSpectrogram(ComputePowerSpectrogram(audio, layout), layout, cfg);
}

FeatureTracks ComputeTracks(const AudioBuffer &audio, const AnalysisConfig &cfg) {
  const FrameLayout layout = MakeFrameLayout(audio, cfg);
  PowerSpectrogram spec = ComputePowerSpectrogram(audio, layout);
  FeatureTracks tracks;
  tracks.sample_rate_hz = audio.sample_rate_hz;
  tracks.f0 = EstimateF0(audio, cfg);
  tracks.intensity = FrameIntensity(audio, cfg);
  SpectralTracks bands = BandMeasuresFromSpectrogram(spec, layout, cfg);
  tracks.alpha_ratio = std::move(bands.alpha_ratio);
  tracks.l1_l0 = std::move(bands.l1_l0);
  tracks.cpps = CppsFromSpectrogram(spec, layout, cfg);
  return tracks;
}

DurationColumns ExtractDurations(const AlignedUtterance &utt) {
  constexpr double kTol = 1e-9;
  const std::size_t n = utt.words.size();
  DurationColumns out;
  out.duration_ms.resize(n);
  out.pause_ms.assign(n, 0.0);
  for (std::size_t i = 0; i < n; ++i) {
    const WordInterval &w = utt.words[i];
    out.duration_ms[i] = (w.end_s - w.start_s) * 1000.0;
    double next_start = i + 1 < n ? utt.words[i + 1].start_s
                                  : std::numeric_limits<double>::infinity();
    for (const Interval &s : utt.silences)
      if (s.start_s >= w.end_s - kTol && s.end_s <= next_start + kTol)
        out.pause_ms[i] += (s.end_s - s.start_s) * 1000.0;
  }
  return out;
}

WordFeatureMatrix AggregateToWords(const AlignedUtterance &utt,
                                   const FeatureTracks &tracks,
                                   const AnalysisConfig &cfg) {
  std::vector<std::string> tokens;
  for (const WordInterval &w : utt.words) tokens.push_back(w.token);
  WordFeatureMatrix m =
      WordFeatureMatrix::Zeros(utt.speaker_id, utt.sentence_id, std::move(tokens));
  DurationColumns d = ExtractDurations(utt);
  m.Values(Column::kDurationMs) = d.duration_ms;
  m.Values(Column::kPauseMs) = d.pause_ms;

  const double sr = tracks.sample_rate_hz;
  // Frame centers sit on whole or half samples; compare in half-sample units
  // so boundary frames are assigned identically however the times were
  // computed.
  auto half_samples = [sr](double t) { return std::llround(2.0 * t * sr); };
  struct Source {
    Column column;
    const FrameTrack *track;
  };
  const Source sources[] = {{Column::kF0Hz, &tracks.f0},
                            {Column::kIntensityDb, &tracks.intensity},
                            {Column::kAlphaRatioDb, &tracks.alpha_ratio},
                            {Column::kL1L0Db, &tracks.l1_l0},
                            {Column::kCppsDb, &tracks.cpps}};

  for (std::size_t i = 0; i < utt.words.size(); ++i) {
    const WordInterval &w = utt.words[i];
    const bool too_short = w.end_s - w.start_s < cfg.frame_step_s;
    const long long lo = 2 * std::llround(w.start_s * sr);
    const long long hi = 2 * std::llround(w.end_s * sr);
    for (const Source &src : sources) {
      double sum = 0.0;
      std::size_t count = 0;
      if (!too_short) {
        const FrameTrack &t = *src.track;
        for (std::size_t k = 0; k < t.values.size(); ++k) {
          long long c = half_samples(t.frame_times_s[k]);
          if (c < lo) continue;
          if (c >= hi) break;
          if (!t.mask[k]) continue;
          sum += t.values[k];
          ++count;
        }
      }
      m.Values(src.column)[i] = count ? sum / static_cast<double>(count) : 0.0;
      m.Valid(src.column)[i] = count > 0;
    }
  }
  return m;
}

WordFeatureMatrix ExtractWordFeatures(const AlignedUtterance &utt,
                                      const AudioBuffer &audio,
                                      const AnalysisConfig &cfg) {
  CheckAudioCovers(utt, audio);
  return AggregateToWords(utt, ComputeTracks(audio, cfg), cfg);
}

}  // namespace prosody
