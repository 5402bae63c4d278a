// prosody/fft.cc

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

#include "prosody/fft.h"

#include <fftw3.h>

#include <algorithm>
#include <mutex>
#include <new>

#include "prosody/errors.h"

namespace prosody {

namespace {
// FFTW's planner is not re-entrant; execution on distinct plans is.
std::mutex &PlannerMutex() {
  static std::mutex m;
  return m;
}
}  // namespace

RealFft::RealFft(std::size_t n) : n_(n) {
  if (n < 2) throw Error("FFT size must be at least 2");
  std::lock_guard<std::mutex> lock(PlannerMutex());
  in_ = fftw_alloc_real(n);
  auto *out = fftw_alloc_complex(n / 2 + 1);
  if (!in_ || !out) {
    fftw_free(in_);
    fftw_free(out);
    throw std::bad_alloc();
  }
  out_ = out;
  plan_ = fftw_plan_dft_r2c_1d(static_cast<int>(n), in_, out, FFTW_ESTIMATE);
}

RealFft::~RealFft() {
  std::lock_guard<std::mutex> lock(PlannerMutex());
  fftw_destroy_plan(static_cast<fftw_plan>(plan_));
  fftw_free(in_);
  fftw_free(static_cast<fftw_complex *>(out_));
}

void RealFft::Execute(std::span<const double> input) {
  std::size_t m = std::min(input.size(), n_);
  std::copy_n(input.begin(), m, in_);
  std::fill(in_ + m, in_ + n_, 0.0);
  fftw_execute(static_cast<fftw_plan>(plan_));
}

void RealFft::PowerSpectrum(std::span<const double> input,
                            std::span<double> power) {
  Execute(input);
  auto *out = static_cast<fftw_complex *>(out_);
  std::size_t bins = std::min(power.size(), num_bins());
  for (std::size_t k = 0; k < bins; ++k)
    power[k] = out[k][0] * out[k][0] + out[k][1] * out[k][1];
}

void RealFft::RealPart(std::span<const double> input, std::span<double> real) {
  Execute(input);
  auto *out = static_cast<fftw_complex *>(out_);
  std::size_t bins = std::min(real.size(), num_bins());
  for (std::size_t k = 0; k < bins; ++k) real[k] = out[k][0];
}

std::size_t NextPowerOfTwo(std::size_t n) {
  std::size_t p = 1;
  while (p < n) p <<= 1;
  return p;
}

}  // namespace prosody
