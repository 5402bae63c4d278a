// prosody/fft.h

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

#ifndef PROSODY_FFT_H_
#define PROSODY_FFT_H_

#include <cstddef>
#include <span>

namespace prosody {

// Real-input DFT of fixed size backed by FFTW. Instances own their buffers
// and plan; use one instance per thread.
class RealFft {
 public:
  explicit RealFft(std::size_t n);
  ~RealFft();
  RealFft(const RealFft &) = delete;
  RealFft &operator=(const RealFft &) = delete;

  std::size_t size() const { return n_; }
  std::size_t num_bins() const { return n_ / 2 + 1; }

  // |X_k|^2 for k = 0 .. n/2. Input shorter than n is zero-padded.
  void PowerSpectrum(std::span<const double> input, std::span<double> power);

  // Re X_k for k = 0 .. n/2. For an even-symmetric input this is the whole
  // transform, which is how the real cepstrum is computed.
  void RealPart(std::span<const double> input, std::span<double> real);

 private:
  void Execute(std::span<const double> input);

  std::size_t n_;
  double *in_;
  void *out_;   // fftw_complex[n/2 + 1]
  void *plan_;  // fftw_plan
};

std::size_t NextPowerOfTwo(std::size_t n);

}  // namespace prosody

#endif  // PROSODY_FFT_H_
