// svkit/src/mfcc.cc

// Copyright 2026  svkit authors

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

#include "svkit/mfcc.h"

#include <cmath>
#include <numbers>

#include "svkit/stft.h"

namespace svkit {

MfccOptions MfccOptions::For(MfccVariant v) {
  MfccOptions o;
  if (v == MfccVariant::kXvector) {
    o.num_bins = 23;
    o.num_ceps = 23;
    o.low_freq = 20.0;
    o.high_freq = 3700.0;
  }
  return o;
}

namespace {
double MelScale(double f) { return 1127.0 * std::log(1.0 + f / 700.0); }
}  // namespace

Matrix MelFilterbank(const MfccOptions &opts, int fft_size, int sample_rate) {
  const int num_fft_bins = fft_size / 2 + 1;
  const double mel_lo = MelScale(opts.low_freq), mel_hi = MelScale(opts.high_freq);
  const double delta = (mel_hi - mel_lo) / (opts.num_bins + 1);
  Matrix fb = Matrix::Zero(opts.num_bins, num_fft_bins);
  for (int m = 0; m < opts.num_bins; ++m) {
    const double left = mel_lo + m * delta, center = left + delta,
                 right = center + delta;
    for (int k = 0; k < num_fft_bins; ++k) {
      const double mel = MelScale(static_cast<double>(k) * sample_rate / fft_size);
      if (mel > left && mel < right)
        fb(m, k) = mel <= center ? (mel - left) / (center - left)
                                 : (right - mel) / (right - center);
    }
  }
  return fb;
}

FeatureMatrix ComputeMfcc(const Waveform &w, MfccVariant variant) {
  return ComputeMfcc(w, MfccOptions::For(variant));
}

FeatureMatrix ComputeMfcc(const Waveform &w, const MfccOptions &opts) {
  if (w.sample_rate != 8000)
    throw DataError("MFCC extraction needs 8000 Hz audio, got " +
                    std::to_string(w.sample_rate));
  StftConfig cfg;  // 200/80/256 Hamming
  ComplexSpectrogram spec = Stft(w, cfg);
  const Matrix fb = MelFilterbank(opts, cfg.fft_size, w.sample_rate);
  const Matrix power = spec.frames.array().abs2().matrix();
  Matrix logmel = (power * fb.transpose()).array().max(1e-10).log().matrix();

  const int nb = opts.num_bins;
  Matrix dct(nb, opts.num_ceps);
  for (int i = 0; i < opts.num_ceps; ++i) {
    const double norm = i == 0 ? std::sqrt(1.0 / nb) : std::sqrt(2.0 / nb);
    for (int m = 0; m < nb; ++m)
      dct(m, i) = norm * std::cos(std::numbers::pi * i * (m + 0.5) / nb);
  }
  FeatureMatrix f;
  f.data = logmel * dct;
  f.frame_shift_ms = 10.0;
  f.descriptor = "mfcc" + std::to_string(opts.num_ceps);
  return f;
}

}  // namespace svkit
