// svkit/src/stft.cc

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

#include "svkit/stft.h"

#include <cmath>
#include <numbers>

#include "svkit/dft.h"

namespace svkit {

void StftConfig::Validate() const {
  if (!(hop > 0 && hop <= window_length && window_length <= fft_size))
    throw DataError("STFT config needs 0 < hop <= window_length <= fft_size");
  if ((fft_size & (fft_size - 1)) != 0)
    throw DataError("STFT fft_size must be a power of two");
}

std::vector<double> MakeWindow(WindowShape shape, int length) {
  std::vector<double> w(length, 1.0);
  if (length == 1 || shape == WindowShape::kRectangular) return w;
  const double a = shape == WindowShape::kHamming ? 0.54 : 0.5;
  for (int n = 0; n < length; ++n)
    w[n] = a - (1.0 - a) * std::cos(2.0 * std::numbers::pi * n / (length - 1));
  return w;
}

Eigen::Index NumFrames(size_t num_samples, int window_length, int hop) {
  if (num_samples < static_cast<size_t>(window_length)) return 0;
  return static_cast<Eigen::Index>((num_samples - window_length) / hop) + 1;
}

ComplexSpectrogram Stft(const Waveform &w, const StftConfig &cfg) {
  cfg.Validate();
  if (w.size() < static_cast<size_t>(cfg.window_length))
    throw DataError("signal of " + std::to_string(w.size()) +
                    " samples is shorter than one STFT window");
  const Eigen::Index n = NumFrames(w.size(), cfg.window_length, cfg.hop);
  const std::vector<double> win = MakeWindow(cfg.window_shape, cfg.window_length);
  ComplexSpectrogram out;
  out.config = cfg;
  out.sample_rate = w.sample_rate;
  out.frames.resize(n, cfg.NumBins());
  RealDft dft(cfg.fft_size);
  std::vector<double> buf(cfg.window_length);
  std::vector<std::complex<double>> spec(cfg.NumBins());
  for (Eigen::Index t = 0; t < n; ++t) {
    const double *x = w.samples.data() + t * cfg.hop;
    for (int i = 0; i < cfg.window_length; ++i) buf[i] = x[i] * win[i];
    dft.Forward(buf.data(), buf.size(), spec.data());
    for (int k = 0; k < cfg.NumBins(); ++k) out.frames(t, k) = spec[k];
  }
  return out;
}

Waveform Istft(const ComplexSpectrogram &s) {
  const StftConfig &cfg = s.config;
  cfg.Validate();
  if (s.frames.cols() != cfg.NumBins())
    throw DataError("spectrogram has " + std::to_string(s.frames.cols()) +
                    " bins, config implies " + std::to_string(cfg.NumBins()));
  if (s.NumFrames() == 0) throw DataError("spectrogram has no frames");
  const Eigen::Index n = s.NumFrames();
  const size_t len = (n - 1) * cfg.hop + cfg.window_length;
  const std::vector<double> win = MakeWindow(cfg.window_shape, cfg.window_length);
  std::vector<double> acc(len, 0.0), norm(len, 0.0);
  RealDft dft(cfg.fft_size);
  std::vector<std::complex<double>> spec(cfg.NumBins());
  std::vector<double> frame(cfg.fft_size);
  const double scale = 1.0 / cfg.fft_size;
  for (Eigen::Index t = 0; t < n; ++t) {
    for (int k = 0; k < cfg.NumBins(); ++k) spec[k] = s.frames(t, k);
    // c2r assumes Hermitian symmetry; DC and Nyquist must be real.
    spec[0] = spec[0].real();
    spec[cfg.NumBins() - 1] = spec[cfg.NumBins() - 1].real();
    dft.Inverse(spec.data(), frame.data());
    const size_t off = t * cfg.hop;
    for (int i = 0; i < cfg.window_length; ++i) {
      acc[off + i] += frame[i] * scale * win[i];
      norm[off + i] += win[i] * win[i];
    }
  }
  for (size_t i = 0; i < len; ++i) acc[i] /= std::max(norm[i], 1e-8);
  return Waveform(std::move(acc), s.sample_rate);
}

FeatureMatrix LogMagnitude(const ComplexSpectrogram &s) {
  FeatureMatrix f;
  f.data = (s.frames.array().abs() + kLogMagFloor).log().matrix();
  f.frame_shift_ms = 1000.0 * s.config.hop / s.sample_rate;
  f.descriptor = "logmag" + std::to_string(s.config.NumBins());
  return f;
}

}  // namespace svkit
