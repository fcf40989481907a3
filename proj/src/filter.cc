// svkit/src/filter.cc

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

#include "svkit/filter.h"

#include <algorithm>
#include <cmath>
#include <complex>
#include <numbers>

#include "svkit/dft.h"
#include "svkit/stft.h"

namespace svkit {

double AWeightingGain(double f) {
  auto ra = [](double f) {
    const double f2 = f * f;
    return 12194.0 * 12194.0 * f2 * f2 /
           ((f2 + 20.6 * 20.6) *
            std::sqrt((f2 + 107.7 * 107.7) * (f2 + 737.9 * 737.9)) *
            (f2 + 12194.0 * 12194.0));
  };
  return ra(f) / ra(1000.0);
}

double FirMagnitude(const std::vector<double> &h, double freq_hz,
                    int sample_rate) {
  std::complex<double> acc = 0.0;
  const double w = 2.0 * std::numbers::pi * freq_hz / sample_rate;
  for (size_t n = 0; n < h.size(); ++n)
    acc += h[n] * std::polar(1.0, -w * static_cast<double>(n));
  return std::abs(acc);
}

namespace {

constexpr int kAWeightTaps = 513;

// Frequency sampling: taps are the inverse DFT of the sampled magnitude with
// a linear phase of (M-1)/2 samples.
std::vector<double> DesignAWeighting(int rate) {
  const int m = kAWeightTaps, c = (m - 1) / 2;
  std::vector<double> gain(m / 2 + 1);
  for (int k = 0; k <= m / 2; ++k)
    gain[k] = AWeightingGain(static_cast<double>(k) * rate / m);
  std::vector<double> h(m);
  for (int n = 0; n < m; ++n) {
    double acc = gain[0];
    for (int k = 1; k <= m / 2; ++k)
      acc += 2.0 * gain[k] * std::cos(2.0 * std::numbers::pi * k * (n - c) / m);
    h[n] = acc / m;
  }
  const double g = FirMagnitude(h, 1000.0, rate);
  for (double &v : h) v /= g;
  return h;
}

}  // namespace

const std::vector<double> &AWeightingTaps(int sample_rate) {
  static const std::vector<double> taps8 = DesignAWeighting(8000);
  static const std::vector<double> taps16 = DesignAWeighting(16000);
  if (sample_rate == 8000) return taps8;
  if (sample_rate == 16000) return taps16;
  throw DataError("A-weighting supports 8000 or 16000 Hz, got " +
                  std::to_string(sample_rate));
}

Waveform AWeight(const Waveform &w) {
  const std::vector<double> &h = AWeightingTaps(w.sample_rate);
  std::vector<double> full = ConvolveFull(w.samples, h);
  const size_t delay = (h.size() - 1) / 2;
  std::vector<double> out(full.begin() + delay, full.begin() + delay + w.size());
  return Waveform(std::move(out), w.sample_rate);
}

std::vector<double> ConvolveFull(const std::vector<double> &x,
                                 const std::vector<double> &h) {
  if (x.empty() || h.empty()) return {};
  if (h.size() <= 64 || x.size() * h.size() <= (1u << 18)) {
    std::vector<double> y(x.size() + h.size() - 1, 0.0);
    for (size_t i = 0; i < x.size(); ++i) {
      const double xi = x[i];
      if (xi == 0.0) continue;
      for (size_t k = 0; k < h.size(); ++k) y[i + k] += xi * h[k];
    }
    return y;
  }
  return FftConvolve(x, h);
}

Waveform FirConvolve(const Waveform &w, const std::vector<double> &h) {
  if (h.empty()) throw DataError("empty impulse response");
  std::vector<double> y = ConvolveFull(w.samples, h);
  y.resize(w.size());
  Waveform out(std::move(y), w.sample_rate);
  const double peak = out.Peak();
  if (peak > 1.0) {
    const double scale = w.Peak() / peak;
    for (double &v : out.samples) v *= scale;
  }
  return out;
}

namespace {

std::vector<double> DesignTelephone() {
  const int m = 127, c = (m - 1) / 2;
  const double rate = 8000.0;
  const double f1 = 300.0 / rate, f2 = 3400.0 / rate;
  const std::vector<double> win = MakeWindow(WindowShape::kHamming, m);
  std::vector<double> h(m);
  for (int n = 0; n < m; ++n) {
    const int k = n - c;
    double ideal;
    if (k == 0) {
      ideal = 2.0 * (f2 - f1);
    } else {
      const double pk = std::numbers::pi * k;
      ideal = (std::sin(2.0 * pk * f2) - std::sin(2.0 * pk * f1)) / pk;
    }
    h[n] = ideal * win[n];
  }
  return h;
}

}  // namespace

const std::vector<double> &TelephoneTaps() {
  static const std::vector<double> taps = DesignTelephone();
  return taps;
}

Waveform TelephoneFilter(const Waveform &w) {
  if (w.sample_rate != 8000)
    throw DataError("telephone filter needs 8000 Hz audio, got " +
                    std::to_string(w.sample_rate));
  return FirConvolve(w, TelephoneTaps());
}

}  // namespace svkit
