// svkit/stft.h

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

#ifndef SVKIT_STFT_H_
#define SVKIT_STFT_H_

#include <vector>

#include "svkit/base.h"
#include "svkit/feature.h"
#include "svkit/wave.h"

namespace svkit {

enum class WindowShape { kHamming, kHann, kRectangular };

/// Analysis geometry.  The defaults (25 ms Hamming, 10 ms hop, 256-point
/// transform at 8 kHz) give 129 bins and line up with MFCC framing.
struct StftConfig {
  int window_length = 200;
  int hop = 80;
  int fft_size = 256;
  WindowShape window_shape = WindowShape::kHamming;

  int NumBins() const { return fft_size / 2 + 1; }
  void Validate() const;
};

struct ComplexSpectrogram {
  Eigen::MatrixXcd frames;  // num_frames x NumBins()
  StftConfig config;
  int sample_rate = 8000;

  Eigen::Index NumFrames() const { return frames.rows(); }
};

/// Symmetric window of the given shape.
std::vector<double> MakeWindow(WindowShape shape, int length);

/// floor((len - window) / hop) + 1, or 0 when len < window.
Eigen::Index NumFrames(size_t num_samples, int window_length, int hop);

ComplexSpectrogram Stft(const Waveform &w, const StftConfig &cfg);

/// Weighted overlap-add with the analysis window, normalized by the summed
/// squared window (floored at 1e-8).  Output length is
/// (num_frames - 1) * hop + window_length.
Waveform Istft(const ComplexSpectrogram &s);

/// ln(|X| + 1e-10) per bin.
FeatureMatrix LogMagnitude(const ComplexSpectrogram &s);

constexpr double kLogMagFloor = 1e-10;

}  // namespace svkit

#endif  // SVKIT_STFT_H_
