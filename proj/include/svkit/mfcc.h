// svkit/mfcc.h

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

#ifndef SVKIT_MFCC_H_
#define SVKIT_MFCC_H_

#include "svkit/feature.h"
#include "svkit/wave.h"

namespace svkit {

/// kIvector: 24 mel bands over 120-3800 Hz, c0..c19 (20 dims).
/// kXvector: 23 mel bands over 20-3700 Hz, 23 dims.
enum class MfccVariant { kIvector, kXvector };

struct MfccOptions {
  int num_bins = 24;
  int num_ceps = 20;
  double low_freq = 120.0;
  double high_freq = 3800.0;

  static MfccOptions For(MfccVariant v);
};

/// 25 ms Hamming window, 10 ms shift, 256-point power spectrum, triangular
/// mel filterbank, log, orthonormal DCT-II.  8 kHz input only.
FeatureMatrix ComputeMfcc(const Waveform &w, MfccVariant variant);
FeatureMatrix ComputeMfcc(const Waveform &w, const MfccOptions &opts);

/// Row m holds the triangular weights of mel band m over the FFT bins.
Matrix MelFilterbank(const MfccOptions &opts, int fft_size, int sample_rate);

}  // namespace svkit

#endif  // SVKIT_MFCC_H_
