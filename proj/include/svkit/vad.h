// svkit/vad.h

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

#ifndef SVKIT_VAD_H_
#define SVKIT_VAD_H_

#include <utility>
#include <vector>

#include "svkit/feature.h"
#include "svkit/wave.h"

namespace svkit {

/// Frame geometry shared by the VAD, MFCC and enhancer (25 ms / 10 ms at
/// 8 kHz).
constexpr int kFrameLength = 200;
constexpr int kFrameShift = 80;

/// A frame is active when its log-energy is within 30 dB of the loudest
/// frame; the mask is then smoothed by a 5-frame majority vote.  A signal
/// whose loudest frame has mean energy below 1e-12 is entirely inactive.
FrameMask EnergyVad(const Waveform &w);

/// Sample ranges [begin, end) covered by active frames, merged where frames
/// overlap.  Ranges are clipped to num_samples.
std::vector<std::pair<size_t, size_t>> ActiveSampleRanges(
    const FrameMask &mask, size_t num_samples, int frame_length = kFrameLength,
    int frame_shift = kFrameShift);

}  // namespace svkit

#endif  // SVKIT_VAD_H_
