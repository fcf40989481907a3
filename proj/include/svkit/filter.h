// svkit/filter.h

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

#ifndef SVKIT_FILTER_H_
#define SVKIT_FILTER_H_

#include <vector>

#include "svkit/wave.h"

namespace svkit {

/// Analytic A-weighting magnitude (linear, unity at 1 kHz).
double AWeightingGain(double freq_hz);

/// 513-tap linear-phase FIR sampled from the A-weighting magnitude at the
/// given rate (8000 or 16000 Hz), normalized to unity gain at 1 kHz.
const std::vector<double> &AWeightingTaps(int sample_rate);

/// A-weighted copy of w, same length (the 256-sample group delay is removed).
Waveform AWeight(const Waveform &w);

/// Full linear convolution of x and h, length x.size() + h.size() - 1.
/// Direct summation for short kernels, FFT otherwise.
std::vector<double> ConvolveFull(const std::vector<double> &x,
                                 const std::vector<double> &h);

/// Convolution truncated to len(w) samples.  When the output peak exceeds 1
/// it is rescaled to the input's peak.
Waveform FirConvolve(const Waveform &w, const std::vector<double> &h);

/// 127-tap Hamming-windowed 300-3400 Hz bandpass (8 kHz only).
const std::vector<double> &TelephoneTaps();

Waveform TelephoneFilter(const Waveform &w);

/// |H(f)| of an FIR kernel evaluated directly from its taps.
double FirMagnitude(const std::vector<double> &h, double freq_hz,
                    int sample_rate);

}  // namespace svkit

#endif  // SVKIT_FILTER_H_
