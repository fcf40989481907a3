// svkit/wave.h

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

#ifndef SVKIT_WAVE_H_
#define SVKIT_WAVE_H_

#include <string>
#include <vector>

#include "svkit/base.h"

namespace svkit {

/// Mono time-domain audio with amplitudes nominally in [-1, 1].
struct Waveform {
  std::vector<double> samples;
  int sample_rate = 8000;

  Waveform() = default;
  Waveform(std::vector<double> s, int rate)
      : samples(std::move(s)), sample_rate(rate) {}

  size_t size() const { return samples.size(); }
  bool empty() const { return samples.empty(); }
  double Duration() const {
    return static_cast<double>(samples.size()) / sample_rate;
  }
  double Peak() const;

  /// Throws DataError unless non-empty, finite, and sample_rate > 0.
  void Validate() const;
};

/// Reads a RIFF/WAVE PCM16 mono file; samples are scaled by 1/32768.
Waveform ReadWav(const std::string &path);

/// Writes PCM16 mono.  Samples are clipped to [-1, 1 - 1/32768] first.
void WriteWav(const Waveform &w, const std::string &path);

/// Encodes a waveform to the exact byte image WriteWav produces.
std::vector<char> EncodeWav(const Waveform &w);
Waveform DecodeWav(const std::vector<char> &bytes, const std::string &what);

}  // namespace svkit

#endif  // SVKIT_WAVE_H_
