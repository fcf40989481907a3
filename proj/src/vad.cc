// svkit/src/vad.cc

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

#include "svkit/vad.h"

#include <algorithm>
#include <cmath>

#include "svkit/stft.h"

namespace svkit {

FrameMask EnergyVad(const Waveform &w) {
  const Eigen::Index n = NumFrames(w.size(), kFrameLength, kFrameShift);
  FrameMask mask;
  mask.frame_shift_ms = 1000.0 * kFrameShift / w.sample_rate;
  mask.active.assign(n, false);
  if (n == 0) return mask;
  std::vector<double> energy(n);
  for (Eigen::Index t = 0; t < n; ++t) {
    double e = 0.0;
    const double *x = w.samples.data() + t * kFrameShift;
    for (int i = 0; i < kFrameLength; ++i) e += x[i] * x[i];
    energy[t] = e / kFrameLength;
  }
  const double max_e = *std::max_element(energy.begin(), energy.end());
  if (max_e < 1e-12) return mask;
  const double thresh_db = 10.0 * std::log10(max_e) - 30.0;
  std::vector<bool> raw(n);
  for (Eigen::Index t = 0; t < n; ++t)
    raw[t] = 10.0 * std::log10(std::max(energy[t], 1e-300)) >= thresh_db;
  for (Eigen::Index t = 0; t < n; ++t) {
    int on = 0, total = 0;
    for (Eigen::Index u = std::max<Eigen::Index>(0, t - 2);
         u <= std::min<Eigen::Index>(n - 1, t + 2); ++u, ++total)
      on += raw[u] ? 1 : 0;
    // Ties (possible only at the edges) keep the raw decision.
    mask.active[t] = 2 * on == total ? raw[t] : 2 * on > total;
  }
  return mask;
}

std::vector<std::pair<size_t, size_t>> ActiveSampleRanges(
    const FrameMask &mask, size_t num_samples, int frame_length,
    int frame_shift) {
  std::vector<std::pair<size_t, size_t>> ranges;
  for (size_t t = 0; t < mask.size(); ++t) {
    if (!mask.active[t]) continue;
    size_t b = t * frame_shift;
    size_t e = std::min(num_samples, b + frame_length);
    if (b >= e) continue;
    if (!ranges.empty() && b <= ranges.back().second)
      ranges.back().second = std::max(ranges.back().second, e);
    else
      ranges.emplace_back(b, e);
  }
  return ranges;
}

}  // namespace svkit
