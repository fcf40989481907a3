// svkit/feature.h

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

#ifndef SVKIT_FEATURE_H_
#define SVKIT_FEATURE_H_

#include <string>
#include <vector>

#include "svkit/base.h"

namespace svkit {

/// Per-frame feature rows: data(t, d) is dimension d of frame t.
struct FeatureMatrix {
  Matrix data;
  double frame_shift_ms = 10.0;
  std::string descriptor;

  Eigen::Index NumFrames() const { return data.rows(); }
  Eigen::Index Dim() const { return data.cols(); }
  void Validate() const;
};

/// One activity flag per frame.
struct FrameMask {
  std::vector<bool> active;
  double frame_shift_ms = 10.0;

  size_t size() const { return active.size(); }
  size_t NumActive() const;
  double ActiveFraction() const;
};

/// Appends regression deltas over +-2 frames (edge frames replicated) and
/// the deltas of those deltas; output dim is three times the input dim.
FeatureMatrix AppendDeltas(const FeatureMatrix &f);

/// Sliding-window mean and variance normalization.  The window is centered
/// on each frame, spans window_s seconds and is truncated at the edges; the
/// standard deviation is floored at 1e-8.
FeatureMatrix SlidingMvn(const FeatureMatrix &f, double window_s);

/// Keeps only frames whose mask flag is set.
FeatureMatrix SelectActive(const FeatureMatrix &f, const FrameMask &mask);

/// "SVKF1" feature cache format: magic, u32 num_frames, u32 dim, u32 0,
/// then row-major float32.
void WriteFeatureFile(const FeatureMatrix &f, const std::string &path);
FeatureMatrix ReadFeatureFile(const std::string &path);

}  // namespace svkit

#endif  // SVKIT_FEATURE_H_
