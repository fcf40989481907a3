// svkit/frontend.h

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

#ifndef SVKIT_FRONTEND_H_
#define SVKIT_FRONTEND_H_

#include <string>

#include "svkit/feature.h"
#include "svkit/wave.h"

namespace svkit {

enum class EmbeddingKind { kIvector, kXvector };

std::string EmbeddingKindName(EmbeddingKind k);
EmbeddingKind ParseEmbeddingKind(const std::string &s);

constexpr double kMvnWindowSeconds = 3.0;

/// i-vector front-end: 20 MFCC plus deltas and double deltas (60 dims).
/// x-vector front-end: 23 MFCC.  Both are normalized with a 3 s sliding
/// window and reduced to the frames flagged in `mask`.
FeatureMatrix EmbeddingFeatures(const Waveform &w, EmbeddingKind kind, const FrameMask &mask);

/// As above with the energy VAD of w itself.
FeatureMatrix EmbeddingFeatures(const Waveform &w, EmbeddingKind kind);

}  // namespace svkit

#endif  // SVKIT_FRONTEND_H_
