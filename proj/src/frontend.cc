// svkit/src/frontend.cc

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

#include "svkit/frontend.h"

#include "svkit/base.h"
#include "svkit/mfcc.h"
#include "svkit/vad.h"

namespace svkit {

std::string EmbeddingKindName(EmbeddingKind k) {
  return k == EmbeddingKind::kIvector ? "ivector" : "xvector";
}

EmbeddingKind ParseEmbeddingKind(const std::string &s) {
  if (s == "ivector") return EmbeddingKind::kIvector;
  if (s == "xvector") return EmbeddingKind::kXvector;
  throw UsageError("embedding kind must be ivector or xvector, got '" + s + "'");
}

FeatureMatrix EmbeddingFeatures(const Waveform &w, EmbeddingKind kind, const FrameMask &mask) {
  FeatureMatrix f;
  if (kind == EmbeddingKind::kIvector)
    f = AppendDeltas(ComputeMfcc(w, MfccVariant::kIvector));
  else
    f = ComputeMfcc(w, MfccVariant::kXvector);
  return SelectActive(SlidingMvn(f, kMvnWindowSeconds), mask);
}

FeatureMatrix EmbeddingFeatures(const Waveform &w, EmbeddingKind kind) {
  return EmbeddingFeatures(w, kind, EnergyVad(w));
}

}  // namespace svkit
