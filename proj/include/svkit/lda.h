// svkit/lda.h

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

#ifndef SVKIT_LDA_H_
#define SVKIT_LDA_H_

#include <string>
#include <vector>

#include "svkit/base.h"

namespace svkit {

struct LdaProjection {
  Matrix matrix;  // R x R'
  Vector global_mean;

  int InDim() const { return static_cast<int>(matrix.rows()); }
  int OutDim() const { return static_cast<int>(matrix.cols()); }
};

/// Generalized eigenvectors of the between/within class scatter pair, top
/// out_dim by eigenvalue.  Columns are scaled to unit within-class variance
/// and signed so their largest-magnitude entry is positive.
LdaProjection TrainLda(const Matrix &vectors, const std::vector<std::string> &labels,
                       int out_dim);

/// P' (v - mean), then unit length.
Vector ProjectAndNorm(const LdaProjection &p, const Vector &v);

void SaveLda(const LdaProjection &p, const std::string &path);
LdaProjection LoadLda(const std::string &path);

}  // namespace svkit

#endif  // SVKIT_LDA_H_
