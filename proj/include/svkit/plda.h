// svkit/plda.h

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

#ifndef SVKIT_PLDA_H_
#define SVKIT_PLDA_H_

#include <string>
#include <vector>

#include "svkit/base.h"
#include "svkit/model-io.h"
#include "svkit/trials.h"

namespace svkit {

/// y = mu + V h + e, h ~ N(0, I_Q), e ~ N(0, sigma).
struct PldaModel {
  Vector mu;
  Matrix v;      // E x Q
  Matrix sigma;  // E x E

  int Dim() const { return static_cast<int>(mu.size()); }
  int Rank() const { return static_cast<int>(v.cols()); }
  void Validate() const;
};

struct PldaTrainOptions {
  int rank = 20;
  int iters = 10;
};

struct PldaTrainResult {
  PldaModel model;
  /// Marginal log-likelihood of the training data under the model entering
  /// each iteration, then once more for the final model.
  std::vector<double> lower_bound;
};

/// EM training.  labels[i] is the speaker of vectors.row(i).
PldaTrainResult TrainPlda(const Matrix &vectors, const std::vector<std::string> &labels,
                          const PldaTrainOptions &opts);

/// Exact log p(data) under the model, speakers grouped by label.
double PldaLogLikelihood(const PldaModel &m, const Matrix &vectors,
                         const std::vector<std::string> &labels);

/// Precomputes the quadratic forms of the same/different-speaker Gaussians.
class PldaScorer {
 public:
  explicit PldaScorer(const PldaModel &m);

  /// log N([e;t]; same) - log N(e) - log N(t).
  double Llr(const Vector &enroll, const Vector &test) const;
  const PldaModel &Model() const { return model_; }

 private:
  PldaModel model_;
  Matrix q_;  // W^-1 - diagonal block of the joint precision
  Matrix g_;  // off-diagonal block of the joint precision
  double constant_;
};

double PldaLlr(const PldaModel &m, const Vector &enroll, const Vector &test);

/// Multi-session enrollment: the session vectors are averaged then
/// length-normalized.  Scores come back in trial order.
ScoreSet ScoreTrials(const PldaScorer &scorer, const EmbeddingArchive &archive,
                     const TrialList &trials, int workers = 1);

Vector EnrollmentVector(const EmbeddingArchive &archive, const Trial &t);

void SavePlda(const PldaModel &m, const std::string &path);
PldaModel LoadPlda(const std::string &path);

}  // namespace svkit

#endif  // SVKIT_PLDA_H_
