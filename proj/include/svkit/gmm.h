// svkit/gmm.h

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

#ifndef SVKIT_GMM_H_
#define SVKIT_GMM_H_

#include <string>
#include <vector>

#include "svkit/base.h"
#include "svkit/feature.h"
#include "svkit/io-util.h"

namespace svkit {

/// Diagonal-covariance Gaussian mixture.
struct GmmUbm {
  Vector weights;    // K
  Matrix means;      // K x D
  Matrix variances;  // K x D

  int NumComponents() const { return static_cast<int>(weights.size()); }
  int Dim() const { return static_cast<int>(means.cols()); }
  void Validate() const;

  /// Per-frame, per-component log(w_k N(x_t; mu_k, var_k)), frames x K.
  Matrix ComponentLogLikes(const Matrix &frames) const;
};

struct UbmTrainOptions {
  int num_components = 64;
  int iters = 10;
  int kmeans_iters = 5;
  double variance_floor = 0.01;  // fraction of the global per-dim variance
  uint64_t seed = 1;
};

struct UbmTrainResult {
  GmmUbm ubm;
  /// Total log-likelihood of the training frames under the model entering
  /// each EM iteration, then once more for the final model.
  std::vector<double> log_likelihood;
};

/// k-means++ seeding, a few Lloyd iterations, then EM.  Frames of all
/// matrices are pooled.
UbmTrainResult TrainUbm(const std::vector<FeatureMatrix> &features, const UbmTrainOptions &opts,
                        int workers = 1);

/// Row-wise log-sum-exp.
Vector LogSumExpRows(const Matrix &m);

/// Zero- and first-order Baum-Welch statistics.  f holds raw (uncentered)
/// first-order sums.
struct SuffStats {
  Vector n;  // K
  Matrix f;  // K x D

  static SuffStats Zero(int k, int d) { return {Vector::Zero(k), Matrix::Zero(k, d)}; }
};

/// Statistics over the frames whose mask flag is set.
SuffStats AccumulateStats(const GmmUbm &ubm, const FeatureMatrix &f, const FrameMask &mask);
/// Statistics over all frames.
SuffStats AccumulateStats(const GmmUbm &ubm, const Matrix &frames);

void SaveUbm(const GmmUbm &ubm, const std::string &path);
GmmUbm LoadUbm(const std::string &path);
void WriteUbm(const GmmUbm &ubm, ByteWriter &w);
GmmUbm ReadUbm(ByteReader &r);

}  // namespace svkit

#endif  // SVKIT_GMM_H_
