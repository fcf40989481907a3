// svkit/ivector.h

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

#ifndef SVKIT_IVECTOR_H_
#define SVKIT_IVECTOR_H_

#include <string>
#include <vector>

#include "svkit/gmm.h"

namespace svkit {

/// Total-variability model over the UBM supervector space.  Rows
/// k*D .. k*D+D-1 of t belong to component k.
struct IvectorExtractor {
  GmmUbm ubm;
  Matrix t;  // (K*D) x R

  int Rank() const { return static_cast<int>(t.cols()); }
  void Validate() const;
};

/// Posterior of the latent factor for one utterance.
struct IvectorPosterior {
  Vector mean;
  Matrix precision;
};

/// Cached per-component products; build once per extractor.
class IvectorComputer {
 public:
  explicit IvectorComputer(const IvectorExtractor &ext);

  IvectorPosterior Posterior(const SuffStats &s) const;
  Vector Extract(const SuffStats &s) const { return Posterior(s).mean; }
  /// First-order statistics centered on the UBM means, whitened by the UBM
  /// variances: Sigma^-1 (f_k - n_k mu_k), flattened component-major.
  Vector WhitenedCentered(const SuffStats &s) const;

 private:
  const IvectorExtractor &ext_;
  std::vector<Matrix> tst_;  // T_k' Sigma_k^-1 T_k, R x R
};

Vector ExtractIvector(const IvectorExtractor &ext, const SuffStats &s);

struct TvTrainOptions {
  int rank = 50;
  int iters = 5;
  double init_scale = 0.5;  // of the per-dim UBM standard deviation
  uint64_t seed = 1;
};

struct TvTrainResult {
  IvectorExtractor extractor;
  /// Sum over utterances of log p(stats | T) up to a T-independent constant,
  /// for the model entering each iteration and then the final model.
  std::vector<double> objective;
};

TvTrainResult TrainTv(const std::vector<SuffStats> &stats, const GmmUbm &ubm,
                      const TvTrainOptions &opts, int workers = 1);

/// The objective of TvTrainResult for a fixed extractor.
double TvObjective(const IvectorExtractor &ext, const std::vector<SuffStats> &stats,
                   int workers = 1);

void SaveIvectorExtractor(const IvectorExtractor &ext, const std::string &path);
IvectorExtractor LoadIvectorExtractor(const std::string &path);

}  // namespace svkit

#endif  // SVKIT_IVECTOR_H_
