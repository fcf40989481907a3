// svkit/tests/oracles.h

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

// Reference implementations used as independent oracles by the unit tests
// and the acceptance binary.  Each one recomputes a quantity by a direct,
// slow route (dense solves, explicit densities, exhaustive thresholds).

#ifndef SVKIT_TESTS_ORACLES_H_
#define SVKIT_TESTS_ORACLES_H_

#include <vector>

#include "svkit/base.h"
#include "svkit/enhancer.h"
#include "svkit/feature.h"
#include "svkit/gmm.h"
#include "svkit/ivector.h"
#include "svkit/metrics.h"
#include "svkit/plda.h"
#include "svkit/trials.h"
#include "svkit/wave.h"
#include "svkit/xvector.h"

namespace svkit {
namespace oracle {

Matrix RandomMatrix(Rng &rng, Eigen::Index r, Eigen::Index c, double scale = 1.0);

/// A-weighted mean energy by direct convolution sum against the published
/// taps, over the union of active 200-sample frames (hop 80).
double MaskedEnergy(const Waveform &w, const FrameMask &mask);
double SnrDb(const Waveform &speech, const Waveform &noise, const FrameMask &mask);

GmmUbm RandomUbm(Rng &rng, int k, int d);

/// Zeroth and first order statistics from explicit per-frame densities.
SuffStats NaiveStats(const GmmUbm &g, const Matrix &x);

/// I-vector posterior mean from full supervector matrices by pivoted LU.
Vector DenseIvector(const IvectorExtractor &e, const SuffStats &s);

/// Log density of a zero-mean Gaussian through a pivoted LU.
double LogGauss(const Vector &x, const Matrix &cov);

/// Same-speaker against different-speaker log-likelihood ratio from the
/// joint Gaussian of the two vectors.
double DirectLlr(const PldaModel &m, const Vector &e, const Vector &t);

PldaModel RandomPldaModel(Rng &rng, int dim, int rank);

/// Error rates at -inf, every midpoint of consecutive distinct scores and
/// +inf, counted directly.  Pairs are (p_fa, p_miss).
std::vector<std::pair<double, double>> BruteVertices(const KeyedScores &s);
double BruteEer(const KeyedScores &s);
double BruteMinDcf(const KeyedScores &s, const OperatingPoint &op);

/// Worst relative error of analytic against central-difference gradients
/// (step 1e-5).  Entries whose gradients are both below 1e-6 are compared
/// absolutely.
double AeGradientError(AeModel m, const Matrix &x, const Matrix &t);
double XvectorGradientError(XvectorModel m, const std::vector<Matrix> &chunks,
                            const std::vector<int> &labels);

}  // namespace oracle
}  // namespace svkit

#endif  // SVKIT_TESTS_ORACLES_H_
