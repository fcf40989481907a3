// svkit/enhancer.h

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

#ifndef SVKIT_ENHANCER_H_
#define SVKIT_ENHANCER_H_

#include <string>
#include <vector>

#include "svkit/base.h"
#include "svkit/stft.h"
#include "svkit/wave.h"

namespace svkit {

/// Denoising autoencoder topology.  The defaults are the full-size network;
/// Desk() is the small configuration used for desk-scale experiments.
struct AeConfig {
  int context = 15;
  int bins = 129;
  std::vector<int> hidden = {1500, 1500, 1500};

  int InputDim() const { return (2 * context + 1) * bins; }
  void Validate() const;
  static AeConfig Desk();
};

struct DenseLayer {
  Matrix w;  // out x in
  Vector b;
};

struct AeTrainMeta {
  uint64_t seed = 0;
  int epochs = 0;
  double final_train_loss = 0;
  double final_dev_loss = 0;
};

/// tanh hidden layers, linear output.  out_mean/out_std map normalized
/// predictions back to log-magnitudes.
struct AeModel {
  AeConfig config;
  std::vector<DenseLayer> layers;
  Vector out_mean;
  Vector out_std;
  AeTrainMeta meta;

  void Validate() const;
};

/// Glorot-uniform weights, zero biases, unit de-normalization.
AeModel InitAeModel(const AeConfig &cfg, uint64_t seed);

/// Rows are stacked-context input vectors; returns normalized predictions.
Matrix AeForward(const AeModel &m, const Matrix &input);

struct AeGradients {
  std::vector<DenseLayer> layers;
};

/// Mean over rows and bins of the squared error.  grads may be null.
double AeLossAndGradients(const AeModel &m, const Matrix &input, const Matrix &target,
                          AeGradients *grads);

/// Per-bin mean and standard deviation over frames (std floored at 1e-6).
struct BinStats {
  Vector mean;
  Vector std;
};

BinStats ComputeBinStats(const Matrix &frames);
Matrix NormalizeFrames(const Matrix &frames, const BinStats &s);

/// Row t holds frames t-context .. t+context concatenated, edge frames
/// replicated.
Matrix StackContext(const Matrix &frames, int context);
/// Only the rows listed in `rows`.
Matrix StackContextRows(const Matrix &frames, int context, const std::vector<Eigen::Index> &rows);

/// One aligned utterance: noisy log-magnitudes normalized by their own
/// statistics, clean log-magnitudes raw plus their statistics.
struct AePair {
  Matrix input;
  Matrix clean;
  BinStats clean_stats;

  Matrix NormalizedTarget() const { return NormalizeFrames(clean, clean_stats); }
};

AePair MakeTrainingPair(const Waveform &noisy, const Waveform &clean, const AeConfig &cfg,
                        const StftConfig &stft = {});

struct AeTrainOptions {
  double learning_rate = 0.05;
  double momentum = 0.9;
  int batch_size = 256;
  int epochs = 10;
  double dev_fraction = 0.1;
  double min_improvement = 1e-4;  // relative; otherwise the rate is halved
  uint64_t seed = 1;

  void Validate() const;
};

struct AeTrainResult {
  AeModel model;
  /// Index 0 is the initial model, then one entry per epoch.
  std::vector<double> dev_loss;
  std::vector<double> train_loss;
  std::vector<double> learning_rate;
};

/// Minibatch SGD with momentum.  Utterances are split into train and dev
/// sets once; after training out_mean/out_std are the pooled clean
/// statistics of the dev set.
AeTrainResult TrainAe(const AeModel &init, const std::vector<AePair> &data,
                      const AeTrainOptions &opts);

/// Mean squared error of normalized predictions against normalized targets.
double AeDevLoss(const AeModel &m, const std::vector<AePair> &data);

/// Log-magnitude estimate for one utterance (frames x bins).
Matrix EnhanceLogMagnitude(const AeModel &m, const Matrix &noisy_logmag);

/// Replaces each bin's magnitude with exp(logmag) - 1e-10 (clamped at 0),
/// keeping the phase of `phase_source`, and resynthesizes `length` samples.
Waveform Resynthesize(const ComplexSpectrogram &phase_source, const Matrix &logmag,
                      size_t length);

Waveform EnhanceUtterance(const AeModel &m, const Waveform &w, const StftConfig &stft = {});

/// Mean over frames and bins of the squared log-magnitude difference.
double LogSpectralMse(const Waveform &a, const Waveform &b, const StftConfig &stft = {});

void SaveAe(const AeModel &m, const std::string &path);
AeModel LoadAe(const std::string &path);

}  // namespace svkit

#endif  // SVKIT_ENHANCER_H_
