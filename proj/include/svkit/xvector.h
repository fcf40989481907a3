// svkit/xvector.h

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

#ifndef SVKIT_XVECTOR_H_
#define SVKIT_XVECTOR_H_

#include <string>
#include <vector>

#include "svkit/base.h"
#include "svkit/feature.h"

namespace svkit {

/// TDNN topology.  Frame layer l splices its input at offsets contexts[l]
/// (edge frames replicated); statistics pooling appends mean and standard
/// deviation; the embedding is the first segment layer's pre-activation.
struct XvectorConfig {
  int input_dim = 23;
  std::vector<int> frame_sizes = {512, 512, 512, 512, 1500};
  std::vector<std::vector<int>> contexts = {{-2, -1, 0, 1, 2}, {-2, 0, 2}, {-3, 0, 3}, {0}, {0}};
  std::vector<int> segment_sizes = {512, 512};
  int num_speakers = 2;

  int EmbeddingDim() const { return segment_sizes.front(); }
  int PoolDim() const { return 2 * frame_sizes.back(); }
  /// Total left plus right context of the frame layers.
  int TotalContext() const;
  void Validate() const;
  static XvectorConfig Desk(int input_dim, int num_speakers);
};

struct XvectorModel {
  XvectorConfig config;
  /// Frame layers, then segment layers, then the output layer.  Frame layer
  /// weights are out x (|context| * in) with the spliced blocks in offset
  /// order.
  std::vector<Matrix> w;
  std::vector<Vector> b;

  size_t NumFrameLayers() const { return config.frame_sizes.size(); }
  void Validate() const;
};

XvectorModel InitXvectorModel(const XvectorConfig &cfg, uint64_t seed);

/// Per-dimension mean then sqrt(var + 1e-10) over the rows of h.
Vector StatsPool(const Matrix &h);

struct XvectorOutput {
  Vector embedding;
  Vector log_probs;
};

/// Frames need at least TotalContext() + 1 rows.
XvectorOutput XvectorForward(const XvectorModel &m, const Matrix &frames);
Vector ExtractXvector(const XvectorModel &m, const Matrix &frames);

struct XvectorGradients {
  std::vector<Matrix> w;
  std::vector<Vector> b;
};

/// Mean cross entropy over the chunks; grads may be null.  correct, if
/// given, receives the number of chunks whose arg-max matches the label.
double XvectorLossAndGradients(const XvectorModel &m, const std::vector<Matrix> &chunks,
                               const std::vector<int> &labels, XvectorGradients *grads,
                               int *correct = nullptr);

struct XvectorTrainOptions {
  int min_chunk = 200;
  int max_chunk = 400;
  int min_frames = 500;  // shorter utterances are not sampled
  int batch_size = 16;
  int epochs = 10;
  int chunks_per_utterance = 4;  // per epoch
  double learning_rate = 0.003;
  double momentum = 0.9;
  double min_improvement = 1e-4;
  uint64_t seed = 1;

  void Validate() const;
};

struct XvectorTrainResult {
  XvectorModel model;
  std::vector<std::string> speakers;  // label index -> speaker id
  std::vector<double> loss;           // per epoch
  std::vector<double> accuracy;       // per epoch, on the sampled chunks
  size_t utterances_used = 0;
};

/// features[i] belongs to speakers[i].  source_frames[i] is the frame count
/// of the whole utterance before activity selection and is what min_frames
/// is checked against; when empty the feature row counts are used.  The
/// output layer is sized to the number of distinct usable speakers.
XvectorTrainResult TrainXvector(const XvectorConfig &cfg, const std::vector<Matrix> &features,
                                const std::vector<std::string> &speakers,
                                const XvectorTrainOptions &opts,
                                const std::vector<Eigen::Index> &source_frames = {});

void SaveXvector(const XvectorModel &m, const std::string &path);
XvectorModel LoadXvector(const std::string &path);

}  // namespace svkit

#endif  // SVKIT_XVECTOR_H_
