// svkit/src/xvector.cc

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

#include "svkit/xvector.h"

#include <algorithm>
#include <cmath>
#include <map>
#include <limits>
#include <numeric>

#include "svkit/model-io.h"

namespace svkit {

namespace {

constexpr double kPoolEps = 1e-10;

// (rows, cols) of every weight matrix in layer order.
std::vector<std::pair<Eigen::Index, Eigen::Index>> LayerShapes(const XvectorConfig &cfg) {
  std::vector<std::pair<Eigen::Index, Eigen::Index>> shapes;
  Eigen::Index in = cfg.input_dim;
  for (size_t l = 0; l < cfg.frame_sizes.size(); ++l) {
    shapes.emplace_back(cfg.frame_sizes[l], in * cfg.contexts[l].size());
    in = cfg.frame_sizes[l];
  }
  in = cfg.PoolDim();
  for (int s : cfg.segment_sizes) {
    shapes.emplace_back(s, in);
    in = s;
  }
  shapes.emplace_back(cfg.num_speakers, in);
  return shapes;
}

Matrix Splice(const Matrix &h, const std::vector<int> &offsets) {
  const Eigen::Index t = h.rows(), d = h.cols();
  Matrix s(t, offsets.size() * d);
  for (size_t j = 0; j < offsets.size(); ++j)
    for (Eigen::Index i = 0; i < t; ++i)
      s.block(i, j * d, 1, d) = h.row(std::clamp<Eigen::Index>(i + offsets[j], 0, t - 1));
  return s;
}

Matrix SpliceBackward(const Matrix &ds, const std::vector<int> &offsets, Eigen::Index d) {
  const Eigen::Index t = ds.rows();
  Matrix dh = Matrix::Zero(t, d);
  for (size_t j = 0; j < offsets.size(); ++j)
    for (Eigen::Index i = 0; i < t; ++i)
      dh.row(std::clamp<Eigen::Index>(i + offsets[j], 0, t - 1)) += ds.block(i, j * d, 1, d);
  return dh;
}

struct Cache {
  std::vector<Matrix> spliced;  // input of each frame layer
  std::vector<Matrix> act;      // ReLU output of each frame layer
  Vector mean, std, pooled;
  std::vector<Vector> seg_in, seg_pre;
  Vector out_in, logits;
};

Vector LogSoftmax(const Vector &z) {
  double mx = z.maxCoeff();
  return (z.array() - mx - std::log((z.array() - mx).exp().sum())).matrix();
}

void Forward(const XvectorModel &m, const Matrix &frames, Cache &c) {
  const auto &cfg = m.config;
  if (frames.cols() != cfg.input_dim)
    throw DataError("x-vector input dim " + std::to_string(frames.cols()) + ", model expects " +
                    std::to_string(cfg.input_dim));
  if (frames.rows() < cfg.TotalContext() + 1)
    throw DataError("x-vector input has " + std::to_string(frames.rows()) +
                    " frames, needs at least " + std::to_string(cfg.TotalContext() + 1));
  const size_t nf = m.NumFrameLayers(), ns = cfg.segment_sizes.size();
  c.spliced.resize(nf);
  c.act.resize(nf);
  const Matrix *h = &frames;
  for (size_t l = 0; l < nf; ++l) {
    c.spliced[l] = Splice(*h, cfg.contexts[l]);
    Matrix a = c.spliced[l] * m.w[l].transpose();
    a.rowwise() += m.b[l].transpose();
    c.act[l] = a.cwiseMax(0.0);
    h = &c.act[l];
  }
  c.pooled = StatsPool(*h);
  const Eigen::Index d = h->cols();
  c.mean = c.pooled.head(d);
  c.std = c.pooled.tail(d);
  c.seg_in.resize(ns);
  c.seg_pre.resize(ns);
  Vector x = c.pooled;
  for (size_t s = 0; s < ns; ++s) {
    c.seg_in[s] = x;
    c.seg_pre[s] = m.w[nf + s] * x + m.b[nf + s];
    x = c.seg_pre[s].cwiseMax(0.0);
  }
  c.out_in = x;
  c.logits = m.w[nf + ns] * x + m.b[nf + ns];
}

}  // namespace

int XvectorConfig::TotalContext() const {
  int total = 0;
  for (const auto &c : contexts) total += *std::max_element(c.begin(), c.end()) -
                                          *std::min_element(c.begin(), c.end());
  return total;
}

void XvectorConfig::Validate() const {
  if (input_dim < 1) throw UsageError("x-vector input dim must be positive");
  if (frame_sizes.empty() || frame_sizes.size() != contexts.size())
    throw UsageError("x-vector needs one context list per frame layer");
  for (size_t l = 0; l < frame_sizes.size(); ++l) {
    if (frame_sizes[l] < 1) throw UsageError("x-vector layer sizes must be positive");
    if (contexts[l].empty()) throw UsageError("x-vector context lists must be non-empty");
  }
  if (segment_sizes.empty()) throw UsageError("x-vector needs at least one segment layer");
  for (int s : segment_sizes)
    if (s < 1) throw UsageError("x-vector layer sizes must be positive");
  if (num_speakers < 2) throw UsageError("x-vector needs at least 2 output classes");
}

XvectorConfig XvectorConfig::Desk(int input_dim, int num_speakers) {
  XvectorConfig c;
  c.input_dim = input_dim;
  c.frame_sizes = {64, 64, 64, 64, 128};
  c.segment_sizes = {64, 64};
  c.num_speakers = num_speakers;
  return c;
}

void XvectorModel::Validate() const {
  config.Validate();
  auto shapes = LayerShapes(config);
  if (w.size() != shapes.size() || b.size() != w.size())
    throw DataError("x-vector layer count does not match its config");
  for (size_t l = 0; l < w.size(); ++l) {
    if (w[l].rows() != shapes[l].first || w[l].cols() != shapes[l].second ||
        b[l].size() != shapes[l].first)
      throw DataError("x-vector layer " + std::to_string(l) + " has the wrong shape");
    if (!w[l].allFinite() || !b[l].allFinite())
      throw NumericError("x-vector layer " + std::to_string(l) + " is non-finite");
  }
}

XvectorModel InitXvectorModel(const XvectorConfig &cfg, uint64_t seed) {
  cfg.Validate();
  XvectorModel m;
  m.config = cfg;
  Rng rng(MixSeed(seed, 0x7876));
  auto shapes = LayerShapes(cfg);
  for (size_t l = 0; l < shapes.size(); ++l) {
    auto [out, cols] = shapes[l];
    // He-uniform for ReLU layers, Glorot-uniform for the softmax layer.
    double a = l + 1 < shapes.size() ? std::sqrt(6.0 / cols) : std::sqrt(6.0 / (cols + out));
    Matrix w(out, cols);
    for (Eigen::Index j = 0; j < cols; ++j)
      for (Eigen::Index i = 0; i < out; ++i) w(i, j) = UniformReal(rng, -a, a);
    m.w.push_back(std::move(w));
    m.b.push_back(Vector::Zero(out));
  }
  return m;
}

Vector StatsPool(const Matrix &h) {
  if (h.rows() == 0) throw DataError("statistics pooling over zero frames");
  Vector mean = h.colwise().mean().transpose();
  Vector var = (h.rowwise() - mean.transpose()).array().square().colwise().mean().transpose();
  Vector out(2 * h.cols());
  out << mean, (var.array() + kPoolEps).sqrt().matrix();
  return out;
}

XvectorOutput XvectorForward(const XvectorModel &m, const Matrix &frames) {
  Cache c;
  Forward(m, frames, c);
  return {c.seg_pre[0], LogSoftmax(c.logits)};
}

Vector ExtractXvector(const XvectorModel &m, const Matrix &frames) {
  return XvectorForward(m, frames).embedding;
}

double XvectorLossAndGradients(const XvectorModel &m, const std::vector<Matrix> &chunks,
                               const std::vector<int> &labels, XvectorGradients *grads,
                               int *correct) {
  if (chunks.empty() || chunks.size() != labels.size())
    throw DataError("x-vector batch needs one label per chunk");
  const auto &cfg = m.config;
  const size_t nf = m.NumFrameLayers(), ns = cfg.segment_sizes.size();
  if (grads) {
    grads->w.resize(m.w.size());
    grads->b.resize(m.b.size());
    for (size_t l = 0; l < m.w.size(); ++l) {
      grads->w[l] = Matrix::Zero(m.w[l].rows(), m.w[l].cols());
      grads->b[l] = Vector::Zero(m.b[l].size());
    }
  }
  if (correct) *correct = 0;
  const double inv_batch = 1.0 / static_cast<double>(chunks.size());
  double loss = 0;
  Cache c;
  for (size_t i = 0; i < chunks.size(); ++i) {
    if (labels[i] < 0 || labels[i] >= cfg.num_speakers)
      throw DataError("x-vector label " + std::to_string(labels[i]) + " out of range");
    Forward(m, chunks[i], c);
    Vector logp = LogSoftmax(c.logits);
    loss -= logp(labels[i]) * inv_batch;
    if (correct) {
      Eigen::Index arg;
      logp.maxCoeff(&arg);
      *correct += arg == labels[i];
    }
    if (!grads) continue;

    Vector g = logp.array().exp().matrix();
    g(labels[i]) -= 1.0;
    g *= inv_batch;
    grads->w[nf + ns] += g * c.out_in.transpose();
    grads->b[nf + ns] += g;
    Vector gx = m.w[nf + ns].transpose() * g;
    for (size_t s = ns; s-- > 0;) {
      Vector ga = gx.cwiseProduct((c.seg_pre[s].array() > 0).cast<double>().matrix());
      grads->w[nf + s] += ga * c.seg_in[s].transpose();
      grads->b[nf + s] += ga;
      gx = m.w[nf + s].transpose() * ga;
    }
    // Pooling backward: d mean / dh_t = 1/T, d std / dh_t = (h_t - mean) / (T std).
    const Matrix &top = c.act[nf - 1];
    const Eigen::Index d = top.cols();
    const double inv_t = 1.0 / static_cast<double>(top.rows());
    Vector gmean = gx.head(d), gstd = gx.tail(d).cwiseQuotient(c.std);
    Matrix gh = ((top.rowwise() - c.mean.transpose()).array().rowwise() * gstd.transpose().array())
                    .matrix();
    gh.rowwise() += gmean.transpose();
    gh *= inv_t;
    for (size_t l = nf; l-- > 0;) {
      Matrix ga = gh.cwiseProduct((c.act[l].array() > 0).cast<double>().matrix());
      grads->w[l] += ga.transpose() * c.spliced[l];
      grads->b[l] += ga.colwise().sum().transpose();
      if (l == 0) break;
      gh = SpliceBackward(ga * m.w[l], cfg.contexts[l], c.act[l - 1].cols());
    }
  }
  return loss;
}

void XvectorTrainOptions::Validate() const {
  if (min_chunk < 1 || max_chunk < min_chunk) throw UsageError("bad x-vector chunk range");
  if (batch_size < 1 || epochs < 0 || chunks_per_utterance < 1)
    throw UsageError("bad x-vector batch settings");
  if (!(learning_rate >= 0) || !(momentum >= 0 && momentum < 1))
    throw UsageError("bad x-vector optimizer settings");
}

XvectorTrainResult TrainXvector(const XvectorConfig &cfg_in, const std::vector<Matrix> &features,
                                const std::vector<std::string> &speakers,
                                const XvectorTrainOptions &opts,
                                const std::vector<Eigen::Index> &source_frames) {
  opts.Validate();
  if (features.size() != speakers.size() ||
      (!source_frames.empty() && source_frames.size() != features.size()))
    throw DataError("x-vector training: feature, speaker and length counts differ");
  XvectorTrainResult res;
  std::vector<size_t> usable;
  std::map<std::string, int> per_speaker;
  for (size_t i = 0; i < features.size(); ++i) {
    Eigen::Index length = source_frames.empty() ? features[i].rows() : source_frames[i];
    if (length < opts.min_frames || features[i].rows() < cfg_in.TotalContext() + 1) continue;
    usable.push_back(i);
    per_speaker[speakers[i]]++;
  }
  if (per_speaker.size() < 3)
    throw DataError("x-vector training needs at least 3 speakers with utterances of " +
                    std::to_string(opts.min_frames) + "+ frames, found " +
                    std::to_string(per_speaker.size()));
  std::map<std::string, int> label_of;
  for (auto &[spk, count] : per_speaker) {
    if (count < 2)
      throw DataError("x-vector training: speaker '" + spk + "' has fewer than 2 usable utterances");
    label_of[spk] = static_cast<int>(res.speakers.size());
    res.speakers.push_back(spk);
  }
  res.utterances_used = usable.size();
  XvectorConfig cfg = cfg_in;
  cfg.num_speakers = static_cast<int>(res.speakers.size());
  res.model = InitXvectorModel(cfg, opts.seed);
  XvectorModel &m = res.model;

  std::vector<Matrix> velocity_w;
  std::vector<Vector> velocity_b;
  for (size_t l = 0; l < m.w.size(); ++l) {
    velocity_w.push_back(Matrix::Zero(m.w[l].rows(), m.w[l].cols()));
    velocity_b.push_back(Vector::Zero(m.b[l].size()));
  }
  double lr = opts.learning_rate, best = std::numeric_limits<double>::infinity();
  XvectorGradients grads;
  for (int epoch = 0; epoch < opts.epochs; ++epoch) {
    Rng rng(MixSeed(opts.seed, 0x1000 + epoch));
    std::vector<size_t> order;
    for (int r = 0; r < opts.chunks_per_utterance; ++r)
      order.insert(order.end(), usable.begin(), usable.end());
    std::shuffle(order.begin(), order.end(), rng);
    double loss_sum = 0;
    int correct_sum = 0, batches = 0;
    for (size_t b = 0; b < order.size(); b += opts.batch_size) {
      size_t e = std::min(order.size(), b + opts.batch_size);
      std::vector<Matrix> chunks;
      std::vector<int> labels;
      for (size_t i = b; i < e; ++i) {
        const Matrix &f = features[order[i]];
        Eigen::Index len = std::min<Eigen::Index>(
            f.rows(), UniformInt(rng, opts.min_chunk, opts.max_chunk));
        Eigen::Index start = UniformInt(rng, 0, f.rows() - len);
        chunks.push_back(f.middleRows(start, len));
        labels.push_back(label_of[speakers[order[i]]]);
      }
      int correct = 0;
      loss_sum += XvectorLossAndGradients(m, chunks, labels, &grads, &correct) * chunks.size();
      correct_sum += correct;
      ++batches;
      for (size_t l = 0; l < m.w.size(); ++l) {
        velocity_w[l] = opts.momentum * velocity_w[l] - lr * grads.w[l];
        velocity_b[l] = opts.momentum * velocity_b[l] - lr * grads.b[l];
        m.w[l] += velocity_w[l];
        m.b[l] += velocity_b[l];
      }
    }
    if (!m.w.back().allFinite()) throw NumericError("x-vector training diverged");
    double loss = loss_sum / order.size();
    res.loss.push_back(loss);
    res.accuracy.push_back(static_cast<double>(correct_sum) / order.size());
    if (!(loss < best * (1.0 - opts.min_improvement))) lr *= 0.5;
    best = std::min(best, loss);
  }
  return res;
}

void SaveXvector(const XvectorModel &m, const std::string &path) {
  m.Validate();
  const auto &c = m.config;
  ByteWriter w;
  w.U32(c.input_dim);
  w.U32(static_cast<uint32_t>(c.frame_sizes.size()));
  for (size_t l = 0; l < c.frame_sizes.size(); ++l) {
    w.U32(c.frame_sizes[l]);
    w.U32(static_cast<uint32_t>(c.contexts[l].size()));
    for (int o : c.contexts[l]) w.U32(static_cast<uint32_t>(static_cast<int32_t>(o)));
  }
  w.U32(static_cast<uint32_t>(c.segment_sizes.size()));
  for (int s : c.segment_sizes) w.U32(s);
  w.U32(c.num_speakers);
  for (size_t l = 0; l < m.w.size(); ++l) {
    w.MatrixF64(m.w[l]);
    w.VectorF64(m.b[l]);
  }
  SaveModelFile(path, ModelType::kXvector, w);
}

XvectorModel LoadXvector(const std::string &path) {
  ByteReader r = LoadModelFile(path, ModelType::kXvector);
  XvectorModel m;
  auto &c = m.config;
  auto count = [&](uint32_t limit) {
    uint32_t n = r.U32();
    if (n > limit) throw DataError(path + ": implausible x-vector config");
    return n;
  };
  c.input_dim = static_cast<int>(count(1 << 16));
  c.frame_sizes.resize(count(64));
  c.contexts.resize(c.frame_sizes.size());
  for (size_t l = 0; l < c.frame_sizes.size(); ++l) {
    c.frame_sizes[l] = static_cast<int>(count(1 << 16));
    c.contexts[l].resize(count(64));
    for (int &o : c.contexts[l]) o = static_cast<int32_t>(r.U32());
  }
  c.segment_sizes.resize(count(64));
  for (int &s : c.segment_sizes) s = static_cast<int>(count(1 << 16));
  c.num_speakers = static_cast<int>(count(1 << 24));
  c.Validate();
  for (auto [out, cols] : LayerShapes(c)) {
    m.w.push_back(r.MatrixF64(out, cols));
    m.b.push_back(r.VectorF64(out));
  }
  if (!r.AtEnd()) throw DataError(path + ": trailing bytes");
  m.Validate();
  return m;
}

}  // namespace svkit
