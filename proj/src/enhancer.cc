// svkit/src/enhancer.cc

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

#include "svkit/enhancer.h"

#include <algorithm>
#include <cmath>
#include <numeric>

#include "svkit/model-io.h"

namespace svkit {

namespace {

constexpr double kStdFloor = 1e-6;
constexpr Eigen::Index kEvalChunk = 1024;

struct FrameRef {
  uint32_t utt;
  uint32_t frame;
};

void CheckInput(const AeModel &m, const Matrix &input) {
  if (input.cols() != m.config.InputDim())
    throw DataError("autoencoder input has " + std::to_string(input.cols()) +
                    " columns, expected " + std::to_string(m.config.InputDim()));
}

// Rows gathered from several utterances into one batch.
Matrix GatherBatch(const std::vector<AePair> &data, const std::vector<FrameRef> &refs,
                   size_t begin, size_t end, int context, const std::vector<Matrix> &targets,
                   Matrix *target) {
  const Eigen::Index bins = data[0].input.cols();
  Matrix x(end - begin, (2 * context + 1) * bins);
  target->resize(end - begin, bins);
  for (size_t i = begin; i < end; ++i) {
    const Matrix &in = data[refs[i].utt].input;
    const Eigen::Index last = in.rows() - 1;
    for (int c = -context; c <= context; ++c) {
      Eigen::Index src = std::clamp<Eigen::Index>(refs[i].frame + c, 0, last);
      x.block(i - begin, (c + context) * bins, 1, bins) = in.row(src);
    }
    target->row(i - begin) = targets[refs[i].utt].row(refs[i].frame);
  }
  return x;
}

double SumSquaredError(const AeModel &m, const Matrix &input, const Matrix &target) {
  double acc = 0;
  for (Eigen::Index b = 0; b < input.rows(); b += kEvalChunk) {
    Eigen::Index len = std::min(kEvalChunk, input.rows() - b);
    acc += (AeForward(m, input.middleRows(b, len)) - target.middleRows(b, len)).squaredNorm();
  }
  return acc;
}

double LossOver(const AeModel &m, const std::vector<AePair> &data,
                const std::vector<Matrix> &targets, const std::vector<size_t> &utts) {
  double acc = 0, count = 0;
  for (size_t u : utts) {
    acc += SumSquaredError(m, StackContext(data[u].input, m.config.context), targets[u]);
    count += static_cast<double>(targets[u].size());
  }
  return acc / count;
}

}  // namespace

void AeConfig::Validate() const {
  if (context < 0) throw UsageError("autoencoder context must be >= 0");
  if (bins < 1) throw UsageError("autoencoder bins must be >= 1");
  if (hidden.empty()) throw UsageError("autoencoder needs at least one hidden layer");
  for (int h : hidden)
    if (h < 1) throw UsageError("autoencoder hidden sizes must be positive");
}

AeConfig AeConfig::Desk() {
  AeConfig c;
  c.context = 5;
  c.hidden = {256, 256, 256};
  return c;
}

void AeModel::Validate() const {
  config.Validate();
  if (layers.size() != config.hidden.size() + 1)
    throw DataError("autoencoder layer count does not match its config");
  int in = config.InputDim();
  for (size_t l = 0; l < layers.size(); ++l) {
    int out = l < config.hidden.size() ? config.hidden[l] : config.bins;
    if (layers[l].w.rows() != out || layers[l].w.cols() != in || layers[l].b.size() != out)
      throw DataError("autoencoder layer " + std::to_string(l) + " has the wrong shape");
    if (!layers[l].w.allFinite() || !layers[l].b.allFinite())
      throw NumericError("autoencoder layer " + std::to_string(l) + " is non-finite");
    in = out;
  }
  if (out_mean.size() != config.bins || out_std.size() != config.bins)
    throw DataError("autoencoder de-normalization has the wrong size");
  if (!((out_std.array() > 0).all()) || !out_mean.allFinite())
    throw NumericError("autoencoder de-normalization std must be positive");
}

AeModel InitAeModel(const AeConfig &cfg, uint64_t seed) {
  cfg.Validate();
  AeModel m;
  m.config = cfg;
  Rng rng(MixSeed(seed, 0x6165));
  int in = cfg.InputDim();
  for (size_t l = 0; l <= cfg.hidden.size(); ++l) {
    int out = l < cfg.hidden.size() ? cfg.hidden[l] : cfg.bins;
    double a = std::sqrt(6.0 / (in + out));
    DenseLayer layer;
    layer.w.resize(out, in);
    for (Eigen::Index j = 0; j < in; ++j)
      for (Eigen::Index i = 0; i < out; ++i) layer.w(i, j) = UniformReal(rng, -a, a);
    layer.b = Vector::Zero(out);
    m.layers.push_back(std::move(layer));
    in = out;
  }
  m.out_mean = Vector::Zero(cfg.bins);
  m.out_std = Vector::Ones(cfg.bins);
  m.meta.seed = seed;
  return m;
}

Matrix AeForward(const AeModel &m, const Matrix &input) {
  CheckInput(m, input);
  Matrix h = input;
  for (size_t l = 0; l < m.layers.size(); ++l) {
    Matrix a = h * m.layers[l].w.transpose();
    a.rowwise() += m.layers[l].b.transpose();
    h = l + 1 < m.layers.size() ? Matrix(a.array().tanh()) : std::move(a);
  }
  return h;
}

double AeLossAndGradients(const AeModel &m, const Matrix &input, const Matrix &target,
                          AeGradients *grads) {
  CheckInput(m, input);
  if (target.rows() != input.rows() || target.cols() != m.config.bins)
    throw DataError("autoencoder target shape does not match the input batch");
  if (input.rows() == 0) throw DataError("empty autoencoder batch");
  const size_t nl = m.layers.size();
  std::vector<Matrix> h(nl + 1);
  h[0] = input;
  for (size_t l = 0; l < nl; ++l) {
    Matrix a = h[l] * m.layers[l].w.transpose();
    a.rowwise() += m.layers[l].b.transpose();
    h[l + 1] = l + 1 < nl ? Matrix(a.array().tanh()) : std::move(a);
  }
  Matrix diff = h[nl] - target;
  const double scale = 1.0 / static_cast<double>(diff.size());
  double loss = diff.squaredNorm() * scale;
  if (!grads) return loss;
  grads->layers.resize(nl);
  Matrix g = 2.0 * scale * diff;
  for (size_t l = nl; l-- > 0;) {
    if (l + 1 < nl) g.array() *= 1.0 - h[l + 1].array().square();
    grads->layers[l].w = g.transpose() * h[l];
    grads->layers[l].b = g.colwise().sum().transpose();
    if (l > 0) g = g * m.layers[l].w;
  }
  return loss;
}

BinStats ComputeBinStats(const Matrix &frames) {
  if (frames.rows() == 0) throw DataError("no frames for bin statistics");
  BinStats s;
  s.mean = frames.colwise().mean().transpose();
  s.std = ((frames.rowwise() - s.mean.transpose()).array().square().colwise().mean())
              .sqrt().transpose().cwiseMax(kStdFloor);
  return s;
}

Matrix NormalizeFrames(const Matrix &frames, const BinStats &s) {
  if (frames.cols() != s.mean.size()) throw DataError("bin statistics dim mismatch");
  return ((frames.rowwise() - s.mean.transpose()).array().rowwise() /
          s.std.transpose().array()).matrix();
}

Matrix StackContext(const Matrix &frames, int context) {
  std::vector<Eigen::Index> rows(frames.rows());
  std::iota(rows.begin(), rows.end(), 0);
  return StackContextRows(frames, context, rows);
}

Matrix StackContextRows(const Matrix &frames, int context, const std::vector<Eigen::Index> &rows) {
  const Eigen::Index bins = frames.cols(), last = frames.rows() - 1;
  if (frames.rows() == 0) throw DataError("cannot stack context of an empty matrix");
  Matrix out(rows.size(), (2 * context + 1) * bins);
  for (size_t i = 0; i < rows.size(); ++i)
    for (int c = -context; c <= context; ++c)
      out.block(i, (c + context) * bins, 1, bins) =
          frames.row(std::clamp<Eigen::Index>(rows[i] + c, 0, last));
  return out;
}

AePair MakeTrainingPair(const Waveform &noisy, const Waveform &clean, const AeConfig &cfg,
                        const StftConfig &stft) {
  if (noisy.size() != clean.size())
    throw DataError("noisy and clean lengths differ (" + std::to_string(noisy.size()) + " vs " +
                    std::to_string(clean.size()) + ")");
  if (noisy.sample_rate != clean.sample_rate) throw DataError("noisy and clean rates differ");
  if (stft.NumBins() != cfg.bins)
    throw UsageError("STFT gives " + std::to_string(stft.NumBins()) + " bins, model expects " +
                     std::to_string(cfg.bins));
  Matrix n = LogMagnitude(Stft(noisy, stft)).data;
  Matrix c = LogMagnitude(Stft(clean, stft)).data;
  if (n.rows() < 1) throw DataError("utterance shorter than one analysis frame");
  AePair p;
  p.input = NormalizeFrames(n, ComputeBinStats(n));
  p.clean_stats = ComputeBinStats(c);
  p.clean = std::move(c);
  return p;
}

void AeTrainOptions::Validate() const {
  if (!(learning_rate >= 0)) throw UsageError("learning rate must be >= 0");
  if (!(momentum >= 0 && momentum < 1)) throw UsageError("momentum must be in [0,1)");
  if (batch_size < 1) throw UsageError("batch size must be positive");
  if (epochs < 0) throw UsageError("epoch count must be >= 0");
  if (!(dev_fraction >= 0 && dev_fraction < 1)) throw UsageError("dev fraction must be in [0,1)");
}

double AeDevLoss(const AeModel &m, const std::vector<AePair> &data) {
  std::vector<Matrix> targets;
  std::vector<size_t> all;
  for (size_t i = 0; i < data.size(); ++i) {
    targets.push_back(data[i].NormalizedTarget());
    all.push_back(i);
  }
  return LossOver(m, data, targets, all);
}

AeTrainResult TrainAe(const AeModel &init, const std::vector<AePair> &data,
                      const AeTrainOptions &opts) {
  opts.Validate();
  init.Validate();
  if (data.empty()) throw DataError("no autoencoder training data");
  for (const auto &p : data)
    if (p.input.cols() != init.config.bins || p.clean.rows() != p.input.rows() ||
        p.clean.cols() != init.config.bins || p.input.rows() == 0)
      throw DataError("training pair shape does not match the autoencoder");

  std::vector<Matrix> targets;
  for (const auto &p : data) targets.push_back(p.NormalizedTarget());

  std::vector<size_t> order(data.size());
  std::iota(order.begin(), order.end(), 0);
  Rng split_rng(MixSeed(opts.seed, 1));
  std::shuffle(order.begin(), order.end(), split_rng);
  size_t n_dev = 0;
  if (data.size() >= 2 && opts.dev_fraction > 0)
    n_dev = std::clamp<size_t>(std::llround(opts.dev_fraction * data.size()), 1, data.size() - 1);
  std::vector<size_t> dev(order.begin(), order.begin() + n_dev);
  std::vector<size_t> train(order.begin() + n_dev, order.end());
  std::sort(dev.begin(), dev.end());
  std::sort(train.begin(), train.end());
  if (dev.empty()) dev = train;

  std::vector<FrameRef> refs;
  for (size_t u : train)
    for (Eigen::Index t = 0; t < data[u].input.rows(); ++t)
      refs.push_back({static_cast<uint32_t>(u), static_cast<uint32_t>(t)});

  AeTrainResult res;
  res.model = init;
  AeModel &m = res.model;
  std::vector<DenseLayer> velocity = m.layers;
  for (auto &v : velocity) {
    v.w.setZero();
    v.b.setZero();
  }
  double lr = opts.learning_rate;
  double best = LossOver(m, data, targets, dev);
  res.dev_loss.push_back(best);
  res.train_loss.push_back(LossOver(m, data, targets, train));
  res.learning_rate.push_back(lr);

  AeGradients grads;
  Matrix target;
  for (int epoch = 0; epoch < opts.epochs; ++epoch) {
    Rng rng(MixSeed(opts.seed, 100 + epoch));
    std::shuffle(refs.begin(), refs.end(), rng);
    double loss_sum = 0;
    size_t batches = 0;
    for (size_t b = 0; b < refs.size(); b += opts.batch_size) {
      size_t e = std::min(refs.size(), b + opts.batch_size);
      Matrix x = GatherBatch(data, refs, b, e, m.config.context, targets, &target);
      loss_sum += AeLossAndGradients(m, x, target, &grads);
      ++batches;
      for (size_t l = 0; l < m.layers.size(); ++l) {
        velocity[l].w = opts.momentum * velocity[l].w - lr * grads.layers[l].w;
        velocity[l].b = opts.momentum * velocity[l].b - lr * grads.layers[l].b;
        m.layers[l].w += velocity[l].w;
        m.layers[l].b += velocity[l].b;
      }
    }
    if (!m.layers.back().w.allFinite()) throw NumericError("autoencoder training diverged");
    double d = LossOver(m, data, targets, dev);
    res.dev_loss.push_back(d);
    res.train_loss.push_back(batches ? loss_sum / batches : 0.0);
    if (!(d < best * (1.0 - opts.min_improvement))) lr *= 0.5;
    best = std::min(best, d);
    res.learning_rate.push_back(lr);
  }

  Eigen::Index frames = 0;
  for (size_t u : dev) frames += data[u].clean.rows();
  Matrix pooled(frames, m.config.bins);
  Eigen::Index at = 0;
  for (size_t u : dev) {
    pooled.middleRows(at, data[u].clean.rows()) = data[u].clean;
    at += data[u].clean.rows();
  }
  BinStats global = ComputeBinStats(pooled);
  m.out_mean = global.mean;
  m.out_std = global.std;
  m.meta.seed = opts.seed;
  m.meta.epochs = opts.epochs;
  m.meta.final_dev_loss = res.dev_loss.back();
  m.meta.final_train_loss = res.train_loss.back();
  return res;
}

Matrix EnhanceLogMagnitude(const AeModel &m, const Matrix &noisy_logmag) {
  if (noisy_logmag.cols() != m.config.bins)
    throw DataError("log-magnitude has " + std::to_string(noisy_logmag.cols()) +
                    " bins, model expects " + std::to_string(m.config.bins));
  Matrix x = StackContext(NormalizeFrames(noisy_logmag, ComputeBinStats(noisy_logmag)),
                          m.config.context);
  Matrix y(x.rows(), m.config.bins);
  for (Eigen::Index b = 0; b < x.rows(); b += kEvalChunk) {
    Eigen::Index len = std::min(kEvalChunk, x.rows() - b);
    y.middleRows(b, len) = AeForward(m, x.middleRows(b, len));
  }
  return ((y.array().rowwise() * m.out_std.transpose().array()).rowwise() +
          m.out_mean.transpose().array()).matrix();
}

Waveform Resynthesize(const ComplexSpectrogram &phase_source, const Matrix &logmag,
                      size_t length) {
  if (logmag.rows() != phase_source.NumFrames() || logmag.cols() != phase_source.frames.cols())
    throw DataError("magnitude and phase spectrogram shapes differ");
  ComplexSpectrogram out = phase_source;
  for (Eigen::Index t = 0; t < logmag.rows(); ++t)
    for (Eigen::Index k = 0; k < logmag.cols(); ++k) {
      double mag = std::max(std::exp(logmag(t, k)) - kLogMagFloor, 0.0);
      double arg = std::arg(phase_source.frames(t, k));
      out.frames(t, k) = std::polar(mag, arg);
    }
  Waveform w = Istft(out);
  w.samples.resize(length, 0.0);
  return w;
}

Waveform EnhanceUtterance(const AeModel &m, const Waveform &w, const StftConfig &stft) {
  if (w.size() < static_cast<size_t>(stft.window_length))
    throw DataError("utterance shorter than one analysis frame");
  ComplexSpectrogram s = Stft(w, stft);
  Matrix est = EnhanceLogMagnitude(m, LogMagnitude(s).data);
  return Resynthesize(s, est, w.size());
}

double LogSpectralMse(const Waveform &a, const Waveform &b, const StftConfig &stft) {
  Matrix la = LogMagnitude(Stft(a, stft)).data, lb = LogMagnitude(Stft(b, stft)).data;
  if (la.rows() != lb.rows() || la.rows() == 0)
    throw DataError("log-spectral MSE needs equal, non-empty frame counts");
  return (la - lb).squaredNorm() / static_cast<double>(la.size());
}

void SaveAe(const AeModel &m, const std::string &path) {
  m.Validate();
  ByteWriter w;
  w.U32(m.config.context);
  w.U32(m.config.bins);
  w.U32(static_cast<uint32_t>(m.config.hidden.size()));
  for (int h : m.config.hidden) w.U32(h);
  for (const auto &l : m.layers) {
    w.MatrixF64(l.w);
    w.VectorF64(l.b);
  }
  w.VectorF64(m.out_mean);
  w.VectorF64(m.out_std);
  w.U64(m.meta.seed);
  w.U32(m.meta.epochs);
  w.F64(m.meta.final_train_loss);
  w.F64(m.meta.final_dev_loss);
  SaveModelFile(path, ModelType::kAutoencoder, w);
}

AeModel LoadAe(const std::string &path) {
  ByteReader r = LoadModelFile(path, ModelType::kAutoencoder);
  AeModel m;
  m.config.context = static_cast<int>(r.U32());
  m.config.bins = static_cast<int>(r.U32());
  uint32_t nh = r.U32();
  if (nh == 0 || nh > 64) throw DataError(path + ": bad hidden layer count");
  m.config.hidden.resize(nh);
  for (auto &h : m.config.hidden) h = static_cast<int>(r.U32());
  if (m.config.context > 1000 || m.config.bins > 100000) throw DataError(path + ": bad config");
  int in = m.config.InputDim();
  for (size_t l = 0; l <= nh; ++l) {
    int out = l < nh ? m.config.hidden[l] : m.config.bins;
    DenseLayer layer;
    layer.w = r.MatrixF64(out, in);
    layer.b = r.VectorF64(out);
    m.layers.push_back(std::move(layer));
    in = out;
  }
  m.out_mean = r.VectorF64(m.config.bins);
  m.out_std = r.VectorF64(m.config.bins);
  m.meta.seed = r.U64();
  m.meta.epochs = static_cast<int>(r.U32());
  m.meta.final_train_loss = r.F64();
  m.meta.final_dev_loss = r.F64();
  if (!r.AtEnd()) throw DataError(path + ": trailing bytes");
  m.Validate();
  return m;
}

}  // namespace svkit
