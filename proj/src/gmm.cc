// svkit/src/gmm.cc

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

#include "svkit/gmm.h"

#include <cmath>
#include <limits>

#include "svkit/io-util.h"
#include "svkit/model-io.h"
#include "svkit/parallel.h"

namespace svkit {

namespace {

constexpr double kLog2Pi = 1.8378770664093454836;
constexpr Eigen::Index kChunk = 4096;

struct EmAccum {
  double loglik = 0;
  Vector n;
  Matrix f, s;
};

// Frames are processed in fixed chunks and the chunk accumulators summed in
// chunk order, so the result does not depend on the worker count.
EmAccum EStep(const GmmUbm &g, const Matrix &x, int workers) {
  const Eigen::Index n = x.rows();
  const int k = g.NumComponents(), d = g.Dim();
  const size_t chunks = (n + kChunk - 1) / kChunk;
  std::vector<EmAccum> part(chunks);
  ParallelFor(chunks, workers, [&](size_t c) {
    Eigen::Index b = c * kChunk, len = std::min(kChunk, n - b);
    auto frames = x.middleRows(b, len);
    Matrix ll = g.ComponentLogLikes(frames);
    Vector lse = LogSumExpRows(ll);
    Matrix post = (ll.colwise() - lse).array().exp().matrix();
    EmAccum &a = part[c];
    a.loglik = lse.sum();
    a.n = post.colwise().sum().transpose();
    a.f = post.transpose() * frames;
    a.s = post.transpose() * frames.array().square().matrix();
  });
  EmAccum total{0, Vector::Zero(k), Matrix::Zero(k, d), Matrix::Zero(k, d)};
  for (const auto &a : part) {
    total.loglik += a.loglik;
    total.n += a.n;
    total.f += a.f;
    total.s += a.s;
  }
  return total;
}

Matrix PoolFrames(const std::vector<FeatureMatrix> &features) {
  Eigen::Index rows = 0, dim = -1;
  for (const auto &f : features) {
    if (f.NumFrames() == 0) continue;
    if (dim >= 0 && f.Dim() != dim) throw DataError("UBM: feature dims differ across utterances");
    dim = f.Dim();
    rows += f.NumFrames();
  }
  if (dim <= 0) throw DataError("UBM: no training frames");
  Matrix x(rows, dim);
  Eigen::Index at = 0;
  for (const auto &f : features) {
    if (f.NumFrames() == 0) continue;
    x.middleRows(at, f.NumFrames()) = f.data;
    at += f.NumFrames();
  }
  if (!x.allFinite()) throw NumericError("UBM: non-finite feature values");
  return x;
}

Matrix KMeansPlusPlus(const Matrix &x, int k, Rng &rng) {
  const Eigen::Index n = x.rows();
  Matrix centers(k, x.cols());
  centers.row(0) = x.row(UniformInt(rng, 0, n - 1));
  Vector dist = (x.rowwise() - centers.row(0)).rowwise().squaredNorm();
  for (int c = 1; c < k; ++c) {
    double total = dist.sum();
    Eigen::Index pick = 0;
    if (total > 0) {
      double r = UniformReal(rng, 0.0, total), acc = 0;
      for (pick = 0; pick < n - 1; ++pick) {
        acc += dist(pick);
        if (acc >= r) break;
      }
    } else {
      pick = UniformInt(rng, 0, n - 1);
    }
    centers.row(c) = x.row(pick);
    dist = dist.cwiseMin((x.rowwise() - centers.row(c)).rowwise().squaredNorm());
  }
  return centers;
}

std::vector<int> Assign(const Matrix &x, const Matrix &centers) {
  // |x-c|^2 = |x|^2 - 2 x.c + |c|^2; the |x|^2 term does not affect argmin.
  Vector cn = centers.rowwise().squaredNorm();
  std::vector<int> label(x.rows());
  for (Eigen::Index b = 0; b < x.rows(); b += kChunk) {
    Eigen::Index len = std::min(kChunk, x.rows() - b);
    Matrix d = (-2.0 * x.middleRows(b, len) * centers.transpose()).rowwise() + cn.transpose();
    for (Eigen::Index i = 0; i < len; ++i) {
      Eigen::Index arg;
      d.row(i).minCoeff(&arg);
      label[b + i] = static_cast<int>(arg);
    }
  }
  return label;
}

}  // namespace

void GmmUbm::Validate() const {
  const int k = NumComponents();
  if (k == 0 || Dim() == 0) throw DataError("GMM is empty");
  if (means.rows() != k || variances.rows() != k || variances.cols() != Dim())
    throw DataError("GMM parameter shapes disagree");
  if (!weights.allFinite() || !means.allFinite() || !variances.allFinite())
    throw NumericError("GMM has non-finite parameters");
  if ((weights.array() <= 0).any()) throw NumericError("GMM weights must be positive");
  if (std::abs(weights.sum() - 1.0) > 1e-9) throw NumericError("GMM weights do not sum to 1");
  if ((variances.array() <= 0).any()) throw NumericError("GMM variances must be positive");
}

Matrix GmmUbm::ComponentLogLikes(const Matrix &frames) const {
  if (frames.cols() != Dim())
    throw DataError("feature dim " + std::to_string(frames.cols()) + " does not match GMM dim " +
                    std::to_string(Dim()));
  Matrix prec = variances.cwiseInverse();
  Vector c = weights.array().log() -
             0.5 * (Dim() * kLog2Pi + variances.array().log().rowwise().sum() +
                    (means.array().square() * prec.array()).rowwise().sum());
  Matrix ll = frames * (means.cwiseProduct(prec)).transpose() -
              0.5 * frames.array().square().matrix() * prec.transpose();
  ll.rowwise() += c.transpose();
  return ll;
}

Vector LogSumExpRows(const Matrix &m) {
  Vector mx = m.rowwise().maxCoeff();
  return mx.array() + (m.colwise() - mx).array().exp().rowwise().sum().log();
}

UbmTrainResult TrainUbm(const std::vector<FeatureMatrix> &features, const UbmTrainOptions &opts,
                        int workers) {
  const int k = opts.num_components;
  if (k < 1) throw UsageError("UBM: need at least one component");
  if (opts.iters < 0 || opts.kmeans_iters < 0) throw UsageError("UBM: negative iteration count");
  Matrix x = PoolFrames(features);
  const Eigen::Index n = x.rows();
  const int d = static_cast<int>(x.cols());
  if (n < 10 * static_cast<Eigen::Index>(k))
    throw DataError("UBM: " + std::to_string(n) + " frames is fewer than 10 per component");

  Vector mean = x.colwise().mean().transpose();
  Vector global_var = ((x.rowwise() - mean.transpose()).array().square().colwise().mean())
                          .transpose().cwiseMax(1e-10);
  Vector floor = opts.variance_floor * global_var;

  Rng rng(MixSeed(opts.seed, 0x75626d));
  Matrix centers = KMeansPlusPlus(x, k, rng);
  std::vector<int> label;
  for (int it = 0; it <= opts.kmeans_iters; ++it) {
    label = Assign(x, centers);
    if (it == opts.kmeans_iters) break;
    Matrix sum = Matrix::Zero(k, d);
    Vector count = Vector::Zero(k);
    for (Eigen::Index i = 0; i < n; ++i) {
      sum.row(label[i]) += x.row(i);
      count(label[i]) += 1;
    }
    for (int c = 0; c < k; ++c)
      if (count(c) > 0) centers.row(c) = sum.row(c) / count(c);
  }

  UbmTrainResult res;
  GmmUbm &g = res.ubm;
  g.weights = Vector::Zero(k);
  g.means = centers;
  g.variances = Matrix::Zero(k, d);
  for (Eigen::Index i = 0; i < n; ++i) {
    g.weights(label[i]) += 1;
    g.variances.row(label[i]) += (x.row(i) - centers.row(label[i])).array().square().matrix();
  }
  for (int c = 0; c < k; ++c) {
    if (g.weights(c) > 0) g.variances.row(c) /= g.weights(c);
    else g.variances.row(c) = global_var.transpose();
    g.variances.row(c) = g.variances.row(c).cwiseMax(floor.transpose());
  }
  g.weights = (g.weights.array() + 1.0) / (g.weights.sum() + k);

  for (int it = 0; it < opts.iters; ++it) {
    EmAccum a = EStep(g, x, workers);
    res.log_likelihood.push_back(a.loglik);
    for (int c = 0; c < k; ++c) {
      if (a.n(c) < 1e-10) continue;  // keep the previous parameters
      g.means.row(c) = a.f.row(c) / a.n(c);
      Eigen::RowVectorXd var = a.s.row(c) / a.n(c) - g.means.row(c).cwiseAbs2();
      g.variances.row(c) = var.cwiseMax(floor.transpose());
    }
    g.weights = (a.n / static_cast<double>(n)).cwiseMax(1e-10);
    g.weights /= g.weights.sum();
    g.Validate();
  }
  res.log_likelihood.push_back(EStep(g, x, workers).loglik);
  return res;
}

SuffStats AccumulateStats(const GmmUbm &ubm, const Matrix &frames) {
  const int k = ubm.NumComponents(), d = ubm.Dim();
  if (frames.cols() != d && frames.rows() > 0)
    throw DataError("feature dim " + std::to_string(frames.cols()) + " does not match GMM dim " +
                    std::to_string(d));
  SuffStats s = SuffStats::Zero(k, d);
  if (frames.rows() == 0) return s;
  Matrix ll = ubm.ComponentLogLikes(frames);
  Matrix post = (ll.colwise() - LogSumExpRows(ll)).array().exp().matrix();
  s.n = post.colwise().sum().transpose();
  s.f = post.transpose() * frames;
  return s;
}

SuffStats AccumulateStats(const GmmUbm &ubm, const FeatureMatrix &f, const FrameMask &mask) {
  return AccumulateStats(ubm, SelectActive(f, mask).data);
}

void WriteUbm(const GmmUbm &ubm, ByteWriter &w) {
  ubm.Validate();
  w.U32(ubm.NumComponents());
  w.U32(ubm.Dim());
  w.VectorF64(ubm.weights);
  w.MatrixF64(ubm.means);
  w.MatrixF64(ubm.variances);
}

GmmUbm ReadUbm(ByteReader &r) {
  GmmUbm g;
  uint32_t k = r.U32(), d = r.U32();
  g.weights = r.VectorF64(k);
  g.means = r.MatrixF64(k, d);
  g.variances = r.MatrixF64(k, d);
  g.Validate();
  return g;
}

void SaveUbm(const GmmUbm &ubm, const std::string &path) {
  ByteWriter w;
  WriteUbm(ubm, w);
  SaveModelFile(path, ModelType::kUbm, w);
}

GmmUbm LoadUbm(const std::string &path) {
  ByteReader r = LoadModelFile(path, ModelType::kUbm);
  GmmUbm g = ReadUbm(r);
  if (!r.AtEnd()) throw DataError(path + ": trailing bytes");
  return g;
}

}  // namespace svkit
