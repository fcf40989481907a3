// svkit/src/ivector.cc

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

#include "svkit/ivector.h"

#include "svkit/model-io.h"
#include "svkit/parallel.h"

namespace svkit {

namespace {

void CheckStats(const IvectorExtractor &ext, const SuffStats &s) {
  if (s.n.size() != ext.ubm.NumComponents() || s.f.rows() != ext.ubm.NumComponents() ||
      s.f.cols() != ext.ubm.Dim())
    throw DataError("statistics shape " + std::to_string(s.f.rows()) + "x" +
                    std::to_string(s.f.cols()) + " does not match the extractor");
}

Eigen::LLT<Matrix> Factor(const Matrix &m) {
  Eigen::LLT<Matrix> llt(m);
  if (llt.info() != Eigen::Success) throw NumericError("i-vector posterior precision is singular");
  return llt;
}

struct Shard {
  double objective = 0;
  std::vector<Matrix> a;
  Matrix c;
};

constexpr size_t kShard = 16;

// Utterances are processed in fixed shards whose accumulators are summed in
// shard order, independent of the worker count.
Shard Accumulate(const IvectorExtractor &ext, const std::vector<SuffStats> &stats, int workers,
                 bool need_accumulators) {
  const int k = ext.ubm.NumComponents(), r = ext.Rank();
  const Eigen::Index kd = ext.t.rows();
  IvectorComputer comp(ext);
  const size_t shards = (stats.size() + kShard - 1) / kShard;
  std::vector<Shard> part(shards);
  ParallelFor(shards, workers, [&](size_t sh) {
    Shard &p = part[sh];
    if (need_accumulators) {
      p.a.assign(k, Matrix::Zero(r, r));
      p.c = Matrix::Zero(kd, r);
    }
    for (size_t u = sh * kShard; u < std::min(stats.size(), (sh + 1) * kShard); ++u) {
      const SuffStats &s = stats[u];
      CheckStats(ext, s);
      Vector wc = comp.WhitenedCentered(s);
      Vector b = ext.t.transpose() * wc;
      IvectorPosterior post = comp.Posterior(s);
      auto llt = Factor(post.precision);
      p.objective += -llt.matrixLLT().diagonal().array().log().sum() + 0.5 * b.dot(post.mean);
      if (!need_accumulators) continue;
      Matrix second = llt.solve(Matrix::Identity(r, r)) + post.mean * post.mean.transpose();
      const int d = ext.ubm.Dim();
      for (int c = 0; c < k; ++c) {
        if (s.n(c) != 0) p.a[c] += s.n(c) * second;
        p.c.middleRows(c * d, d) +=
            (s.f.row(c) - s.n(c) * ext.ubm.means.row(c)).transpose() * post.mean.transpose();
      }
    }
  });
  Shard total;
  total.a.assign(need_accumulators ? k : 0, Matrix::Zero(r, r));
  if (need_accumulators) total.c = Matrix::Zero(kd, r);
  for (const auto &p : part) {
    total.objective += p.objective;
    if (!need_accumulators) continue;
    for (int c = 0; c < k; ++c) total.a[c] += p.a[c];
    total.c += p.c;
  }
  return total;
}

}  // namespace

void IvectorExtractor::Validate() const {
  ubm.Validate();
  if (t.rows() != static_cast<Eigen::Index>(ubm.NumComponents()) * ubm.Dim())
    throw DataError("T matrix rows do not match the UBM supervector size");
  if (Rank() < 1 || Rank() > t.rows()) throw DataError("invalid i-vector rank");
  if (!t.allFinite()) throw NumericError("T matrix has non-finite values");
}

IvectorComputer::IvectorComputer(const IvectorExtractor &ext) : ext_(ext) {
  ext.Validate();
  const int k = ext.ubm.NumComponents(), d = ext.ubm.Dim();
  tst_.resize(k);
  for (int c = 0; c < k; ++c) {
    auto tk = ext.t.middleRows(c * d, d);
    Vector prec = ext.ubm.variances.row(c).transpose().cwiseInverse();
    tst_[c] = tk.transpose() * prec.asDiagonal() * tk;
  }
}

Vector IvectorComputer::WhitenedCentered(const SuffStats &s) const {
  CheckStats(ext_, s);
  const int k = ext_.ubm.NumComponents(), d = ext_.ubm.Dim();
  Vector out(static_cast<Eigen::Index>(k) * d);
  for (int c = 0; c < k; ++c)
    out.segment(c * d, d) = ((s.f.row(c) - s.n(c) * ext_.ubm.means.row(c)).array() /
                             ext_.ubm.variances.row(c).array()).transpose();
  return out;
}

IvectorPosterior IvectorComputer::Posterior(const SuffStats &s) const {
  const int r = ext_.Rank();
  IvectorPosterior p;
  p.precision = Matrix::Identity(r, r);
  for (int c = 0; c < ext_.ubm.NumComponents(); ++c)
    if (s.n(c) != 0) p.precision += s.n(c) * tst_[c];
  Vector b = ext_.t.transpose() * WhitenedCentered(s);
  p.mean = Factor(p.precision).solve(b);
  return p;
}

Vector ExtractIvector(const IvectorExtractor &ext, const SuffStats &s) {
  return IvectorComputer(ext).Extract(s);
}

double TvObjective(const IvectorExtractor &ext, const std::vector<SuffStats> &stats,
                   int workers) {
  return Accumulate(ext, stats, workers, false).objective;
}

TvTrainResult TrainTv(const std::vector<SuffStats> &stats, const GmmUbm &ubm,
                      const TvTrainOptions &opts, int workers) {
  ubm.Validate();
  const int k = ubm.NumComponents(), d = ubm.Dim(), r = opts.rank;
  if (r < 1 || r > k * d) throw UsageError("i-vector rank must be in [1, K*D]");
  if (opts.iters < 0) throw UsageError("T training: negative iteration count");
  if (stats.size() < static_cast<size_t>(r))
    throw DataError("T training: " + std::to_string(stats.size()) +
                    " utterances is fewer than the rank " + std::to_string(r));

  TvTrainResult res;
  IvectorExtractor &ext = res.extractor;
  ext.ubm = ubm;
  ext.t.resize(static_cast<Eigen::Index>(k) * d, r);
  Rng rng(MixSeed(opts.seed, 0x7476));
  for (int c = 0; c < k; ++c)
    for (int i = 0; i < d; ++i) {
      double sd = std::sqrt(ubm.variances(c, i));
      for (int j = 0; j < r; ++j) ext.t(c * d + i, j) = opts.init_scale * sd * StdNormal(rng);
    }

  for (int it = 0; it < opts.iters; ++it) {
    Shard acc = Accumulate(ext, stats, workers, true);
    res.objective.push_back(acc.objective);
    for (int c = 0; c < k; ++c) {
      Matrix a = acc.a[c];
      a.diagonal().array() += 1e-8 * std::max(a.trace() / r, 1.0);
      Eigen::LLT<Matrix> llt(a);
      if (llt.info() != Eigen::Success)
        throw NumericError("T training: component " + std::to_string(c) +
                           " accumulator is singular");
      ext.t.middleRows(c * d, d) = llt.solve(acc.c.middleRows(c * d, d).transpose()).transpose();
    }
    ext.Validate();
  }
  res.objective.push_back(TvObjective(ext, stats, workers));
  return res;
}

void SaveIvectorExtractor(const IvectorExtractor &ext, const std::string &path) {
  ext.Validate();
  ByteWriter w;
  WriteUbm(ext.ubm, w);
  w.U32(ext.Rank());
  w.MatrixF64(ext.t);
  SaveModelFile(path, ModelType::kIvector, w);
}

IvectorExtractor LoadIvectorExtractor(const std::string &path) {
  ByteReader r = LoadModelFile(path, ModelType::kIvector);
  IvectorExtractor ext;
  ext.ubm = ReadUbm(r);
  uint32_t rank = r.U32();
  ext.t = r.MatrixF64(static_cast<size_t>(ext.ubm.NumComponents()) * ext.ubm.Dim(), rank);
  if (!r.AtEnd()) throw DataError(path + ": trailing bytes");
  ext.Validate();
  return ext;
}

}  // namespace svkit
