// svkit/src/lda.cc

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

#include "svkit/lda.h"

#include <map>

#include "svkit/model-io.h"

namespace svkit {

LdaProjection TrainLda(const Matrix &vectors, const std::vector<std::string> &labels,
                       int out_dim) {
  if (static_cast<size_t>(vectors.rows()) != labels.size())
    throw DataError("LDA: vector and label counts differ");
  if (!vectors.allFinite()) throw NumericError("LDA: non-finite input vector");
  const int d = static_cast<int>(vectors.cols());
  std::map<std::string, std::pair<double, Vector>> classes;
  for (Eigen::Index i = 0; i < vectors.rows(); ++i) {
    auto &c = classes[labels[i]];
    if (c.first == 0) c.second = Vector::Zero(d);
    c.first += 1;
    c.second += vectors.row(i).transpose();
  }
  const int num_classes = static_cast<int>(classes.size());
  if (num_classes < 2) throw DataError("LDA: need at least 2 speakers");
  if (out_dim < 1 || out_dim > std::min(d, num_classes - 1))
    throw UsageError("LDA: output dim " + std::to_string(out_dim) + " must be in [1, " +
                     std::to_string(std::min(d, num_classes - 1)) + "]");

  LdaProjection p;
  const double n = static_cast<double>(vectors.rows());
  p.global_mean = vectors.colwise().mean().transpose();
  Matrix centered = vectors.rowwise() - p.global_mean.transpose();
  Matrix total = centered.transpose() * centered / n;
  Matrix between = Matrix::Zero(d, d);
  for (auto &[id, c] : classes) {
    Vector m = c.second / c.first - p.global_mean;
    between += c.first * m * m.transpose();
  }
  between /= n;
  Matrix within = total - between;
  within = 0.5 * (within + within.transpose()).eval();
  within.diagonal().array() += 1e-8 * std::max(within.trace(), 1e-300) / d;

  Eigen::GeneralizedSelfAdjointEigenSolver<Matrix> es(between, within);
  if (es.info() != Eigen::Success)
    throw NumericError("LDA: within-class scatter is not positive definite");
  p.matrix.resize(d, out_dim);
  for (int k = 0; k < out_dim; ++k) {
    Vector col = es.eigenvectors().col(d - 1 - k);
    Eigen::Index arg;
    col.cwiseAbs().maxCoeff(&arg);
    if (col(arg) < 0) col = -col;
    p.matrix.col(k) = col;
  }
  return p;
}

Vector ProjectAndNorm(const LdaProjection &p, const Vector &v) {
  if (v.size() != p.InDim())
    throw DataError("LDA: input dim " + std::to_string(v.size()) + " vs " +
                    std::to_string(p.InDim()));
  Vector y = p.matrix.transpose() * (v - p.global_mean);
  if (!(y.norm() >= 1e-12)) throw NumericError("LDA: projection has (near) zero norm");
  return y / y.norm();
}

void SaveLda(const LdaProjection &p, const std::string &path) {
  ByteWriter w;
  w.U32(p.InDim());
  w.U32(p.OutDim());
  w.MatrixF64(p.matrix);
  w.VectorF64(p.global_mean);
  SaveModelFile(path, ModelType::kLda, w);
}

LdaProjection LoadLda(const std::string &path) {
  ByteReader r = LoadModelFile(path, ModelType::kLda);
  LdaProjection p;
  uint32_t in = r.U32(), out = r.U32();
  p.matrix = r.MatrixF64(in, out);
  p.global_mean = r.VectorF64(in);
  if (!r.AtEnd()) throw DataError(path + ": trailing bytes");
  if (!p.matrix.allFinite() || !p.global_mean.allFinite())
    throw NumericError(path + ": non-finite LDA parameters");
  return p;
}

}  // namespace svkit
