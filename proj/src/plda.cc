// svkit/src/plda.cc

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

#include "svkit/plda.h"

#include <cmath>
#include <map>
#include <numbers>

#include "svkit/parallel.h"

namespace svkit {

namespace {

constexpr double kLog2Pi = 1.8378770664093454836;

struct SpeakerGroup {
  double n = 0;
  Vector sum;
};

std::vector<SpeakerGroup> GroupCentered(const Matrix &x, const std::vector<std::string> &labels) {
  std::map<std::string, SpeakerGroup> groups;
  for (Eigen::Index i = 0; i < x.rows(); ++i) {
    auto &g = groups[labels[i]];
    if (g.n == 0) g.sum = Vector::Zero(x.cols());
    g.n += 1;
    g.sum += x.row(i).transpose();
  }
  std::vector<SpeakerGroup> out;
  for (auto &[id, g] : groups) out.push_back(std::move(g));
  return out;
}

double LogDet(const Eigen::LLT<Matrix> &llt) {
  return 2.0 * llt.matrixLLT().diagonal().array().log().sum();
}

Eigen::LLT<Matrix> Factor(const Matrix &m, const char *what) {
  Eigen::LLT<Matrix> llt(m);
  if (llt.info() != Eigen::Success)
    throw NumericError(std::string("PLDA: ") + what + " is not positive definite");
  return llt;
}

void CheckInputs(const Matrix &vectors, const std::vector<std::string> &labels) {
  if (static_cast<size_t>(vectors.rows()) != labels.size())
    throw DataError("PLDA: " + std::to_string(vectors.rows()) + " vectors but " +
                    std::to_string(labels.size()) + " labels");
  if (vectors.rows() == 0) throw DataError("PLDA: no training vectors");
  if (!vectors.allFinite()) throw NumericError("PLDA: non-finite training vector");
}

void Ridge(Matrix &sigma) {
  sigma = 0.5 * (sigma + sigma.transpose()).eval();
  double r = 1e-8 * sigma.trace() / sigma.rows();
  sigma.diagonal().array() += r;
}

double LogLikCentered(const PldaModel &m, const Matrix &x,
                      const std::vector<SpeakerGroup> &groups) {
  const int e = m.Dim(), q = m.Rank();
  auto sl = Factor(m.sigma, "residual covariance");
  double logdet_sigma = LogDet(sl);
  Matrix six = sl.solve(x.transpose());  // E x N
  double quad = (x.transpose().array() * six.array()).sum();
  double total = -0.5 * (x.rows() * (e * kLog2Pi + logdet_sigma) + quad);
  if (q == 0) return total;
  Matrix siv = sl.solve(m.v);
  Matrix vsv = m.v.transpose() * siv;
  for (const auto &g : groups) {
    Matrix p = Matrix::Identity(q, q) + g.n * vsv;
    auto pl = Factor(p, "speaker posterior precision");
    Vector b = siv.transpose() * g.sum;
    total += -0.5 * LogDet(pl) + 0.5 * b.dot(pl.solve(b));
  }
  return total;
}

}  // namespace

void PldaModel::Validate() const {
  const int e = Dim();
  if (e == 0) throw DataError("PLDA model is empty");
  if (v.rows() != e || sigma.rows() != e || sigma.cols() != e)
    throw DataError("PLDA model shapes do not chain");
  if (Rank() > e) throw DataError("PLDA rank exceeds dimension");
  if (!mu.allFinite() || !v.allFinite() || !sigma.allFinite())
    throw NumericError("PLDA model has non-finite parameters");
  Eigen::SelfAdjointEigenSolver<Matrix> es(sigma, Eigen::EigenvaluesOnly);
  if (!(es.eigenvalues().minCoeff() > 1e-10))
    throw NumericError("PLDA residual covariance is not positive definite");
}

double PldaLogLikelihood(const PldaModel &m, const Matrix &vectors,
                         const std::vector<std::string> &labels) {
  CheckInputs(vectors, labels);
  if (vectors.cols() != m.Dim()) throw DataError("PLDA: dimension mismatch");
  Matrix x = vectors.rowwise() - m.mu.transpose();
  return LogLikCentered(m, x, GroupCentered(x, labels));
}

PldaTrainResult TrainPlda(const Matrix &vectors, const std::vector<std::string> &labels,
                          const PldaTrainOptions &opts) {
  CheckInputs(vectors, labels);
  const int e = static_cast<int>(vectors.cols()), q = opts.rank;
  if (opts.iters < 0) throw UsageError("PLDA: negative iteration count");
  if (q < 0 || q > e)
    throw UsageError("PLDA: rank " + std::to_string(q) + " outside [0, " + std::to_string(e) + "]");

  PldaTrainResult res;
  PldaModel &m = res.model;
  m.mu = vectors.colwise().mean().transpose();
  Matrix x = vectors.rowwise() - m.mu.transpose();
  const double n_total = static_cast<double>(x.rows());
  auto groups = GroupCentered(x, labels);
  if (groups.size() < 2) throw DataError("PLDA: need at least 2 speakers");
  if (static_cast<int>(groups.size()) < q)
    throw DataError("PLDA: " + std::to_string(groups.size()) + " speakers is fewer than rank " +
                    std::to_string(q));

  Matrix scatter = x.transpose() * x;
  Matrix between = Matrix::Zero(e, e);
  for (const auto &g : groups) {
    Vector mean = g.sum / g.n;
    between += g.n * mean * mean.transpose();
  }
  Matrix within = (scatter - between) / n_total;
  between /= n_total;
  if (within.trace() < 1e-6 * scatter.trace() / n_total) within = scatter / n_total;
  m.sigma = within;
  Ridge(m.sigma);

  Eigen::SelfAdjointEigenSolver<Matrix> es(between);
  m.v.resize(e, q);
  for (int k = 0; k < q; ++k) {
    Vector col = es.eigenvectors().col(e - 1 - k);
    Eigen::Index arg;
    col.cwiseAbs().maxCoeff(&arg);
    if (col(arg) < 0) col = -col;
    m.v.col(k) = col * std::sqrt(std::max(es.eigenvalues()(e - 1 - k), 1e-6 * within.trace() / e));
  }

  for (int it = 0; it < opts.iters; ++it) {
    res.lower_bound.push_back(LogLikCentered(m, x, groups));
    Matrix r = Matrix::Zero(q, q), z = Matrix::Zero(e, q);
    if (q > 0) {
      auto sl = Factor(m.sigma, "residual covariance");
      Matrix siv = sl.solve(m.v);
      Matrix vsv = m.v.transpose() * siv;
      for (const auto &g : groups) {
        Matrix p = Matrix::Identity(q, q) + g.n * vsv;
        auto pl = Factor(p, "speaker posterior precision");
        Vector h = pl.solve(siv.transpose() * g.sum);
        r += g.n * (pl.solve(Matrix::Identity(q, q)) + h * h.transpose());
        z += g.sum * h.transpose();
      }
      Eigen::LDLT<Matrix> rl(r);
      if (rl.info() != Eigen::Success) throw NumericError("PLDA: singular speaker accumulator");
      m.v = rl.solve(z.transpose()).transpose();
    }
    m.sigma = (scatter - m.v * z.transpose()) / n_total;
    Ridge(m.sigma);
    m.Validate();
  }
  res.lower_bound.push_back(LogLikCentered(m, x, groups));
  return res;
}

PldaScorer::PldaScorer(const PldaModel &m) : model_(m) {
  model_.Validate();
  Matrix b = m.v * m.v.transpose();
  Matrix w = b + m.sigma;
  // The joint covariance [[W,B],[B,W]] block-diagonalizes in the sum and
  // difference coordinates, giving W+B and W-B = sigma.
  auto sum_l = Factor(w + b, "same-speaker covariance");
  auto diff_l = Factor(m.sigma, "residual covariance");
  auto w_l = Factor(w, "marginal covariance");
  const int e = m.Dim();
  Matrix eye = Matrix::Identity(e, e);
  Matrix sum_inv = sum_l.solve(eye), diff_inv = diff_l.solve(eye), w_inv = w_l.solve(eye);
  Matrix a = 0.5 * (sum_inv + diff_inv);
  g_ = 0.5 * (sum_inv - diff_inv);
  g_ = 0.5 * (g_ + g_.transpose()).eval();
  q_ = w_inv - a;
  q_ = 0.5 * (q_ + q_.transpose()).eval();
  constant_ = LogDet(w_l) - 0.5 * (LogDet(sum_l) + LogDet(diff_l));
}

double PldaScorer::Llr(const Vector &enroll, const Vector &test) const {
  if (enroll.size() != model_.Dim() || test.size() != model_.Dim())
    throw DataError("PLDA: trial vector dim " + std::to_string(enroll.size()) + "/" +
                    std::to_string(test.size()) + " vs model dim " +
                    std::to_string(model_.Dim()));
  Vector e = enroll - model_.mu, t = test - model_.mu;
  return 0.5 * e.dot(q_ * e) + 0.5 * t.dot(q_ * t) - e.dot(g_ * t) + constant_;
}

double PldaLlr(const PldaModel &m, const Vector &enroll, const Vector &test) {
  return PldaScorer(m).Llr(enroll, test);
}

Vector EnrollmentVector(const EmbeddingArchive &archive, const Trial &t) {
  auto sessions = t.EnrollSessions();
  Vector acc = archive.Get(sessions[0]);
  for (size_t i = 1; i < sessions.size(); ++i) acc += archive.Get(sessions[i]);
  acc /= static_cast<double>(sessions.size());
  return LengthNormalize(acc);
}

ScoreSet ScoreTrials(const PldaScorer &scorer, const EmbeddingArchive &archive,
                     const TrialList &trials, int workers) {
  ScoreSet out;
  out.scores.resize(trials.trials.size());
  ParallelFor(trials.trials.size(), workers, [&](size_t i) {
    const Trial &t = trials.trials[i];
    out.scores[i] = {t.enroll_id, t.test_id,
                     scorer.Llr(EnrollmentVector(archive, t), archive.Get(t.test_id))};
  });
  return out;
}

void SavePlda(const PldaModel &m, const std::string &path) {
  m.Validate();
  ByteWriter w;
  w.U32(m.Dim());
  w.U32(m.Rank());
  w.VectorF64(m.mu);
  w.MatrixF64(m.v);
  w.MatrixF64(m.sigma);
  SaveModelFile(path, ModelType::kPlda, w);
}

PldaModel LoadPlda(const std::string &path) {
  ByteReader r = LoadModelFile(path, ModelType::kPlda);
  PldaModel m;
  uint32_t e = r.U32(), q = r.U32();
  m.mu = r.VectorF64(e);
  m.v = r.MatrixF64(e, q);
  m.sigma = r.MatrixF64(e, e);
  if (!r.AtEnd()) throw DataError(path + ": trailing bytes");
  m.Validate();
  return m;
}

}  // namespace svkit
