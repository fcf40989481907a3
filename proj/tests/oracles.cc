// svkit/tests/oracles.cc

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

#include "oracles.h"

#include <algorithm>
#include <cmath>
#include <limits>
#include <numbers>
#include <set>

#include "svkit/filter.h"

namespace svkit {
namespace oracle {

Matrix RandomMatrix(Rng &rng, Eigen::Index r, Eigen::Index c, double scale) {
  return Matrix::NullaryExpr(r, c, [&](Eigen::Index, Eigen::Index) { return scale * StdNormal(rng); });
}

double MaskedEnergy(const Waveform &w, const FrameMask &mask) {
  const auto &h = AWeightingTaps(w.sample_rate);
  const long delay = (static_cast<long>(h.size()) - 1) / 2;
  std::vector<bool> use(w.size(), false);
  for (size_t t = 0; t < mask.size(); ++t)
    if (mask.active[t])
      for (size_t i = t * 80; i < std::min(w.size(), t * 80 + 200); ++i) use[i] = true;
  double acc = 0;
  size_t count = 0;
  for (size_t n = 0; n < w.size(); ++n) {
    if (!use[n]) continue;
    double y = 0;
    for (size_t k = 0; k < h.size(); ++k) {
      long idx = static_cast<long>(n) + delay - static_cast<long>(k);
      if (idx >= 0 && idx < static_cast<long>(w.size())) y += h[k] * w.samples[idx];
    }
    acc += y * y;
    ++count;
  }
  return acc / count;
}

double SnrDb(const Waveform &speech, const Waveform &noise, const FrameMask &mask) {
  return 10 * std::log10(MaskedEnergy(speech, mask) / MaskedEnergy(noise, mask));
}

GmmUbm RandomUbm(Rng &rng, int k, int d) {
  GmmUbm g;
  g.weights = Vector::NullaryExpr(k, [&](Eigen::Index) { return UniformReal(rng, 0.2, 1.0); });
  g.weights /= g.weights.sum();
  g.means = RandomMatrix(rng, k, d);
  g.variances = Matrix::NullaryExpr(k, d, [&](Eigen::Index, Eigen::Index) { return UniformReal(rng, 0.3, 2.0); });
  return g;
}

SuffStats NaiveStats(const GmmUbm &g, const Matrix &x) {
  SuffStats s = SuffStats::Zero(g.NumComponents(), g.Dim());
  for (Eigen::Index t = 0; t < x.rows(); ++t) {
    std::vector<double> logp(g.NumComponents());
    double mx = -std::numeric_limits<double>::infinity();
    for (int k = 0; k < g.NumComponents(); ++k) {
      double lp = std::log(g.weights(k));
      for (int d = 0; d < g.Dim(); ++d) {
        double v = g.variances(k, d), diff = x(t, d) - g.means(k, d);
        lp += -0.5 * std::log(2 * std::numbers::pi * v) - 0.5 * diff * diff / v;
      }
      logp[k] = lp;
      mx = std::max(mx, lp);
    }
    double z = 0;
    for (double lp : logp) z += std::exp(lp - mx);
    for (int k = 0; k < g.NumComponents(); ++k) {
      double p = std::exp(logp[k] - mx) / z;
      s.n(k) += p;
      s.f.row(k) += p * x.row(t);
    }
  }
  return s;
}

// L = I + T' N Sigma^-1 T and L w = T' Sigma^-1 (f - N m).
Vector DenseIvector(const IvectorExtractor &e, const SuffStats &s) {
  const int k = e.ubm.NumComponents(), d = e.ubm.Dim(), kd = k * d;
  Matrix n_big = Matrix::Zero(kd, kd), inv_sigma = Matrix::Zero(kd, kd);
  Vector centered(kd);
  for (int c = 0; c < k; ++c)
    for (int i = 0; i < d; ++i) {
      n_big(c * d + i, c * d + i) = s.n(c);
      inv_sigma(c * d + i, c * d + i) = 1.0 / e.ubm.variances(c, i);
      centered(c * d + i) = s.f(c, i) - s.n(c) * e.ubm.means(c, i);
    }
  Matrix l = Matrix::Identity(e.Rank(), e.Rank()) + e.t.transpose() * n_big * inv_sigma * e.t;
  return l.fullPivLu().solve(e.t.transpose() * inv_sigma * centered);
}

double LogGauss(const Vector &x, const Matrix &cov) {
  Eigen::FullPivLU<Matrix> lu(cov);
  double logdet = std::log(std::abs(lu.determinant()));
  return -0.5 * (x.size() * std::log(2 * std::numbers::pi) + logdet + x.dot(lu.solve(x)));
}

double DirectLlr(const PldaModel &m, const Vector &e, const Vector &t) {
  const int d = m.Dim();
  Matrix b = m.v * m.v.transpose(), w = b + m.sigma;
  Matrix joint(2 * d, 2 * d);
  joint << w, b, b, w;
  Vector et(2 * d);
  et << e - m.mu, t - m.mu;
  return LogGauss(et, joint) - LogGauss(e - m.mu, w) - LogGauss(t - m.mu, w);
}

PldaModel RandomPldaModel(Rng &rng, int dim, int rank) {
  PldaModel m;
  m.mu = RandomMatrix(rng, dim, 1, 0.3).col(0);
  m.v = RandomMatrix(rng, dim, rank);
  Matrix a = RandomMatrix(rng, dim, dim);
  m.sigma = a * a.transpose() / dim + 0.5 * Matrix::Identity(dim, dim);
  return m;
}

std::vector<std::pair<double, double>> BruteVertices(const KeyedScores &s) {
  std::set<double> distinct(s.target.begin(), s.target.end());
  distinct.insert(s.nontarget.begin(), s.nontarget.end());
  std::vector<double> u(distinct.begin(), distinct.end()), thr;
  thr.push_back(-std::numeric_limits<double>::infinity());
  for (size_t i = 0; i + 1 < u.size(); ++i) thr.push_back(0.5 * (u[i] + u[i + 1]));
  thr.push_back(std::numeric_limits<double>::infinity());
  std::vector<std::pair<double, double>> v;
  for (double t : thr) {
    size_t miss = 0, fa = 0;
    for (double x : s.target) miss += x < t;
    for (double x : s.nontarget) fa += x >= t;
    v.emplace_back(double(fa) / s.nontarget.size(), double(miss) / s.target.size());
  }
  return v;
}

double BruteEer(const KeyedScores &s) {
  auto v = BruteVertices(s);
  for (size_t i = 0; i < v.size(); ++i) {
    double d = v[i].second - v[i].first;
    if (d < 0) continue;
    if (d == 0 || i == 0) return 100.0 * v[i].second;
    double d0 = v[i - 1].second - v[i - 1].first;
    double t = -d0 / (d - d0);
    return 100.0 * (v[i - 1].first + t * (v[i].first - v[i - 1].first));
  }
  return -1;
}

double BruteMinDcf(const KeyedScores &s, const OperatingPoint &op) {
  double wm = op.c_miss * op.p_target, wf = op.c_fa * (1 - op.p_target);
  double best = std::numeric_limits<double>::infinity();
  for (auto [fa, miss] : BruteVertices(s)) best = std::min(best, wm * miss + wf * fa);
  return best / std::min(wm, wf);
}

namespace {

template <typename Loss>
double CentralDifferenceError(Loss loss, std::vector<std::pair<double *, double>> params) {
  const double h = 1e-5;
  double worst = 0;
  for (auto [p, analytic] : params) {
    double keep = *p;
    *p = keep + h;
    double up = loss();
    *p = keep - h;
    double down = loss();
    *p = keep;
    double fd = (up - down) / (2 * h);
    double denom = std::max({std::abs(fd), std::abs(analytic), 1e-6});
    worst = std::max(worst, std::abs(fd - analytic) / denom);
  }
  return worst;
}

}  // namespace

double AeGradientError(AeModel m, const Matrix &x, const Matrix &t) {
  AeGradients g;
  AeLossAndGradients(m, x, t, &g);
  std::vector<std::pair<double *, double>> params;
  for (size_t l = 0; l < m.layers.size(); ++l) {
    for (Eigen::Index i = 0; i < m.layers[l].w.size(); ++i)
      params.emplace_back(&m.layers[l].w.data()[i], g.layers[l].w.data()[i]);
    for (Eigen::Index i = 0; i < m.layers[l].b.size(); ++i)
      params.emplace_back(&m.layers[l].b.data()[i], g.layers[l].b.data()[i]);
  }
  return CentralDifferenceError([&] { return AeLossAndGradients(m, x, t, nullptr); }, params);
}

double XvectorGradientError(XvectorModel m, const std::vector<Matrix> &chunks,
                            const std::vector<int> &labels) {
  XvectorGradients g;
  XvectorLossAndGradients(m, chunks, labels, &g);
  std::vector<std::pair<double *, double>> params;
  for (size_t l = 0; l < m.w.size(); ++l) {
    for (Eigen::Index i = 0; i < m.w[l].size(); ++i) params.emplace_back(&m.w[l].data()[i], g.w[l].data()[i]);
    for (Eigen::Index i = 0; i < m.b[l].size(); ++i) params.emplace_back(&m.b[l].data()[i], g.b[l].data()[i]);
  }
  return CentralDifferenceError([&] { return XvectorLossAndGradients(m, chunks, labels, nullptr); },
                                params);
}

}  // namespace oracle
}  // namespace svkit
