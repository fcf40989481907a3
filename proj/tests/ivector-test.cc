// svkit/tests/ivector-test.cc

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

#include <cmath>
#include <filesystem>

#include "doctest.h"
#include "oracles.h"
#include "svkit/gmm.h"
#include "svkit/ivector.h"
#include "svkit/lda.h"

using namespace svkit;
using namespace svkit::oracle;
namespace fs = std::filesystem;

namespace {

FeatureMatrix Mixture(Rng &rng, int frames, int dim, int clusters) {
  Matrix centers = RandomMatrix(rng, clusters, dim, 3.0);
  FeatureMatrix f;
  f.data.resize(frames, dim);
  for (int t = 0; t < frames; ++t) {
    int c = static_cast<int>(rng() % clusters);
    for (int d = 0; d < dim; ++d) f.data(t, d) = centers(c, d) + (0.5 + 0.2 * c) * StdNormal(rng);
  }
  return f;
}

IvectorExtractor RandomExtractor(Rng &rng, int k, int d, int r) {
  IvectorExtractor e;
  e.ubm = RandomUbm(rng, k, d);
  e.t = RandomMatrix(rng, k * d, r, 0.7);
  return e;
}

SuffStats RandomStats(Rng &rng, int k, int d) {
  SuffStats s;
  s.n = Vector::NullaryExpr(k, [&](Eigen::Index) { return UniformReal(rng, 0.0, 30.0); });
  s.f = RandomMatrix(rng, k, d, 3.0);
  return s;
}

}  // namespace

TEST_CASE("ubm with one component is the sample gaussian") {
  Rng rng(1);
  FeatureMatrix f = Mixture(rng, 500, 3, 2);
  UbmTrainOptions o;
  o.num_components = 1;
  o.iters = 1;
  GmmUbm g = TrainUbm({f}, o).ubm;
  Vector mean = f.data.colwise().mean().transpose();
  Vector var = (f.data.rowwise() - mean.transpose()).array().square().colwise().mean().transpose();
  CHECK((g.means.row(0).transpose() - mean).cwiseAbs().maxCoeff() < 1e-10);
  CHECK((g.variances.row(0).transpose() - var).cwiseAbs().maxCoeff() < 1e-10);
  CHECK(g.weights(0) == doctest::Approx(1.0));
}

TEST_CASE("ubm log-likelihood is non-decreasing") {
  Rng rng(2);
  for (int trial = 0; trial < 4; ++trial) {
    FeatureMatrix f = Mixture(rng, 3000, 4, 6);
    UbmTrainOptions o;
    o.num_components = 4 + 2 * trial;
    o.iters = 12;
    o.kmeans_iters = trial % 2;
    o.seed = trial;
    UbmTrainResult r = TrainUbm({f}, o);
    REQUIRE(r.log_likelihood.size() == 13);
    for (size_t i = 1; i < r.log_likelihood.size(); ++i)
      CHECK(r.log_likelihood[i] >=
            r.log_likelihood[i - 1] - 1e-6 * std::abs(r.log_likelihood[i - 1]));
    r.ubm.Validate();
    Vector floor = 0.01 * (f.data.rowwise() - f.data.colwise().mean()).array().square().colwise().mean().transpose();
    for (int k = 0; k < r.ubm.NumComponents(); ++k)
      CHECK((r.ubm.variances.row(k).transpose().array() >= floor.array() * (1 - 1e-12)).all());
  }
}

TEST_CASE("ubm recovers two separated clusters") {
  Rng rng(3);
  FeatureMatrix f;
  f.data.resize(2000, 1);
  for (int t = 0; t < 2000; ++t) f.data(t, 0) = (t % 2 ? 5.0 : -5.0) + StdNormal(rng);
  UbmTrainOptions o;
  o.num_components = 2;
  o.iters = 10;
  GmmUbm g = TrainUbm({f}, o).ubm;
  double lo = std::min(g.means(0, 0), g.means(1, 0)), hi = std::max(g.means(0, 0), g.means(1, 0));
  CHECK(std::abs(lo + 5.0) < 0.1);
  CHECK(std::abs(hi - 5.0) < 0.1);
}

TEST_CASE("ubm training is deterministic and independent of workers") {
  Rng rng(4);
  std::vector<FeatureMatrix> feats;
  for (int i = 0; i < 3; ++i) feats.push_back(Mixture(rng, 4000, 3, 4));
  UbmTrainOptions o;
  o.num_components = 8;
  o.iters = 3;
  GmmUbm a = TrainUbm(feats, o, 1).ubm, b = TrainUbm(feats, o, 3).ubm;
  CHECK(a.means == b.means);
  CHECK(a.variances == b.variances);
  CHECK(a.weights == b.weights);
  o.num_components = 1201;
  CHECK_THROWS_AS(TrainUbm(feats, o), DataError);
}

TEST_CASE("sufficient statistics") {
  Rng rng(5);
  GmmUbm g = RandomUbm(rng, 5, 3);
  FeatureMatrix f;
  f.data = RandomMatrix(rng, 60, 3);
  FrameMask none, some;
  none.active.assign(60, false);
  some.active.resize(60);
  for (int t = 0; t < 60; ++t) some.active[t] = t % 3 != 0;

  SuffStats z = AccumulateStats(g, f, none);
  CHECK(z.n.isZero());
  CHECK(z.f.isZero());

  SuffStats s = AccumulateStats(g, f, some);
  SuffStats oracle = NaiveStats(g, SelectActive(f, some).data);
  CHECK((s.n - oracle.n).cwiseAbs().maxCoeff() < 1e-10);
  CHECK((s.f - oracle.f).cwiseAbs().maxCoeff() < 1e-10);
  CHECK(std::abs(s.n.sum() - 40.0) < 1e-12);

  GmmUbm one = RandomUbm(rng, 1, 3);
  SuffStats s1 = AccumulateStats(one, f, some);
  CHECK(s1.n(0) == doctest::Approx(40.0).epsilon(1e-14));
  CHECK((s1.f.row(0) - SelectActive(f, some).data.colwise().sum()).cwiseAbs().maxCoeff() < 1e-12);

  FeatureMatrix wrong;
  wrong.data = RandomMatrix(rng, 10, 4);
  FrameMask all;
  all.active.assign(10, true);
  CHECK_THROWS_AS(AccumulateStats(g, wrong, all), DataError);
}

TEST_CASE("ivector posterior: closed forms and dense solve") {
  IvectorExtractor scalar;
  scalar.ubm.weights = Vector::Ones(1);
  scalar.ubm.means = Matrix::Zero(1, 1);
  scalar.ubm.variances = Matrix::Ones(1, 1);
  scalar.t = Matrix::Ones(1, 1);
  SuffStats s{Vector::Ones(1), Matrix::Constant(1, 1, 2.0)};
  CHECK(ExtractIvector(scalar, s)(0) == doctest::Approx(1.0).epsilon(1e-15));

  Rng rng(6);
  for (int trial = 0; trial < 200; ++trial) {
    int k = 1 + rng() % 4, d = 1 + rng() % 3, r = 1 + rng() % std::min(5, k * d);
    IvectorExtractor e = RandomExtractor(rng, k, d, r);
    SuffStats st = RandomStats(rng, k, d);
    Vector w = ExtractIvector(e, st);
    CHECK(w.size() == r);
    CHECK((w - DenseIvector(e, st)).cwiseAbs().maxCoeff() < 1e-8);
    CHECK(ExtractIvector(e, SuffStats::Zero(k, d)).isZero());
  }
  IvectorExtractor e = RandomExtractor(rng, 3, 2, 2);
  CHECK_THROWS_AS(ExtractIvector(e, SuffStats::Zero(3, 3)), DataError);
}

TEST_CASE("total variability training") {
  Rng rng(7);
  const int k = 4, d = 3;
  GmmUbm g = RandomUbm(rng, k, d);
  // Utterance statistics with a low-rank speaker offset.
  Matrix basis = RandomMatrix(rng, k * d, 2, 0.5);
  std::vector<SuffStats> stats;
  for (int u = 0; u < 60; ++u) {
    Vector w = RandomMatrix(rng, 2, 1).col(0);
    SuffStats s;
    s.n = Vector::NullaryExpr(k, [&](Eigen::Index) { return UniformReal(rng, 5, 40); });
    s.f.resize(k, d);
    for (int c = 0; c < k; ++c)
      for (int i = 0; i < d; ++i)
        s.f(c, i) = s.n(c) * (g.means(c, i) + (basis * w)(c * d + i)) +
                    std::sqrt(s.n(c) * g.variances(c, i)) * StdNormal(rng);
    stats.push_back(s);
  }
  TvTrainOptions o;
  o.rank = 3;
  o.iters = 10;
  TvTrainResult r = TrainTv(stats, g, o);
  REQUIRE(r.objective.size() == 11);
  for (size_t i = 1; i < r.objective.size(); ++i)
    CHECK(r.objective[i] >= r.objective[i - 1] - 1e-6 * std::abs(r.objective[i - 1]));
  CHECK(r.objective.back() > r.objective.front());

  TvTrainResult again = TrainTv(stats, g, o, 4);
  CHECK(again.extractor.t == r.extractor.t);

  fs::path dir = fs::temp_directory_path() / "svkit-ivector-test";
  fs::create_directories(dir);
  SaveIvectorExtractor(r.extractor, (dir / "ie.mdl").string());
  IvectorExtractor back = LoadIvectorExtractor((dir / "ie.mdl").string());
  CHECK(ExtractIvector(back, stats[3]) == ExtractIvector(r.extractor, stats[3]));
  SaveUbm(g, (dir / "ubm.mdl").string());
  CHECK(LoadUbm((dir / "ubm.mdl").string()).means == g.means);

  o.rank = 61;
  CHECK_THROWS_AS(TrainTv(stats, g, o), UsageError);
  o.rank = 5;
  CHECK_THROWS_AS(TrainTv(std::vector<SuffStats>(stats.begin(), stats.begin() + 4), g, o),
                  DataError);
}

TEST_CASE("lda") {
  Matrix one(6, 1);
  one << -3, -2.5, -3.5, 4, 5, 4.5;
  std::vector<std::string> lab1{"a", "a", "a", "b", "b", "b"};
  LdaProjection p1 = TrainLda(one, lab1, 1);
  CHECK(p1.matrix(0, 0) > 0);

  Rng rng(8);
  const int d = 6, classes = 8, per = 20;
  Matrix centers = RandomMatrix(rng, classes, d, 2.0);
  Matrix mix = RandomMatrix(rng, d, d);
  Matrix x(classes * per, d);
  std::vector<std::string> labels;
  for (int c = 0; c < classes; ++c)
    for (int j = 0; j < per; ++j) {
      x.row(c * per + j) = centers.row(c) + (mix * RandomMatrix(rng, d, 1)).transpose();
      labels.push_back("s" + std::to_string(c));
    }
  LdaProjection p = TrainLda(x, labels, 3);
  CHECK(p.OutDim() == 3);
  CHECK(p.InDim() == d);

  // Fisher ratio of the leading direction beats random directions.
  Matrix sb = Matrix::Zero(d, d), sw = Matrix::Zero(d, d);
  Vector gm = x.colwise().mean().transpose();
  for (int c = 0; c < classes; ++c) {
    Vector m = x.middleRows(c * per, per).colwise().mean().transpose();
    sb += per * (m - gm) * (m - gm).transpose();
    for (int j = 0; j < per; ++j) {
      Vector r = x.row(c * per + j).transpose() - m;
      sw += r * r.transpose();
    }
  }
  auto fisher = [&](const Vector &v) { return v.dot(sb * v) / v.dot(sw * v); };
  double best = fisher(p.matrix.col(0));
  for (int i = 0; i < 1000; ++i) CHECK(fisher(RandomMatrix(rng, d, 1).col(0)) <= best * (1 + 1e-9));
  CHECK(fisher(p.matrix.col(1)) <= best * (1 + 1e-9));

  for (int i = 0; i < 20; ++i) {
    Vector v = RandomMatrix(rng, d, 1).col(0);
    Vector y = ProjectAndNorm(p, v);
    CHECK(std::abs(y.norm() - 1.0) < 1e-12);
    Vector scaled = p.global_mean + 10.0 * (v - p.global_mean);
    CHECK((ProjectAndNorm(p, scaled) - y).cwiseAbs().maxCoeff() < 1e-12);
  }
  CHECK_THROWS_AS(ProjectAndNorm(p, p.global_mean), NumericError);
  CHECK_THROWS_AS(TrainLda(x, labels, 8), UsageError);
  CHECK_THROWS_AS(TrainLda(one, {"a", "a", "a", "a", "a", "a"}, 1), DataError);

  fs::path dir = fs::temp_directory_path() / "svkit-ivector-test";
  fs::create_directories(dir);
  SaveLda(p, (dir / "lda.mdl").string());
  LdaProjection back = LoadLda((dir / "lda.mdl").string());
  CHECK(back.matrix == p.matrix);
}
