// svkit/tests/metrics-test.cc

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
#include <fstream>
#include <limits>
#include <set>
#include <sstream>

#include "doctest.h"
#include "oracles.h"
#include "svkit/base.h"
#include "svkit/metrics.h"
#include "svkit/trials.h"

using namespace svkit;
using namespace svkit::oracle;
namespace fs = std::filesystem;

namespace {

KeyedScores RandomScores(Rng &rng) {
  KeyedScores s;
  int nt = 1 + rng() % 40, nn = 1 + rng() % 80;
  double shift = UniformReal(rng, -1, 3);
  bool ties = rng() % 2;
  auto draw = [&](double mu) {
    double x = mu + StdNormal(rng);
    return ties ? std::round(x * 4) / 4 : x;
  };
  for (int i = 0; i < nt; ++i) s.target.push_back(draw(shift));
  for (int i = 0; i < nn; ++i) s.nontarget.push_back(draw(0));
  return s;
}

}  // namespace

TEST_CASE("eer worked examples") {
  CHECK(ComputeEer({{0.9, 0.8, 0.3}, {0.7, 0.2, 0.1}}) == doctest::Approx(100.0 / 3).epsilon(1e-12));
  CHECK(ComputeEer({{3, 4, 5}, {0, 1, 2}}) == 0.0);
  CHECK_THROWS_AS(ComputeEer({{}, {1.0}}), DataError);
  CHECK_THROWS_AS(ComputeEer({{1.0}, {}}), DataError);
}

TEST_CASE("min dcf worked examples") {
  OperatingPoint half{0.5, 1, 1};
  DcfResult r = ComputeMinDcf({{1, 0}, {0.5}}, half);
  CHECK(r.unnormalized == doctest::Approx(0.25));
  CHECK(r.normalized == doctest::Approx(0.5));
  CHECK(ComputeMinDcf({{3, 4}, {1, 2}}, half).normalized == 0.0);
  CHECK_THROWS_AS(OperatingPoint::Parse("1.5"), UsageError);
  OperatingPoint p = OperatingPoint::Parse("0.01:2:1");
  CHECK(p.c_miss == 2.0);
  CHECK(p.Name() == "p0.01-cm2-cfa1");
  CHECK(DefaultOperatingPoints()[0].Name() == "p0.001");
}

TEST_CASE("eer and min dcf equal brute force on random score sets") {
  Rng rng(2718);
  auto ops = DefaultOperatingPoints();
  ops.push_back({0.5, 1, 1});
  ops.push_back({0.2, 3, 0.5});
  for (int i = 0; i < 1000; ++i) {
    KeyedScores s = RandomScores(rng);
    CHECK(ComputeEer(s) == BruteEer(s));
    for (const auto &op : ops) {
      double d = ComputeMinDcf(s, op).normalized;
      CHECK(d == BruteMinDcf(s, op));
      CHECK(d <= 1.0);
    }
  }
}

TEST_CASE("eer is invariant under monotone transforms") {
  Rng rng(3);
  for (int i = 0; i < 100; ++i) {
    KeyedScores s = RandomScores(rng), t = s;
    for (double &x : t.target) x = std::exp(0.5 * x) + 3;
    for (double &x : t.nontarget) x = std::exp(0.5 * x) + 3;
    CHECK(ComputeEer(s) == ComputeEer(t));
  }
}

TEST_CASE("eer of uninformative scores is near 50 percent") {
  Rng rng(12);
  KeyedScores s;
  for (int i = 0; i < 10000; ++i) (rng() % 2 ? s.target : s.nontarget).push_back(StdNormal(rng));
  CHECK(std::abs(ComputeEer(s) - 50.0) < 2.0);
}

TEST_CASE("det curve staircase") {
  DetCurve c = DetPoints({{1.0}, {0.0}});
  REQUIRE(c.points.size() == 3);
  CHECK((c.points[0].p_fa == 1 && c.points[0].p_miss == 0));
  CHECK((c.points[1].p_fa == 0 && c.points[1].p_miss == 0));
  CHECK((c.points[2].p_fa == 0 && c.points[2].p_miss == 1));
  CHECK(std::isinf(c.points[2].threshold));

  Rng rng(77);
  for (int i = 0; i < 1000; ++i) {
    KeyedScores s = RandomScores(rng);
    DetCurve d = DetPoints(s);
    const auto &p = d.points;
    for (size_t j = 1; j < p.size(); ++j) {
      CHECK(p[j].threshold > p[j - 1].threshold);
      CHECK(p[j].p_fa <= p[j - 1].p_fa);
      CHECK(p[j].p_miss >= p[j - 1].p_miss);
    }
    // The interpolated EER point sits on a segment of the curve.
    double e = ComputeEer(s) / 100;
    bool on = false;
    for (size_t j = 1; j < p.size() && !on; ++j) {
      double dx = p[j].p_fa - p[j - 1].p_fa, dy = p[j].p_miss - p[j - 1].p_miss;
      double cross = (e - p[j - 1].p_fa) * dy - (e - p[j - 1].p_miss) * dx;
      bool inside = e <= std::max(p[j].p_fa, p[j - 1].p_fa) + 1e-12 &&
                    e >= std::min(p[j].p_fa, p[j - 1].p_fa) - 1e-12 &&
                    e <= std::max(p[j].p_miss, p[j - 1].p_miss) + 1e-12 &&
                    e >= std::min(p[j].p_miss, p[j - 1].p_miss) - 1e-12;
      on = inside && std::abs(cross) < 1e-12;
    }
    CHECK(on);
    // Balanced, unit-cost minDCF is bounded by twice the EER.
    CHECK(ComputeMinDcf(s, {0.5, 1, 1}).normalized <= 2 * e + 1e-12);
  }
}

TEST_CASE("probit") {
  CHECK(Probit(0.5) == 0.0);
  CHECK(Probit(0.975) == doctest::Approx(1.959963984540054).epsilon(1e-12));
  CHECK(Probit(0.001) == doctest::Approx(-3.090232306167813).epsilon(1e-12));
  CHECK(std::isinf(Probit(0.0)));
  CHECK_THROWS_AS(Probit(1.5), DataError);
}

TEST_CASE("report artifacts") {
  fs::path dir = fs::temp_directory_path() / "svkit-metrics-test";
  fs::remove_all(dir);
  auto ops = DefaultOperatingPoints();
  auto files = EmitReport({}, ops, dir.string());
  CHECK(files.size() == 1);
  std::ifstream in(dir / "summary.csv");
  std::string header;
  std::getline(in, header);
  CHECK(header == "condition,eer_pct,min_dcf_p0.001,min_dcf_p0.01,min_dcf_p0.005");

  ConditionResult r = Evaluate("clean", {{0.9, 0.8, 0.3}, {0.7, 0.2, 0.1}}, ops);
  files = EmitReport({r}, ops, dir.string());
  CHECK(files.size() == 3);
  std::ifstream det(dir / "det-clean.csv");
  int rows = 0;
  std::string line;
  while (std::getline(det, line)) ++rows;
  CHECK(rows == static_cast<int>(r.curve.points.size()) + 1);
  CHECK(FormatSummaryCsv({r}, ops).find("clean,33.333,") != std::string::npos);
  std::string svg = RenderDetSvg({r}, ops);
  CHECK(svg.rfind("<svg", 0) == 0);
  CHECK(svg.find("</svg>") != std::string::npos);
}

TEST_CASE("trial and score files") {
  fs::path dir = fs::temp_directory_path() / "svkit-trials-test";
  fs::create_directories(dir);
  TrialList t{{{"a,b", "c", TrialKey::kTarget}, {"a", "d", TrialKey::kNontarget},
               {"e", "f", TrialKey::kUnknown}}};
  WriteTrials(t, (dir / "trials").string());
  TrialList r = ReadTrials((dir / "trials").string());
  CHECK(r.trials == t.trials);
  CHECK(r.trials[0].EnrollSessions() == std::vector<std::string>{"a", "b"});

  ScoreSet s{{{"a,b", "c", 1.23456789}, {"a", "d", -0.5}}};
  CHECK(FormatScores(s) == "a,b c 1.234568\na d -0.500000\n");
  WriteScores(s, (dir / "scores").string());
  KeyedScores k = JoinKeys(ReadScores((dir / "scores").string()), r);
  CHECK(k.target.size() == 1);
  CHECK(k.nontarget.size() == 1);
  s.scores.pop_back();
  CHECK_THROWS_AS(JoinKeys(s, t), DataError);
  std::ofstream((dir / "bad")) << "a b maybe\n";
  CHECK_THROWS_AS(ReadTrials((dir / "bad").string()), DataError);
}
