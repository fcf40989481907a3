// svkit/src/metrics.cc

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

#include "svkit/metrics.h"

#include <algorithm>
#include <cmath>
#include <cstdio>
#include <filesystem>
#include <limits>
#include <sstream>

#include <boost/math/special_functions/erf.hpp>

#include "svkit/base.h"
#include "svkit/io-util.h"

namespace svkit {

namespace {

std::string Fmt(const char *fmt, double v) {
  char buf[64];
  std::snprintf(buf, sizeof(buf), fmt, v);
  return buf;
}

void CheckClasses(const KeyedScores &s) {
  if (s.target.empty() || s.nontarget.empty())
    throw DataError("need at least one target and one nontarget score");
  for (double v : s.target)
    if (!std::isfinite(v)) throw DataError("non-finite target score");
  for (double v : s.nontarget)
    if (!std::isfinite(v)) throw DataError("non-finite nontarget score");
}

}  // namespace

void OperatingPoint::Validate() const {
  if (!(p_target > 0.0 && p_target < 1.0))
    throw UsageError("operating point prior must be in (0,1)");
  if (!(c_miss > 0.0 && c_fa > 0.0)) throw UsageError("operating point costs must be positive");
}

std::string OperatingPoint::Name() const {
  std::string n = Fmt("p%g", p_target);
  if (c_miss != 1.0 || c_fa != 1.0) n += Fmt("-cm%g", c_miss) + Fmt("-cfa%g", c_fa);
  return n;
}

OperatingPoint OperatingPoint::Parse(const std::string &text) {
  std::vector<double> v;
  std::stringstream ss(text);
  std::string part;
  while (std::getline(ss, part, ':')) {
    char *end = nullptr;
    double x = std::strtod(part.c_str(), &end);
    if (part.empty() || *end != '\0') throw UsageError("bad operating point '" + text + "'");
    v.push_back(x);
  }
  if (v.size() != 1 && v.size() != 3) throw UsageError("bad operating point '" + text + "'");
  OperatingPoint op;
  op.p_target = v[0];
  if (v.size() == 3) {
    op.c_miss = v[1];
    op.c_fa = v[2];
  }
  op.Validate();
  return op;
}

std::vector<OperatingPoint> DefaultOperatingPoints() {
  return {{0.001, 1, 1}, {0.01, 1, 1}, {0.005, 1, 1}};
}

DetCurve DetPoints(const KeyedScores &s) {
  CheckClasses(s);
  std::vector<std::pair<double, bool>> all;
  all.reserve(s.target.size() + s.nontarget.size());
  for (double v : s.target) all.emplace_back(v, true);
  for (double v : s.nontarget) all.emplace_back(v, false);
  std::sort(all.begin(), all.end(),
            [](const auto &a, const auto &b) { return a.first < b.first; });
  const double nt = s.target.size(), nn = s.nontarget.size();
  size_t tar_below = 0, non_below = 0;
  DetCurve c;
  for (size_t i = 0; i < all.size();) {
    double thr = all[i].first;
    c.points.push_back({thr, (nn - non_below) / nn, tar_below / nt});
    for (; i < all.size() && all[i].first == thr; ++i)
      (all[i].second ? tar_below : non_below)++;
  }
  c.points.push_back({std::numeric_limits<double>::infinity(), 0.0, 1.0});
  return c;
}

double EerFromCurve(const DetCurve &c) {
  const auto &p = c.points;
  for (size_t i = 0; i < p.size(); ++i) {
    double d = p[i].p_miss - p[i].p_fa;
    if (d < 0) continue;
    if (d == 0 || i == 0) return 100.0 * p[i].p_miss;
    double d0 = p[i - 1].p_miss - p[i - 1].p_fa;
    double t = -d0 / (d - d0);
    return 100.0 * (p[i - 1].p_fa + t * (p[i].p_fa - p[i - 1].p_fa));
  }
  throw NumericError("ROC sweep has no equal-error crossing");
}

double ComputeEer(const KeyedScores &s) { return EerFromCurve(DetPoints(s)); }

DcfResult MinDcfFromCurve(const DetCurve &c, const OperatingPoint &op) {
  op.Validate();
  const double wm = op.c_miss * op.p_target, wf = op.c_fa * (1.0 - op.p_target);
  DcfResult best{0, std::numeric_limits<double>::infinity(), 0};
  for (const auto &pt : c.points) {
    double cost = wm * pt.p_miss + wf * pt.p_fa;
    if (cost < best.unnormalized) {
      best.unnormalized = cost;
      best.threshold = pt.threshold;
    }
  }
  best.normalized = best.unnormalized / std::min(wm, wf);
  return best;
}

DcfResult ComputeMinDcf(const KeyedScores &s, const OperatingPoint &op) {
  return MinDcfFromCurve(DetPoints(s), op);
}

double Probit(double p) {
  if (!(p >= 0.0 && p <= 1.0)) throw DataError("probit argument outside [0,1]");
  if (p == 0.0) return -std::numeric_limits<double>::infinity();
  if (p == 1.0) return std::numeric_limits<double>::infinity();
  return std::sqrt(2.0) * boost::math::erf_inv(2.0 * p - 1.0);
}

ConditionResult Evaluate(const std::string &condition, const KeyedScores &s,
                         const std::vector<OperatingPoint> &ops) {
  ConditionResult r;
  r.condition = condition;
  r.curve = DetPoints(s);
  r.eer = EerFromCurve(r.curve);
  for (const auto &op : ops) r.min_dcf.push_back(MinDcfFromCurve(r.curve, op));
  return r;
}

std::string FormatSummaryCsv(const std::vector<ConditionResult> &results,
                             const std::vector<OperatingPoint> &ops) {
  std::string out = "condition,eer_pct";
  for (const auto &op : ops) out += ",min_dcf_" + op.Name();
  out += "\n";
  for (const auto &r : results) {
    if (r.min_dcf.size() != ops.size())
      throw DataError("result '" + r.condition + "' has wrong operating point count");
    out += r.condition + Fmt(",%.3f", r.eer);
    for (const auto &d : r.min_dcf) out += Fmt(",%.4f", d.normalized);
    out += "\n";
  }
  return out;
}

std::string FormatDetCsv(const DetCurve &c) {
  std::string out = "threshold,p_fa,p_miss\n";
  for (const auto &p : c.points) {
    out += std::isinf(p.threshold) ? std::string("inf") : Fmt("%.6f", p.threshold);
    out += Fmt(",%.6f", p.p_fa) + Fmt(",%.6f", p.p_miss) + "\n";
  }
  return out;
}

std::string RenderDetSvg(const std::vector<ConditionResult> &results,
                         const std::vector<OperatingPoint> &ops) {
  const double lo = 0.0005, hi = 0.8;
  const double size = 480, margin = 60;
  const double plo = Probit(lo), phi = Probit(hi);
  auto coord = [&](double p) {
    p = std::clamp(p, lo, hi);
    return (Probit(p) - plo) / (phi - plo) * size;
  };
  auto x = [&](double p) { return margin + coord(p); };
  auto y = [&](double p) { return margin + size - coord(p); };
  const char *colors[] = {"#1f77b4", "#d62728", "#2ca02c", "#9467bd",
                          "#ff7f0e", "#8c564b", "#e377c2", "#17becf"};
  const char *marks[] = {"circle", "rect", "diamond"};

  std::ostringstream o;
  double full = size + 2 * margin;
  o << "<svg xmlns=\"http://www.w3.org/2000/svg\" width=\"" << full + 200 << "\" height=\""
    << full << "\" font-family=\"sans-serif\" font-size=\"11\">\n";
  o << "<rect x=\"" << margin << "\" y=\"" << margin << "\" width=\"" << size
    << "\" height=\"" << size << "\" fill=\"white\" stroke=\"black\"/>\n";
  for (double t : {0.001, 0.002, 0.005, 0.01, 0.02, 0.05, 0.1, 0.2, 0.4, 0.6, 0.8}) {
    std::string label = Fmt("%g", 100 * t);
    o << "<line x1=\"" << x(t) << "\" y1=\"" << margin << "\" x2=\"" << x(t) << "\" y2=\""
      << margin + size << "\" stroke=\"#ddd\"/>\n";
    o << "<line x1=\"" << margin << "\" y1=\"" << y(t) << "\" x2=\"" << margin + size
      << "\" y2=\"" << y(t) << "\" stroke=\"#ddd\"/>\n";
    o << "<text x=\"" << x(t) << "\" y=\"" << margin + size + 14
      << "\" text-anchor=\"middle\">" << label << "</text>\n";
    o << "<text x=\"" << margin - 4 << "\" y=\"" << y(t) + 4 << "\" text-anchor=\"end\">"
      << label << "</text>\n";
  }
  o << "<line x1=\"" << x(lo) << "\" y1=\"" << y(lo) << "\" x2=\"" << x(hi) << "\" y2=\""
    << y(hi) << "\" stroke=\"#999\" stroke-dasharray=\"4,3\"/>\n";
  o << "<text x=\"" << margin + size / 2 << "\" y=\"" << full - 16
    << "\" text-anchor=\"middle\">False alarm probability (%)</text>\n";
  o << "<text x=\"16\" y=\"" << margin + size / 2 << "\" text-anchor=\"middle\" transform=\"rotate(-90 16 "
    << margin + size / 2 << ")\">Miss probability (%)</text>\n";

  for (size_t i = 0; i < results.size(); ++i) {
    const auto &r = results[i];
    const char *col = colors[i % 8];
    o << "<polyline fill=\"none\" stroke=\"" << col << "\" stroke-width=\"1.5\" points=\"";
    const auto &pts = r.curve.points;
    for (size_t j = 0; j < pts.size(); ++j) {
      // Staircase: horizontal then vertical between vertices.
      if (j > 0) o << x(pts[j].p_fa) << "," << y(pts[j - 1].p_miss) << " ";
      o << x(pts[j].p_fa) << "," << y(pts[j].p_miss) << " ";
    }
    o << "\"/>\n";
    for (size_t k = 0; k < r.min_dcf.size() && k < ops.size(); ++k) {
      const DetPoint *at = nullptr;
      for (const auto &p : pts)
        if (p.threshold == r.min_dcf[k].threshold) at = &p;
      if (!at) continue;
      double cx = x(at->p_fa), cy = y(at->p_miss);
      std::string shape = marks[k % 3];
      if (shape == "circle")
        o << "<circle cx=\"" << cx << "\" cy=\"" << cy << "\" r=\"4\"";
      else if (shape == "rect")
        o << "<rect x=\"" << cx - 4 << "\" y=\"" << cy - 4 << "\" width=\"8\" height=\"8\"";
      else
        o << "<polygon points=\"" << cx << "," << cy - 5 << " " << cx + 5 << "," << cy << " "
          << cx << "," << cy + 5 << " " << cx - 5 << "," << cy << "\"";
      o << " fill=\"none\" stroke=\"" << col << "\"/>\n";
    }
    double ly = margin + 14 + 16 * i;
    o << "<line x1=\"" << full << "\" y1=\"" << ly - 4 << "\" x2=\"" << full + 20 << "\" y2=\""
      << ly - 4 << "\" stroke=\"" << col << "\" stroke-width=\"2\"/>\n";
    o << "<text x=\"" << full + 26 << "\" y=\"" << ly << "\">" << r.condition
      << Fmt(" (EER %.2f%%)", r.eer) << "</text>\n";
  }
  for (size_t k = 0; k < ops.size(); ++k) {
    double ly = margin + 30 + 16 * (results.size() + k);
    o << "<text x=\"" << full << "\" y=\"" << ly << "\">" << marks[k % 3] << ": minDCF "
      << ops[k].Name() << "</text>\n";
  }
  o << "</svg>\n";
  return o.str();
}

std::vector<std::string> EmitReport(const std::vector<ConditionResult> &results,
                                    const std::vector<OperatingPoint> &ops,
                                    const std::string &out_dir) {
  namespace fs = std::filesystem;
  std::error_code ec;
  fs::create_directories(out_dir, ec);
  if (ec) throw DataError("cannot create " + out_dir + ": " + ec.message());
  std::vector<std::string> written;
  auto put = [&](const std::string &name, const std::string &text) {
    std::string path = (fs::path(out_dir) / name).string();
    WriteFileAtomic(path, text);
    written.push_back(path);
  };
  put("summary.csv", FormatSummaryCsv(results, ops));
  for (const auto &r : results) {
    for (char c : r.condition)
      if (c == '/' || c == '\\') throw DataError("condition name '" + r.condition + "' has a path separator");
    put("det-" + r.condition + ".csv", FormatDetCsv(r.curve));
  }
  if (!results.empty()) put("det.svg", RenderDetSvg(results, ops));
  return written;
}

}  // namespace svkit
