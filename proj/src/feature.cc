// svkit/src/feature.cc

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

#include "svkit/feature.h"

#include <algorithm>
#include <cmath>

#include "svkit/io-util.h"

namespace svkit {

void FeatureMatrix::Validate() const {
  if (!data.allFinite()) throw DataError("feature matrix has non-finite values");
}

size_t FrameMask::NumActive() const {
  return static_cast<size_t>(std::count(active.begin(), active.end(), true));
}

double FrameMask::ActiveFraction() const {
  return active.empty() ? 0.0
                        : static_cast<double>(NumActive()) / active.size();
}

namespace {

// d_t = sum_{k=1..2} k (c_{t+k} - c_{t-k}) / (2 sum k^2).
Matrix RegressionDelta(const Matrix &c) {
  const Eigen::Index n = c.rows();
  Matrix d(n, c.cols());
  auto at = [&](Eigen::Index t) { return c.row(std::clamp<Eigen::Index>(t, 0, n - 1)); };
  for (Eigen::Index t = 0; t < n; ++t)
    d.row(t) = ((at(t + 1) - at(t - 1)) + 2.0 * (at(t + 2) - at(t - 2))) / 10.0;
  return d;
}

}  // namespace

FeatureMatrix AppendDeltas(const FeatureMatrix &f) {
  if (f.NumFrames() < 5)
    throw DataError("AppendDeltas needs at least 5 frames, got " +
                    std::to_string(f.NumFrames()));
  Matrix d = RegressionDelta(f.data);
  Matrix dd = RegressionDelta(d);
  FeatureMatrix out;
  out.frame_shift_ms = f.frame_shift_ms;
  out.descriptor = f.descriptor + "+dd";
  out.data.resize(f.NumFrames(), 3 * f.Dim());
  out.data << f.data, d, dd;
  if (f.descriptor.rfind("mfcc", 0) == 0)
    out.descriptor = "mfcc" + std::to_string(3 * f.Dim());
  return out;
}

FeatureMatrix SlidingMvn(const FeatureMatrix &f, double window_s) {
  if (!(window_s > 0)) throw DataError("SlidingMvn window must be positive");
  const Eigen::Index n = f.NumFrames(), dim = f.Dim();
  const Eigen::Index win = std::max<Eigen::Index>(
      1, static_cast<Eigen::Index>(std::lround(window_s * 1000.0 / f.frame_shift_ms)));
  const Eigen::Index left = win / 2, right = win - left - 1;
  FeatureMatrix out = f;
  for (Eigen::Index t = 0; t < n; ++t) {
    Eigen::Index a = std::max<Eigen::Index>(0, t - left);
    Eigen::Index b = std::min<Eigen::Index>(n - 1, t + right);
    double count = static_cast<double>(b - a + 1);
    for (Eigen::Index d = 0; d < dim; ++d) {
      // Shifted by the frame's own value, so a constant window gives exactly
      // zero.
      const double ref = f.data(t, d);
      double sum = 0.0, sumsq = 0.0;
      for (Eigen::Index u = a; u <= b; ++u) {
        double x = f.data(u, d) - ref;
        sum += x;
        sumsq += x * x;
      }
      double mean = sum / count;
      double var = std::max(0.0, sumsq / count - mean * mean);
      double sd = std::max(std::sqrt(var), 1e-8);
      out.data(t, d) = -mean / sd;
    }
  }
  return out;
}

FeatureMatrix SelectActive(const FeatureMatrix &f, const FrameMask &mask) {
  if (mask.size() != static_cast<size_t>(f.NumFrames()))
    throw DataError("frame mask length " + std::to_string(mask.size()) +
                    " does not match " + std::to_string(f.NumFrames()) +
                    " frames");
  FeatureMatrix out;
  out.frame_shift_ms = f.frame_shift_ms;
  out.descriptor = f.descriptor;
  out.data.resize(static_cast<Eigen::Index>(mask.NumActive()), f.Dim());
  Eigen::Index r = 0;
  for (size_t t = 0; t < mask.size(); ++t)
    if (mask.active[t]) out.data.row(r++) = f.data.row(t);
  return out;
}

void WriteFeatureFile(const FeatureMatrix &f, const std::string &path) {
  ByteWriter w;
  w.Raw("SVKF1", 5);
  w.U32(static_cast<uint32_t>(f.NumFrames()));
  w.U32(static_cast<uint32_t>(f.Dim()));
  w.U32(0);
  for (Eigen::Index t = 0; t < f.NumFrames(); ++t)
    for (Eigen::Index d = 0; d < f.Dim(); ++d)
      w.F32(static_cast<float>(f.data(t, d)));
  WriteFileAtomic(path, w.Take());
}

FeatureMatrix ReadFeatureFile(const std::string &path) {
  ByteReader r(ReadFileBytes(path), path);
  r.ExpectMagic("SVKF1");
  uint32_t n = r.U32(), dim = r.U32();
  if (r.U32() != 0) throw DataError("reserved field non-zero: " + path);
  FeatureMatrix f;
  f.data.resize(n, dim);
  for (uint32_t t = 0; t < n; ++t)
    for (uint32_t d = 0; d < dim; ++d) f.data(t, d) = r.F32();
  if (!r.AtEnd()) throw DataError("trailing bytes in feature file: " + path);
  return f;
}

}  // namespace svkit
