// svkit/metrics.h

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

#ifndef SVKIT_METRICS_H_
#define SVKIT_METRICS_H_

#include <string>
#include <vector>

#include "svkit/trials.h"

namespace svkit {

struct OperatingPoint {
  double p_target = 0.01;
  double c_miss = 1.0;
  double c_fa = 1.0;

  void Validate() const;
  /// "p=<p>,cmiss=<c>,cfa=<c>", also used as the summary column suffix.
  std::string Name() const;
  static OperatingPoint Parse(const std::string &text);
};

/// p_target 0.001, 0.01 and 0.005 with unit costs.
std::vector<OperatingPoint> DefaultOperatingPoints();

struct DetPoint {
  /// Accept if score >= threshold; the last point has threshold +inf.
  double threshold;
  double p_fa;
  double p_miss;
};

/// One vertex per distinct score plus the reject-all vertex.
struct DetCurve {
  std::vector<DetPoint> points;
};

DetCurve DetPoints(const KeyedScores &s);

/// Equal error rate in percent, linearly interpolated between the two ROC
/// vertices that bracket p_miss = p_fa.
double ComputeEer(const KeyedScores &s);
double EerFromCurve(const DetCurve &c);

struct DcfResult {
  double normalized;
  double unnormalized;
  double threshold;
};

DcfResult ComputeMinDcf(const KeyedScores &s, const OperatingPoint &op);
DcfResult MinDcfFromCurve(const DetCurve &c, const OperatingPoint &op);

/// Inverse standard normal CDF.
double Probit(double p);

struct ConditionResult {
  std::string condition;
  DetCurve curve;
  double eer = 0.0;
  std::vector<DcfResult> min_dcf;  // one per operating point
};

ConditionResult Evaluate(const std::string &condition, const KeyedScores &s,
                         const std::vector<OperatingPoint> &ops);

/// Writes summary.csv, det-<condition>.csv per result and det.svg (omitted
/// when there are no results).  Returns the paths written.
std::vector<std::string> EmitReport(const std::vector<ConditionResult> &results,
                                    const std::vector<OperatingPoint> &ops,
                                    const std::string &out_dir);

std::string FormatSummaryCsv(const std::vector<ConditionResult> &results,
                             const std::vector<OperatingPoint> &ops);
std::string FormatDetCsv(const DetCurve &c);
std::string RenderDetSvg(const std::vector<ConditionResult> &results,
                         const std::vector<OperatingPoint> &ops);

}  // namespace svkit

#endif  // SVKIT_METRICS_H_
