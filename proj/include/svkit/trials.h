// svkit/trials.h

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

#ifndef SVKIT_TRIALS_H_
#define SVKIT_TRIALS_H_

#include <string>
#include <vector>

namespace svkit {

enum class TrialKey { kTarget, kNontarget, kUnknown };

std::string TrialKeyName(TrialKey k);
TrialKey ParseTrialKey(const std::string &s);

struct Trial {
  /// Comma-joined for multi-session enrollment.
  std::string enroll_id;
  std::string test_id;
  TrialKey key = TrialKey::kUnknown;

  /// enroll_id split on ','.
  std::vector<std::string> EnrollSessions() const;
  bool operator==(const Trial &) const = default;
};

struct TrialList {
  std::vector<Trial> trials;
};

struct Score {
  std::string enroll_id;
  std::string test_id;
  double score = 0.0;
};

struct ScoreSet {
  std::vector<Score> scores;
};

/// Whitespace-separated "enroll test key" lines.  Blank lines and lines
/// starting with '#' are skipped.
TrialList ReadTrials(const std::string &path);
void WriteTrials(const TrialList &t, const std::string &path);

/// "enroll test score" lines, scores with 6 decimals.
std::string FormatScores(const ScoreSet &s);
void WriteScores(const ScoreSet &s, const std::string &path);
ScoreSet ReadScores(const std::string &path);

/// Scores split by key.  Pairs are matched by (enroll, test); trials with
/// key unknown are skipped.  Every keyed trial must have a score.
struct KeyedScores {
  std::vector<double> target;
  std::vector<double> nontarget;
};

KeyedScores JoinKeys(const ScoreSet &s, const TrialList &t);

}  // namespace svkit

#endif  // SVKIT_TRIALS_H_
