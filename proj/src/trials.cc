// svkit/src/trials.cc

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

#include "svkit/trials.h"

#include <cmath>
#include <cstdio>
#include <fstream>
#include <map>
#include <sstream>

#include "svkit/base.h"
#include "svkit/io-util.h"

namespace svkit {

std::string TrialKeyName(TrialKey k) {
  switch (k) {
    case TrialKey::kTarget: return "target";
    case TrialKey::kNontarget: return "nontarget";
    case TrialKey::kUnknown: return "unknown";
  }
  return "unknown";
}

TrialKey ParseTrialKey(const std::string &s) {
  if (s == "target") return TrialKey::kTarget;
  if (s == "nontarget") return TrialKey::kNontarget;
  if (s == "unknown") return TrialKey::kUnknown;
  throw DataError("bad trial key '" + s + "'");
}

std::vector<std::string> Trial::EnrollSessions() const {
  std::vector<std::string> out;
  std::stringstream ss(enroll_id);
  std::string part;
  while (std::getline(ss, part, ','))
    if (!part.empty()) out.push_back(part);
  if (out.empty()) throw DataError("empty enrollment id in trial");
  return out;
}

namespace {

std::vector<std::vector<std::string>> ReadFields(const std::string &path) {
  std::ifstream in(path);
  if (!in) throw DataError("cannot open " + path);
  std::vector<std::vector<std::string>> rows;
  std::string line;
  int lineno = 0;
  while (std::getline(in, line)) {
    ++lineno;
    std::istringstream ls(line);
    std::vector<std::string> f;
    std::string tok;
    while (ls >> tok) f.push_back(tok);
    if (f.empty() || f[0][0] == '#') continue;
    if (f.size() != 3)
      throw DataError(path + ":" + std::to_string(lineno) + ": expected 3 fields");
    rows.push_back(std::move(f));
  }
  return rows;
}

}  // namespace

TrialList ReadTrials(const std::string &path) {
  TrialList t;
  for (auto &f : ReadFields(path)) t.trials.push_back({f[0], f[1], ParseTrialKey(f[2])});
  return t;
}

void WriteTrials(const TrialList &t, const std::string &path) {
  std::string out;
  for (const auto &tr : t.trials)
    out += tr.enroll_id + " " + tr.test_id + " " + TrialKeyName(tr.key) + "\n";
  WriteFileAtomic(path, out);
}

std::string FormatScores(const ScoreSet &s) {
  std::string out;
  char buf[64];
  for (const auto &sc : s.scores) {
    if (!std::isfinite(sc.score))
      throw NumericError("non-finite score for " + sc.enroll_id + " " + sc.test_id);
    std::snprintf(buf, sizeof(buf), "%.6f", sc.score);
    out += sc.enroll_id + " " + sc.test_id + " " + buf + "\n";
  }
  return out;
}

void WriteScores(const ScoreSet &s, const std::string &path) {
  WriteFileAtomic(path, FormatScores(s));
}

ScoreSet ReadScores(const std::string &path) {
  ScoreSet s;
  for (auto &f : ReadFields(path)) {
    char *end = nullptr;
    double v = std::strtod(f[2].c_str(), &end);
    if (end == f[2].c_str() || *end != '\0' || !std::isfinite(v))
      throw DataError(path + ": bad score '" + f[2] + "'");
    s.scores.push_back({f[0], f[1], v});
  }
  return s;
}

KeyedScores JoinKeys(const ScoreSet &s, const TrialList &t) {
  std::map<std::pair<std::string, std::string>, double> lookup;
  for (const auto &sc : s.scores) lookup[{sc.enroll_id, sc.test_id}] = sc.score;
  KeyedScores k;
  for (const auto &tr : t.trials) {
    if (tr.key == TrialKey::kUnknown) continue;
    auto it = lookup.find({tr.enroll_id, tr.test_id});
    if (it == lookup.end())
      throw DataError("no score for trial " + tr.enroll_id + " " + tr.test_id);
    (tr.key == TrialKey::kTarget ? k.target : k.nontarget).push_back(it->second);
  }
  return k;
}

}  // namespace svkit
