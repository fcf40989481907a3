// svkit/src/manifest.cc

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

#include "svkit/manifest.h"

#include <algorithm>
#include <cmath>
#include <filesystem>
#include <fstream>
#include <map>
#include <numeric>
#include <set>
#include <sstream>

#include "svkit/io-util.h"
#include "svkit/vad.h"

namespace svkit {

namespace fs = std::filesystem;

std::string ConditionName(Condition c) {
  switch (c) {
    case Condition::kClean: return "clean";
    case Condition::kNoise: return "noise";
    case Condition::kReverb: return "reverb";
    case Condition::kNoiseReverb: return "noise+reverb";
    case Condition::kMusic: return "music";
    case Condition::kBabble: return "babble";
  }
  return "clean";
}

Condition ParseCondition(const std::string &s) {
  for (Condition c : {Condition::kClean, Condition::kNoise, Condition::kReverb,
                      Condition::kNoiseReverb, Condition::kMusic, Condition::kBabble})
    if (ConditionName(c) == s) return c;
  throw DataError("unknown condition tag '" + s + "'");
}

std::string CorpusManifest::Resolve(const ManifestEntry &e) const {
  fs::path p(e.path);
  if (p.is_absolute() || base_dir.empty()) return p.string();
  return (fs::path(base_dir) / p).string();
}

void CorpusManifest::Validate() const {
  std::set<std::string> seen;
  for (const auto &e : entries) {
    if (!seen.insert(e.utt_id).second) throw DataError("duplicate utt_id " + e.utt_id);
    if (e.spec) e.spec->Validate();
  }
}

void CorpusManifest::CheckPaths() const {
  for (const auto &e : entries)
    if (!fs::exists(Resolve(e)))
      throw DataError("audio for " + e.utt_id + " not found: " + Resolve(e));
}

void CorpusManifest::SortById() {
  std::sort(entries.begin(), entries.end(),
            [](const ManifestEntry &a, const ManifestEntry &b) { return a.utt_id < b.utt_id; });
}

std::vector<std::string> CorpusManifest::Speakers() const {
  std::set<std::string> s;
  for (const auto &e : entries) s.insert(e.speaker_id);
  return {s.begin(), s.end()};
}

CorpusManifest ReadManifest(const std::string &path) {
  std::ifstream is(path);
  if (!is) throw DataError("cannot open manifest: " + path);
  CorpusManifest m;
  m.base_dir = fs::path(path).parent_path().string();
  std::string line;
  int lineno = 0;
  while (std::getline(is, line)) {
    ++lineno;
    if (line.empty()) continue;
    std::vector<std::string> cols;
    std::stringstream ss(line);
    std::string col;
    while (std::getline(ss, col, '\t')) cols.push_back(col);
    if (cols.size() != 4 && cols.size() != 5)
      throw DataError(path + ":" + std::to_string(lineno) + ": expected 4 or 5 columns");
    ManifestEntry e;
    e.utt_id = cols[0];
    e.path = cols[1];
    e.speaker_id = cols[2];
    try {
      e.condition = ParseCondition(cols[3]);
      if (cols.size() == 5) e.spec = AugmentSpec::Parse(cols[4]);
    } catch (const DataError &err) {
      throw DataError(path + ":" + std::to_string(lineno) + ": " + err.what());
    }
    m.entries.push_back(std::move(e));
  }
  m.Validate();
  return m;
}

std::string FormatManifest(const CorpusManifest &m) {
  CorpusManifest sorted = m;
  sorted.SortById();
  std::ostringstream os;
  for (const auto &e : sorted.entries) {
    os << e.utt_id << '\t' << e.path << '\t' << e.speaker_id << '\t'
       << ConditionName(e.condition);
    if (e.spec) os << '\t' << e.spec->ToString();
    os << '\n';
  }
  return os.str();
}

void WriteManifest(const CorpusManifest &m, const std::string &path) {
  m.Validate();
  WriteFileAtomic(path, FormatManifest(m));
}

AugmentPool AugmentPool::FromBanks(const NoiseBank &noises, const RoomSet &rooms,
                                   Split split) {
  AugmentPool pool;
  for (const auto &id : noises.Ids(split)) {
    if (id.rfind("music", 0) == 0)
      pool.music_ids.push_back(id);
    else if (id.rfind("babble", 0) == 0)
      pool.babble_ids.push_back(id);
    else
      pool.noise_ids.push_back(id);
  }
  for (const auto &id : rooms.Ids(split))
    pool.rooms.emplace_back(id, static_cast<int>(rooms.Get(id).rirs.size()));
  return pool;
}

namespace {

template <typename T>
const T &Pick(const std::vector<T> &v, Rng &rng, const char *what) {
  if (v.empty()) throw DataError(std::string("augment pool has no ") + what);
  return v[UniformInt(rng, 0, static_cast<int64_t>(v.size()) - 1)];
}

void SetRoom(AugmentSpec &spec, const AugmentPool &pool, Rng &rng) {
  const auto &[id, n] = Pick(pool.rooms, rng, "rooms");
  if (n < 2) throw DataError("room " + id + " has fewer than two RIRs");
  int a = static_cast<int>(UniformInt(rng, 0, n - 1));
  int b = static_cast<int>(UniformInt(rng, 0, n - 2));
  if (b >= a) ++b;
  spec.room_id = id;
  spec.rir_index_speech = a;
  spec.rir_index_noise = b;
}

}  // namespace

AugmentSpec DrawSpec(Condition c, const AugmentPool &pool, SnrRange snr, Rng &rng,
                     int babble_min, int babble_max) {
  AugmentSpec spec;
  spec.seed = rng();
  auto set_snr = [&] { spec.snr_db = UniformReal(rng, snr.lo, snr.hi); };
  switch (c) {
    case Condition::kClean:
      break;
    case Condition::kNoise:
      spec.noise_id = Pick(pool.noise_ids, rng, "noises");
      set_snr();
      break;
    case Condition::kReverb:
      SetRoom(spec, pool, rng);
      break;
    case Condition::kNoiseReverb:
      spec.noise_id = Pick(pool.noise_ids, rng, "noises");
      set_snr();
      SetRoom(spec, pool, rng);
      break;
    case Condition::kMusic:
      spec.noise_id = Pick(pool.music_ids, rng, "music");
      set_snr();
      break;
    case Condition::kBabble: {
      const auto &src = pool.babble_ids;
      if (src.empty()) throw DataError("augment pool has no babble noises");
      int k = static_cast<int>(UniformInt(rng, babble_min, babble_max));
      std::string ids;
      for (int i = 0; i < k; ++i) {
        if (i) ids += '+';
        ids += Pick(src, rng, "babble noises");
      }
      spec.noise_id = ids;
      set_snr();
      break;
    }
  }
  return spec;
}

namespace {

std::string ShortTag(Condition c) {
  switch (c) {
    case Condition::kClean: return "c";
    case Condition::kNoise: return "n";
    case Condition::kReverb: return "r";
    case Condition::kNoiseReverb: return "rn";
    case Condition::kMusic: return "m";
    case Condition::kBabble: return "b";
  }
  return "x";
}

Condition DrawCondition(const ConditionMix &mix, Rng &rng) {
  double total = 0;
  for (const auto &[c, w] : mix.weights) total += w;
  if (!(total > 0)) throw DataError("condition mix has no positive weights");
  double u = UniformReal(rng, 0.0, total);
  for (const auto &[c, w] : mix.weights) {
    if (u < w) return c;
    u -= w;
  }
  return mix.weights.back().first;
}

}  // namespace

CorpusManifest BuildMulticonditionManifest(const CorpusManifest &clean,
                                           double fraction,
                                           const ConditionMix &mix,
                                           const AugmentPool &pool,
                                           uint64_t seed) {
  if (!(fraction >= 0.0 && fraction <= 1.0))
    throw DataError("corruption fraction must lie in [0, 1]");
  clean.Validate();
  CorpusManifest out = clean;
  const size_t n = clean.entries.size();
  const size_t add = static_cast<size_t>(std::floor(fraction * n + 1e-9));
  if (add == 0) return out;
  Rng rng(seed);
  std::vector<size_t> order(n);
  std::iota(order.begin(), order.end(), 0);
  std::shuffle(order.begin(), order.end(), rng);
  order.resize(add);
  std::sort(order.begin(), order.end());
  std::set<std::string> ids;
  for (const auto &e : clean.entries) ids.insert(e.utt_id);
  for (size_t k = 0; k < add; ++k) {
    const ManifestEntry &src = clean.entries[order[k]];
    ManifestEntry e = src;
    e.condition = DrawCondition(mix, rng);
    e.spec = DrawSpec(e.condition, pool, mix.snr, rng);
    e.utt_id = src.utt_id + "-mc" + ShortTag(e.condition);
    for (int dup = 1; ids.count(e.utt_id); ++dup)
      e.utt_id = src.utt_id + "-mc" + ShortTag(e.condition) + std::to_string(dup);
    ids.insert(e.utt_id);
    out.entries.push_back(std::move(e));
  }
  return out;
}

ReplicaRecipe ReplicaRecipe::Default() {
  ReplicaRecipe r;
  r.kinds = {{ReplicaKind::kReverb, {}},
             {ReplicaKind::kForeground, {0.0, 15.0}},
             {ReplicaKind::kBackground, {5.0, 15.0}},
             {ReplicaKind::kBabble, {13.0, 20.0}},
             {ReplicaKind::kStationary, {0.0, 20.0}}};
  return r;
}

FrameCounter WavFrameCounter(const CorpusManifest &m) {
  return [&m](const ManifestEntry &e) -> size_t {
    // data chunk size / 2 bytes per sample; header sizes are small.
    Waveform w = ReadWav(m.Resolve(e));
    return static_cast<size_t>(std::max<Eigen::Index>(
        0, w.size() < kFrameLength ? 0 : (w.size() - kFrameLength) / kFrameShift + 1));
  };
}

CorpusManifest BuildReplicaManifest(const CorpusManifest &clean,
                                    const ReplicaRecipe &recipe, size_t cap,
                                    const AugmentPool &pool, uint64_t seed,
                                    const FrameCounter &frames) {
  if (recipe.kinds.empty()) throw DataError("replica recipe is empty");
  clean.Validate();
  Rng rng(seed);
  std::vector<ManifestEntry> replicas;
  for (const auto &src : clean.entries) {
    for (size_t k = 0; k < recipe.kinds.size(); ++k) {
      const ReplicaSpec &rs = recipe.kinds[k];
      ManifestEntry e = src;
      Condition c = Condition::kNoise;
      std::string tag;
      switch (rs.kind) {
        case ReplicaKind::kReverb: c = Condition::kReverb; tag = "reverb"; break;
        case ReplicaKind::kForeground: c = Condition::kNoise; tag = "fg"; break;
        case ReplicaKind::kBackground: c = Condition::kMusic; tag = "music"; break;
        case ReplicaKind::kBabble: c = Condition::kBabble; tag = "babble"; break;
        case ReplicaKind::kStationary: c = Condition::kNoise; tag = "stat"; break;
      }
      e.condition = c;
      e.spec = DrawSpec(c, pool, rs.snr, rng, recipe.babble_min, recipe.babble_max);
      e.utt_id = src.utt_id + "-" + tag + (k ? std::to_string(k) : "");
      replicas.push_back(std::move(e));
    }
  }
  std::vector<size_t> order(replicas.size());
  std::iota(order.begin(), order.end(), 0);
  std::shuffle(order.begin(), order.end(), rng);
  order.resize(std::min(cap, order.size()));
  std::sort(order.begin(), order.end());

  CorpusManifest pooled = clean;
  for (size_t i : order) pooled.entries.push_back(replicas[i]);

  // Replicas inherit the length of their clean source.
  std::map<std::string, size_t> length_of;
  for (const auto &e : clean.entries) length_of[e.path] = frames(e);
  std::map<std::string, int> per_speaker;
  std::vector<ManifestEntry> kept;
  for (auto &e : pooled.entries) {
    if (length_of[e.path] < recipe.min_frames) continue;
    ++per_speaker[e.speaker_id];
    kept.push_back(std::move(e));
  }
  CorpusManifest out;
  out.base_dir = clean.base_dir;
  for (auto &e : kept)
    if (per_speaker[e.speaker_id] >= recipe.min_utterances_per_speaker)
      out.entries.push_back(std::move(e));
  out.Validate();
  return out;
}

}  // namespace svkit
