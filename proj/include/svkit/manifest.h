// svkit/manifest.h

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

#ifndef SVKIT_MANIFEST_H_
#define SVKIT_MANIFEST_H_

#include <functional>
#include <optional>
#include <string>
#include <utility>
#include <vector>

#include "svkit/augment.h"

namespace svkit {

enum class Condition { kClean, kNoise, kReverb, kNoiseReverb, kMusic, kBabble };

std::string ConditionName(Condition c);
Condition ParseCondition(const std::string &s);

struct ManifestEntry {
  std::string utt_id;
  std::string path;  // relative to the manifest's base directory
  std::string speaker_id;
  Condition condition = Condition::kClean;
  /// When set, the entry denotes `path` corrupted by this spec.
  std::optional<AugmentSpec> spec;

  bool operator==(const ManifestEntry &) const = default;
};

struct CorpusManifest {
  std::vector<ManifestEntry> entries;
  std::string base_dir;  // directory that relative paths resolve against

  std::string Resolve(const ManifestEntry &e) const;
  /// Throws on duplicate utt_ids.
  void Validate() const;
  /// Throws when any entry's audio file is missing.
  void CheckPaths() const;
  void SortById();
  std::vector<std::string> Speakers() const;
};

/// One entry per line: utt_id, path, speaker_id, condition[, spec], tab
/// separated.  Entries are written sorted by utt_id.
CorpusManifest ReadManifest(const std::string &path);
void WriteManifest(const CorpusManifest &m, const std::string &path);
std::string FormatManifest(const CorpusManifest &m);

/// Noise and room identifiers a builder may draw from.
struct AugmentPool {
  std::vector<std::string> noise_ids;
  std::vector<std::string> music_ids;
  std::vector<std::string> babble_ids;
  std::vector<std::pair<std::string, int>> rooms;  // id, number of RIRs

  static AugmentPool FromBanks(const NoiseBank &noises, const RoomSet &rooms,
                               Split split);
};

struct SnrRange {
  double lo = 0.0;
  double hi = 15.0;
};

/// Weighted choice of corruption condition for added entries.
struct ConditionMix {
  std::vector<std::pair<Condition, double>> weights;
  SnrRange snr;
};

/// Draws a corruption of the given condition from the pool.
AugmentSpec DrawSpec(Condition c, const AugmentPool &pool, SnrRange snr, Rng &rng,
                     int babble_min = 3, int babble_max = 7);

/// All clean entries plus floor(fraction * N) corrupted copies of distinct
/// clean entries (sampled without replacement), conditions drawn from mix.
CorpusManifest BuildMulticonditionManifest(const CorpusManifest &clean,
                                           double fraction,
                                           const ConditionMix &mix,
                                           const AugmentPool &pool,
                                           uint64_t seed);

enum class ReplicaKind { kReverb, kForeground, kBackground, kBabble, kStationary };

struct ReplicaSpec {
  ReplicaKind kind;
  SnrRange snr;
};

/// Kinds and SNR ranges of the embedding-training augmentation recipe.
struct ReplicaRecipe {
  std::vector<ReplicaSpec> kinds;
  int babble_min = 3;
  int babble_max = 7;
  int min_utterances_per_speaker = 6;
  size_t min_frames = 500;

  static ReplicaRecipe Default();
};

/// Frame count of an entry's (clean) audio; used for the minimum-length rule.
using FrameCounter = std::function<size_t(const ManifestEntry &)>;

/// Counts 25 ms / 10 ms frames from the WAV header of the entry's audio.
FrameCounter WavFrameCounter(const CorpusManifest &m);

/// One replica per kind per clean utterance, a seeded subset of
/// min(cap, total) replicas pooled with the clean entries, then utterances
/// shorter than min_frames and speakers with fewer than
/// min_utterances_per_speaker surviving entries removed.
CorpusManifest BuildReplicaManifest(const CorpusManifest &clean,
                                    const ReplicaRecipe &recipe, size_t cap,
                                    const AugmentPool &pool, uint64_t seed,
                                    const FrameCounter &frames);

}  // namespace svkit

#endif  // SVKIT_MANIFEST_H_
